#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace thetafock {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

inline bool is_finite(Complex v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

// Integer power of a complex number (exponent >= 0).
inline Complex pow_int(Complex base, int exponent) {
  Complex result(1.0, 0.0);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

// Wraps a phase into (-pi, pi].
inline double wrap_phase(double phi) {
  double p = std::remainder(phi, kTwoPi);
  if (p <= -kPi) p += kTwoPi;
  return p;
}

// Compensated (Kahan) accumulator for complex terms.
class KahanSum {
 public:
  void add(Complex term) {
    add_part(re_, re_c_, term.real());
    add_part(im_, im_c_, term.imag());
  }
  Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double term) {
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double re_ = 0.0, re_c_ = 0.0;
  double im_ = 0.0, im_c_ = 0.0;
};

// A complex number stored as value() = mantissa * exp(scale), so that
// products with huge or tiny exponentials never overflow before the final
// combination.
class ScaledComplex {
 public:
  ScaledComplex() = default;
  ScaledComplex(Complex mantissa, double scale = 0.0) : m_(mantissa), s_(scale) {
    normalize();
  }

  static ScaledComplex from_log(double log_modulus, double phase) {
    if (log_modulus == -std::numeric_limits<double>::infinity())
      return ScaledComplex{};
    return ScaledComplex(std::polar(1.0, phase), log_modulus);
  }

  ScaledComplex& operator*=(const ScaledComplex& other) {
    m_ *= other.m_;
    s_ += other.s_;
    normalize();
    return *this;
  }
  ScaledComplex& operator*=(Complex v) { return (*this) *= ScaledComplex(v); }
  friend ScaledComplex operator*(ScaledComplex a, const ScaledComplex& b) {
    a *= b;
    return a;
  }

  bool is_zero() const { return m_ == Complex{0.0, 0.0}; }

  // s + log|m|; -inf for zero.
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return s_ + std::log(std::abs(m_));
  }
  double phase() const { return std::arg(m_); }

  // May overflow to inf / underflow to 0 when the scale is extreme.
  Complex value() const {
    if (is_zero()) return {0.0, 0.0};
    return m_ * std::exp(s_);
  }

 private:
  void normalize() {
    if (is_zero()) {
      s_ = 0.0;
      return;
    }
    double a = std::abs(m_);
    if (a > 1e8 || a < 1e-8) {
      double l = std::log(a);
      m_ /= a;
      s_ += l;
    }
  }
  Complex m_{0.0, 0.0};
  double s_ = 0.0;
};

// log(sum_i exp(logs[i])) without overflow; -inf for an empty list.
inline double log_sum_exp(std::span<const double> logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

namespace detail {

inline Complex pairwise_combine(std::span<const Complex> v) {
  if (v.size() <= 8) {
    KahanSum acc;
    for (Complex x : v) acc.add(x);
    return acc.value();
  }
  std::size_t mid = v.size() / 2;
  return pairwise_combine(v.subspan(0, mid)) + pairwise_combine(v.subspan(mid));
}

}  // namespace detail

inline constexpr std::size_t kSumBlock = 4096;

// Deterministic blocked summation: terms are grouped into fixed blocks of
// kSumBlock, each block is Kahan-accumulated, and block sums are combined by
// a fixed pairwise tree. The result is bit-identical for any thread count.
//
// MakeCtx builds a per-worker scratch object; Term is called as
// term(ctx, i) -> Complex.
template <class MakeCtx, class Term>
Complex blocked_sum_ctx(std::size_t n, unsigned threads, const MakeCtx& make_ctx,
                        const Term& term) {
  if (n == 0) return {0.0, 0.0};
  std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<Complex> partial(nblocks);

  auto run_block = [&](auto& ctx, std::size_t b) {
    std::size_t lo = b * kSumBlock;
    std::size_t hi = std::min(lo + kSumBlock, n);
    KahanSum acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(term(ctx, i));
    partial[b] = acc.value();
  };

  if (threads <= 1 || nblocks < 2) {
    auto ctx = make_ctx();
    for (std::size_t b = 0; b < nblocks; ++b) run_block(ctx, b);
  } else {
    unsigned nworkers = std::min<std::size_t>(threads, nblocks);
    std::vector<std::exception_ptr> errors(nworkers);
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (unsigned w = 0; w < nworkers; ++w) {
      pool.emplace_back([&, w] {
        try {
          auto ctx = make_ctx();
          for (std::size_t b = w; b < nblocks; b += nworkers) run_block(ctx, b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return detail::pairwise_combine(partial);
}

template <class Term>
Complex blocked_sum(std::size_t n, unsigned threads, const Term& term) {
  struct None {};
  return blocked_sum_ctx(
      n, threads, [] { return None{}; },
      [&](None&, std::size_t i) { return term(i); });
}

// Deterministic RNG with a platform-independent double mapping.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  Complex complex_in_box(double re_half_width, double im_half_width) {
    double re = uniform(-re_half_width, re_half_width);
    double im = uniform(-im_half_width, im_half_width);
    return {re, im};
  }
  long integer(long lo, long hi) {  // inclusive range, hi >= lo
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace thetafock

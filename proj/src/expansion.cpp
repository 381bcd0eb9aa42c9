#include "thetafock/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thetafock/basis.hpp"
#include "thetafock/character.hpp"
#include "thetafock/errors.hpp"

namespace thetafock {

namespace {

constexpr double kLogDoubleMax = 705.0;
constexpr double kCoeffThresholdScale = 1e-13;

// Bargmann norm of the monomial z'^k: prod_j pi * k_j! / nu^{k_j + 1}.
double log_monomial_norm(const SpaceConfig& cfg, const MultiIndex& k) {
  return cfg.transverse_dim() * std::log(kPi / cfg.nu) + k.log_factorial() -
         k.total() * std::log(cfg.nu);
}

Complex monomial_value(const MultiIndex& k, std::span<const Complex> zprime) {
  Complex v(1.0, 0.0);
  for (std::size_t j = 0; j < zprime.size(); ++j) v *= pow_int(zprime[j], k.k[j]);
  return v;
}

// Enumerates the tensor z'-grid of the rule (re/im per coordinate); returns
// node points and combined weights.
struct TransverseGrid {
  std::vector<std::vector<Complex>> points;
  std::vector<double> weights;
};

TransverseGrid transverse_grid(const Grid& grid) {
  const int d = grid.g - 1;
  const std::size_t q = grid.t.nodes.size();
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= q * q;

  TransverseGrid tg;
  tg.points.reserve(total);
  tg.weights.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    std::vector<Complex> pt(d);
    double w = 1.0;
    for (int j = d - 1; j >= 0; --j) {
      std::size_t it = rest % q;
      rest /= q;
      std::size_t is = rest % q;
      rest /= q;
      pt[j] = Complex(grid.t.nodes[is], grid.t.nodes[it]);
      w *= grid.t.weights[is] * grid.t.weights[it];
    }
    tg.points.push_back(std::move(pt));
    tg.weights.push_back(w);
  }
  return tg;
}

}  // namespace

Complex FourierSlice::eval(std::span<const Complex> zprime) const {
  KahanSum acc;
  for (const auto& [k, a] : monomials) acc.add(a * monomial_value(k, zprime));
  return acc.value();
}

std::vector<FourierSlice> slices(const Expansion& e) {
  std::vector<FourierSlice> out;
  for (const auto& [idx, a] : e.coeffs) {
    if (out.empty() || out.back().n != idx.n) {
      out.push_back(FourierSlice{idx.n, {}});
    }
    out.back().monomials.emplace_back(idx.k, a);
  }
  return out;
}

Complex fourier_slice(const SpaceConfig& cfg, const PointFn& f, long n,
                      std::span<const Complex> zprime, int m_samples) {
  if (m_samples < 2 * cfg.n_max + 2)
    throw std::invalid_argument(
        "fourier_slice: sample count below Nyquist for the declared n_max");
  Point u(Complex{}, std::vector<Complex>(zprime.begin(), zprime.end()));
  KahanSum acc;
  for (int j = 0; j < m_samples; ++j) {
    double x = static_cast<double>(j) / m_samples;
    u.z = Complex(x, 0.0);
    Complex h = std::exp(Complex(-0.5 * cfg.nu * x * x, -kTwoPi * cfg.alpha * x)) *
                f(u);
    acc.add(h * std::polar(1.0 / m_samples, -kTwoPi * n * x));
  }
  return acc.value();
}

Expansion expand(const SpaceConfig& cfg, const PointFn& f) {
  cfg.validate();
  Grid grid = build_grid(cfg);
  const int m = static_cast<int>(grid.x_nodes.size());
  TransverseGrid tg = transverse_grid(grid);
  const std::size_t n_nodes = tg.points.size();

  // h(x, z') on the sampling set, with the Fourier prefactor folded in.
  std::vector<std::vector<Complex>> h(n_nodes, std::vector<Complex>(m));
  double max_sample = 0.0;
  Point u;
  for (std::size_t p = 0; p < n_nodes; ++p) {
    u.zprime = tg.points[p];
    for (int j = 0; j < m; ++j) {
      double x = grid.x_nodes[j];
      u.z = Complex(x, 0.0);
      Complex fv = f(u);
      max_sample = std::max(max_sample, std::abs(fv));
      h[p][j] =
          std::exp(Complex(-0.5 * cfg.nu * x * x, -kTwoPi * cfg.alpha * x)) * fv;
    }
  }

  Expansion e;
  e.cfg = cfg;
  double threshold = kCoeffThresholdScale * max_sample;
  auto ks = multi_indices_up_to(cfg.transverse_dim(), cfg.k_max);
  std::vector<Complex> psi(n_nodes);
  for (long n = -cfg.n_max; n <= cfg.n_max; ++n) {
    for (std::size_t p = 0; p < n_nodes; ++p) {
      KahanSum acc;
      for (int j = 0; j < m; ++j)
        acc.add(h[p][j] * std::polar(grid.x_weight, -kTwoPi * n * grid.x_nodes[j]));
      psi[p] = acc.value();
    }
    for (const auto& k : ks) {
      KahanSum acc;
      for (std::size_t p = 0; p < n_nodes; ++p)
        acc.add(tg.weights[p] * psi[p] * std::conj(monomial_value(k, tg.points[p])));
      Complex a = acc.value() * std::exp(-log_monomial_norm(cfg, k));
      if (std::abs(a) > threshold) e.coeffs[BasisIndex{n, k}] = a;
    }
  }
  return e;
}

Complex reconstruct(const Expansion& e, const Point& u) {
  KahanSum acc;
  for (const auto& [idx, a] : e.coeffs) {
    LogValue lv = basis_eval_log(e.cfg, idx, u);
    if (lv.log_modulus == -std::numeric_limits<double>::infinity()) continue;
    if (lv.log_modulus + std::log(std::abs(a)) > kLogDoubleMax)
      throw OverflowError("reconstruct: term overflows double range");
    acc.add(a * lv.to_complex());
  }
  return acc.value();
}

PointFn as_function(const Expansion& e) {
  return [e](const Point& u) { return reconstruct(e, u); };
}

double norm_growth(const Expansion& e) {
  double log_total = log_norm_growth(e);
  if (log_total > 709.0)
    throw OverflowError("norm_growth: value overflows; use log_norm_growth");
  KahanSum acc;
  for (const auto& [idx, a] : e.coeffs)
    acc.add(std::norm(a) * std::exp(log_norm_squared(e.cfg, idx)));
  return acc.value().real();
}

double log_norm_growth(const Expansion& e) {
  std::vector<double> logs;
  logs.reserve(e.coeffs.size());
  for (const auto& [idx, a] : e.coeffs) {
    if (a == Complex{}) continue;
    logs.push_back(2.0 * std::log(std::abs(a)) + log_norm_squared(e.cfg, idx));
  }
  return log_sum_exp(logs);
}

double norm_growth_slices(const Expansion& e) {
  const SpaceConfig& cfg = e.cfg;
  double total = 0.0;
  for (const FourierSlice& s : slices(e)) {
    double psi2 = 0.0;
    for (const auto& [k, a] : s.monomials)
      psi2 += std::norm(a) * std::exp(log_monomial_norm(cfg, k));
    double na = static_cast<double>(s.n) + cfg.alpha;
    total += std::exp((2.0 * kPi * kPi / cfg.nu) * na * na) * psi2;
  }
  return std::sqrt(kPi / (2.0 * cfg.nu)) * total;
}

double automorphy_residual(const SpaceConfig& cfg, const PointFn& f, long m,
                           const Point& u) {
  Point shifted = u;
  shifted.z += static_cast<double>(m);
  Complex lhs = f(shifted);
  Complex factor = chi_of(Character{cfg.alpha}, m) *
                   std::exp(cfg.nu * (u.z + 0.5 * m) * static_cast<double>(m));
  Complex rhs = factor * f(u);
  return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
}

double pointwise_bound(const Expansion& e, const Point& u) {
  const SpaceConfig& cfg = e.cfg;
  bool any_nonzero = false;
  for (const auto& [idx, a] : e.coeffs)
    if (a != Complex{}) any_nonzero = true;
  if (!any_nonzero)
    throw DegenerateInputError("pointwise_bound: expansion has no nonzero coefficient");

  double y = u.z.imag();
  std::vector<double> logs;
  for (const FourierSlice& s : slices(e)) {
    double log_psi2 = -std::numeric_limits<double>::infinity();
    Complex psi = s.eval(u.zprime);
    if (psi != Complex{}) log_psi2 = 2.0 * std::log(std::abs(psi));
    double psi_norm2 = 0.0;
    for (const auto& [k, a] : s.monomials)
      psi_norm2 += std::norm(a) * std::exp(log_monomial_norm(cfg, k));
    if (psi_norm2 == 0.0) continue;
    double na = static_cast<double>(s.n) + cfg.alpha;
    logs.push_back(-(2.0 * kPi * kPi / cfg.nu) * na * na -
                   4.0 * kPi * na * y + log_psi2 - std::log(psi_norm2));
  }
  double log_sum = log_sum_exp(logs);

  double log_bound = 0.5 * log_norm_growth(e) +
                     0.25 * std::log(2.0 * cfg.nu / kPi) +
                     0.5 * cfg.nu * (u.z * u.z).real() + 0.5 * log_sum;
  // Allowance for the rounding of this computation itself: the bound is an
  // exact equality for single-slice expansions, so ulp-level noise must not
  // flip the comparison.
  return std::exp(log_bound) * (1.0 + 1e-12);
}

}  // namespace thetafock

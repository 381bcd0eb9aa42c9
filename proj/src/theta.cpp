#include "thetafock/theta.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "thetafock/errors.hpp"

namespace thetafock {

namespace {

void require_upper_half(const ThetaArgs& args) {
  if (!(args.tau.imag() > 0.0))
    throw std::domain_error("theta: Im(tau) must be positive, got " +
                            std::to_string(args.tau.imag()));
}

// Exponent of the n-th term, computed once per term.
Complex term_exponent(const ThetaArgs& args, long n) {
  double na = static_cast<double>(n) + args.alpha;
  Complex zb = args.z + args.beta;
  return Complex(0.0, kPi) * (na * na) * args.tau +
         Complex(0.0, kTwoPi) * na * zb;
}

long min_truncation(double alpha) {
  return static_cast<long>(std::ceil(std::abs(alpha))) + 1;
}

}  // namespace

double theta_tail_bound(const ThetaArgs& args, long n_trunc) {
  require_upper_half(args);
  double aa = std::abs(args.alpha);
  if (n_trunc < min_truncation(args.alpha))
    throw std::invalid_argument("theta_tail_bound: N must be >= ceil(|alpha|)+1");

  double t = args.tau.imag();
  double c = kTwoPi * std::abs(args.z.imag());
  double m1 = static_cast<double>(n_trunc) + 1.0;

  // |term_{+-m}| <= T_m = exp(-pi t (m-|alpha|)^2 + c (m+|alpha|)) for m > N;
  // the ratio T_{m+1}/T_m is maximal at m = N+1 and decreasing.
  double log_ratio = -kPi * t * (2.0 * (m1 - aa) + 1.0) + c;
  if (log_ratio >= 0.0)
    throw TailBoundError("theta_tail_bound: term ratio does not contract at N=" +
                         std::to_string(n_trunc) + "; increase N");
  double r = std::exp(log_ratio);

  double log_t1 = -kPi * t * (m1 - aa) * (m1 - aa) + c * (m1 + aa);
  double log_bound = std::log(2.0) + log_t1 - std::log1p(-r);
  // Upward allowance for the rounding of this very computation, and a clamp
  // to the smallest positive double: the true tail is positive, so a sound
  // upper bound must be too.
  double bound = std::exp(log_bound) * (1.0 + 1e-12);
  return std::max(bound, std::numeric_limits<double>::denorm_min());
}

Complex theta_eval_capped(const ThetaArgs& args, long n_trunc) {
  require_upper_half(args);
  KahanSum acc;
  for (long j = n_trunc; j >= 1; --j) {
    acc.add(std::exp(term_exponent(args, j)));
    acc.add(std::exp(term_exponent(args, -j)));
  }
  acc.add(std::exp(term_exponent(args, 0)));
  return acc.value();
}

long theta_truncation_for(const ThetaArgs& args, double tol) {
  require_upper_half(args);
  if (!(tol > 0.0)) throw std::domain_error("theta: tol must be positive");
  if (tol < kThetaTolFloor)
    throw UnreachableToleranceError(
        "theta: tolerance " + std::to_string(tol) +
        " is below the certifiable floor " + std::to_string(kThetaTolFloor));

  long n = min_truncation(args.alpha);
  while (true) {
    if (n > kThetaTermCap)
      throw UnreachableToleranceError(
          "theta: truncation index exceeds the cap of 1e7 before reaching tol");
    bool contracts = true;
    double bound = std::numeric_limits<double>::infinity();
    try {
      bound = theta_tail_bound(args, n);
    } catch (const TailBoundError&) {
      contracts = false;
    }
    if (contracts && bound < tol) return n;
    // Linear scan while small keeps the reported N minimal; geometric growth
    // afterwards keeps pathological inputs from stalling.
    n = (n < 64) ? n + 1 : n + n / 4;
  }
}

ThetaResult theta_sum(const ThetaArgs& args, double tol) {
  long n = theta_truncation_for(args, tol);
  ThetaResult out;
  out.n_used = n;
  out.tail_bound = theta_tail_bound(args, n);
  out.value = theta_eval_capped(args, n);
  return out;
}

}  // namespace thetafock

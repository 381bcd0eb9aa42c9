#pragma once

#include "thetafock/numeric.hpp"

namespace thetafock {

// Arguments of the shifted theta series
//   theta_{alpha,beta}(z | tau) = sum_n exp(i pi (n+alpha)^2 tau
//                                           + 2 pi i (n+alpha)(z+beta)),
// convergent for Im tau > 0.
struct ThetaArgs {
  double alpha = 0.0;
  double beta = 0.0;
  Complex z{};
  Complex tau{0.0, 1.0};
};

struct ThetaResult {
  Complex value{};
  long n_used = 0;       // summed over |n| <= n_used
  double tail_bound = 0; // certified bound on the omitted tail
};

// Hard cap on the truncation index.
inline constexpr long kThetaTermCap = 10'000'000;

// Tolerances below this cannot be certified by a double-precision summation
// and are rejected as unreachable.
inline constexpr double kThetaTolFloor = 1e-250;

// Upper bound on sum_{|n|>N} |term_n|, as twice a dominating geometric
// series. Throws std::domain_error for Im tau <= 0, std::invalid_argument
// for N < ceil(|alpha|) + 1, and TailBoundError when the term-ratio bound
// fails to contract (N too small for this z).
double theta_tail_bound(const ThetaArgs& args, long n_trunc);

// Symmetric partial sum over |n| <= n_trunc, smallest terms first with
// compensated accumulation. No tail certification.
Complex theta_eval_capped(const ThetaArgs& args, long n_trunc);

// Truncated evaluation with the cutoff chosen so the certified tail bound is
// below tol. Throws std::domain_error (Im tau <= 0, tol <= 0) and
// UnreachableToleranceError (tol below the floor, or cutoff would pass the
// term cap).
ThetaResult theta_sum(const ThetaArgs& args, double tol);

inline Complex theta_eval(const ThetaArgs& args, double tol) {
  return theta_sum(args, tol).value;
}

// Smallest cutoff whose certified tail bound is below tol (same error
// conditions as theta_sum).
long theta_truncation_for(const ThetaArgs& args, double tol);

}  // namespace thetafock

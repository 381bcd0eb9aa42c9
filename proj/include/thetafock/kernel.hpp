#pragma once

#include "thetafock/geometry.hpp"
#include "thetafock/numeric.hpp"
#include "thetafock/theta.hpp"

namespace thetafock {

// Closed form of the reproducing kernel,
//   K(u, v) = C * exp((nu/2)(z^2 + conj(w)^2))
//               * theta_{alpha,0}(z - conj(w) | tau) * exp(H~(u', v')),
// with C and tau measured against the basis series by calibrate_kernel.
// The printed values from the source derivation are kept alongside for the
// discrepancy report.
struct KernelSpec {
  SpaceConfig cfg;
  double closed_form_constant = 0.0;  // fitted C(g, nu) > 0
  Complex tau_kernel{0.0, 1.0};       // fitted tau, Im > 0
  double printed_constant = 0.0;      // (1/(2 pi nu))^{1/2} (2 nu)^{-g}
  Complex printed_tau{0.0, kTwoPi};   // "2 i pi", no nu dependence
  double probe_max_rel_dev = 0.0;     // achieved on the calibration probes
};

// Partial sum over |n| <= n_cap, |k| <= k_cap of
// e_{n,k}(u) conj(e_{n,k}(v)) / |e_{n,k}|^2 with the canonical norms.
// Throws OverflowError for points whose Gaussian prefactor leaves double
// range (reduce |Im z| or the point magnitude).
Complex kernel_series(const SpaceConfig& cfg, const Point& u, const Point& v,
                      long n_cap, int k_cap);

// Closed-form evaluation; theta errors propagate.
Complex kernel_closed(const KernelSpec& spec, const Point& u, const Point& v);

struct SeriesTruncation {
  long n_cap = 0;
  int k_cap = 0;
};

// Truncation that certifies |series - closed| below cfg.theta_tol at (u, v):
// n_cap from the theta tail bound, k_cap from the remainder of the
// exponential series of exp(H~) with rho = nu * sum_j |u'_j| |v'_j|.
SeriesTruncation default_series_truncation(const SpaceConfig& cfg,
                                           const Point& u, const Point& v);

// Sound bound on |kernel_series(u,v; n_cap,k_cap) - kernel_closed(u,v)|
// combining the theta tail with the exponential-series remainder.
double kernel_truncation_bound(const SpaceConfig& cfg, const Point& u,
                               const Point& v, long n_cap, int k_cap);

// Measures tau from the quadrature-oracle norm slope in (n+alpha)^2 and the
// constant from the oracle norm at n = 0, then validates the closed form
// against the series on a fixed seeded probe set (50 pairs). Throws
// CalibrationError if the maximal relative deviation exceeds 1e-9.
KernelSpec calibrate_kernel(const SpaceConfig& cfg);

// Same measurement without the deviation gate; probe_max_rel_dev records the
// achieved deviation for reporting.
KernelSpec calibrate_kernel_unchecked(const SpaceConfig& cfg);

inline constexpr double kCalibrationProbeLimit = 1e-9;

}  // namespace thetafock

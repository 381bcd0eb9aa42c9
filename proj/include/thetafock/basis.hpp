#pragma once

#include "thetafock/geometry.hpp"
#include "thetafock/numeric.hpp"

namespace thetafock {

// log-modulus / phase representation of a nonzero complex value;
// log_modulus = -inf encodes zero.
struct LogValue {
  double log_modulus = 0.0;
  double phase = 0.0;  // in (-pi, pi]

  Complex to_complex() const {
    if (log_modulus == -std::numeric_limits<double>::infinity()) return {};
    return std::polar(std::exp(log_modulus), phase);
  }
};

// e_{n,k}(z, z') = exp((nu/2) z^2 + 2 pi i (alpha + n) z) * z'^k.
// Direct evaluation; throws OverflowError (pointing at basis_eval_log) when
// the modulus leaves the representable range.
Complex basis_eval(const SpaceConfig& cfg, const BasisIndex& idx, const Point& u);

// Stable evaluation of the same value as (log-modulus, phase). A zero factor
// z_j = 0 with k_j > 0 yields log_modulus = -inf.
LogValue basis_eval_log(const SpaceConfig& cfg, const BasisIndex& idx, const Point& u);

struct BasisFunction {
  SpaceConfig cfg;
  BasisIndex index;
  Complex operator()(const Point& u) const { return basis_eval(cfg, index, u); }
};

// Squared norm consistent with the Gaussian integrals over the fundamental
// cell:
//   |e_{n,k}|^2 = sqrt(pi/(2 nu)) (pi/nu)^{g-1} (k!/nu^{|k|})
//                 * exp((2 pi^2/nu)(n+alpha)^2).
// Throws OverflowError (use log_norm_squared) for huge |n + alpha|.
double norm_squared(const SpaceConfig& cfg, const BasisIndex& idx);
double log_norm_squared(const SpaceConfig& cfg, const BasisIndex& idx);

// The norm constants as printed at the three places they appear; exposed for
// the discrepancy report. thm32 and intro agree with each other and differ
// from the canonical value by (2 pi)^{g-1}; lemma22 (printed for k = 0,
// extended here by the true monomial factor) coincides with canonical.
enum class NormVariant { lemma22, thm32, intro };

double norm_squared_printed(const SpaceConfig& cfg, const BasisIndex& idx,
                            NormVariant variant);
double log_norm_squared_printed(const SpaceConfig& cfg, const BasisIndex& idx,
                                NormVariant variant);

}  // namespace thetafock

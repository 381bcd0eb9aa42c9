#include "thetafock/basis.hpp"

#include <cmath>
#include <stdexcept>

#include "thetafock/errors.hpp"

namespace thetafock {

namespace {

constexpr double kLogDoubleMax = 709.0;

void check_index_dim(const SpaceConfig& cfg, const BasisIndex& idx) {
  if (idx.k.size() != cfg.transverse_dim())
    throw std::invalid_argument("basis: multi-index length must be g-1");
}

void check_point_dim(const SpaceConfig& cfg, const Point& u) {
  if (static_cast<int>(u.zprime.size()) != cfg.transverse_dim())
    throw std::invalid_argument("basis: point dimension does not match config");
}

}  // namespace

LogValue basis_eval_log(const SpaceConfig& cfg, const BasisIndex& idx, const Point& u) {
  check_index_dim(cfg, idx);
  check_point_dim(cfg, u);

  Complex w = 0.5 * cfg.nu * u.z * u.z +
              Complex(0.0, kTwoPi) * (cfg.alpha + static_cast<double>(idx.n)) * u.z;
  double log_mod = w.real();
  double phase = w.imag();
  for (std::size_t j = 0; j < u.zprime.size(); ++j) {
    int kj = idx.k.k[j];
    if (kj == 0) continue;
    double a = std::abs(u.zprime[j]);
    if (a == 0.0)
      return {-std::numeric_limits<double>::infinity(), 0.0};
    log_mod += kj * std::log(a);
    phase += kj * std::arg(u.zprime[j]);
  }
  return {log_mod, wrap_phase(phase)};
}

Complex basis_eval(const SpaceConfig& cfg, const BasisIndex& idx, const Point& u) {
  LogValue lv = basis_eval_log(cfg, idx, u);
  if (lv.log_modulus > kLogDoubleMax)
    throw OverflowError(
        "basis_eval: modulus exceeds double range; use basis_eval_log");
  return lv.to_complex();
}

double log_norm_squared(const SpaceConfig& cfg, const BasisIndex& idx) {
  check_index_dim(cfg, idx);
  double na = static_cast<double>(idx.n) + cfg.alpha;
  return 0.5 * std::log(kPi / (2.0 * cfg.nu)) +
         (cfg.g - 1) * std::log(kPi / cfg.nu) + idx.k.log_factorial() -
         idx.k.total() * std::log(cfg.nu) +
         (2.0 * kPi * kPi / cfg.nu) * na * na;
}

double norm_squared(const SpaceConfig& cfg, const BasisIndex& idx) {
  double l = log_norm_squared(cfg, idx);
  if (l > kLogDoubleMax)
    throw OverflowError(
        "norm_squared: value exceeds double range; use log_norm_squared");
  return std::exp(l);
}

double log_norm_squared_printed(const SpaceConfig& cfg, const BasisIndex& idx,
                                NormVariant variant) {
  check_index_dim(cfg, idx);
  double na = static_cast<double>(idx.n) + cfg.alpha;
  double expo = (2.0 * kPi * kPi / cfg.nu) * na * na;
  double log_kfac = idx.k.log_factorial();
  int ktot = idx.k.total();
  switch (variant) {
    case NormVariant::lemma22:
      // Printed for k = 0; the monomial factor appended here is the true
      // Gaussian integral, so this variant tracks the canonical value.
      return 0.5 * std::log(0.5) +
             0.5 * (2.0 * cfg.g - 1.0) * std::log(kPi / cfg.nu) + log_kfac -
             ktot * std::log(cfg.nu) + expo;
    case NormVariant::thm32:
      return 0.5 * std::log(kTwoPi * cfg.nu) -
             cfg.g * std::log(2.0 * cfg.nu) + log_kfac -
             ktot * std::log(cfg.nu) + expo;
    case NormVariant::intro:
      return 0.5 * std::log(kPi) + ktot * std::log(2.0) + log_kfac -
             (0.5 * (2.0 * cfg.g - 1.0) + ktot) * std::log(2.0 * cfg.nu) + expo;
  }
  throw std::invalid_argument("norm_squared_printed: unknown variant");
}

double norm_squared_printed(const SpaceConfig& cfg, const BasisIndex& idx,
                            NormVariant variant) {
  double l = log_norm_squared_printed(cfg, idx, variant);
  if (l > kLogDoubleMax)
    throw OverflowError(
        "norm_squared_printed: value exceeds double range; use "
        "log_norm_squared_printed");
  return std::exp(l);
}

}  // namespace thetafock

#include "thetafock/kernel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "thetafock/basis.hpp"
#include "thetafock/errors.hpp"
#include "thetafock/quadrature.hpp"

namespace thetafock {

namespace {

constexpr double kLogDoubleMax = 705.0;

void check_point(const SpaceConfig& cfg, const Point& u, const char* what) {
  if (static_cast<int>(u.zprime.size()) != cfg.transverse_dim())
    throw std::invalid_argument(std::string(what) + ": point dimension mismatch");
}

// H~(u', v') = nu * sum_j u'_j conj(v'_j).
Complex transverse_form(const SpaceConfig& cfg, const Point& u, const Point& v) {
  Complex s{};
  for (std::size_t j = 0; j < u.zprime.size(); ++j)
    s += u.zprime[j] * std::conj(v.zprime[j]);
  return cfg.nu * s;
}

double exp_series_log_remainder(double rho, int k_cap) {
  // |sum_{d > K} rho^d / d!| <= rho^{K+1} e^rho / (K+1)!
  if (rho == 0.0) return -std::numeric_limits<double>::infinity();
  return (k_cap + 1) * std::log(rho) + rho - std::lgamma(k_cap + 2.0);
}

}  // namespace

Complex kernel_series(const SpaceConfig& cfg, const Point& u, const Point& v,
                      long n_cap, int k_cap) {
  check_point(cfg, u, "kernel_series");
  check_point(cfg, v, "kernel_series");
  if (n_cap < 0 || k_cap < 0)
    throw std::invalid_argument("kernel_series: truncation must be nonnegative");

  auto ks = multi_indices_up_to(cfg.transverse_dim(), k_cap);
  KahanSum acc;
  for (long n = -n_cap; n <= n_cap; ++n) {
    for (const auto& k : ks) {
      BasisIndex idx{n, k};
      LogValue lu = basis_eval_log(cfg, idx, u);
      LogValue lv = basis_eval_log(cfg, idx, v);
      double lm = lu.log_modulus + lv.log_modulus - log_norm_squared(cfg, idx);
      if (lm == -std::numeric_limits<double>::infinity()) continue;
      if (lm > kLogDoubleMax)
        throw OverflowError(
            "kernel_series: term overflows double range; reduce |Im z| or the "
            "point magnitude");
      acc.add(std::polar(std::exp(lm), lu.phase - lv.phase));
    }
  }
  return acc.value();
}

Complex kernel_closed(const KernelSpec& spec, const Point& u, const Point& v) {
  const SpaceConfig& cfg = spec.cfg;
  check_point(cfg, u, "kernel_closed");
  check_point(cfg, v, "kernel_closed");

  Complex wbar = std::conj(v.z);
  ThetaArgs args{cfg.alpha, 0.0, u.z - wbar, spec.tau_kernel};
  Complex theta = theta_eval(args, cfg.theta_tol);

  Complex a = 0.5 * cfg.nu * (u.z * u.z + wbar * wbar) + transverse_form(cfg, u, v);
  ScaledComplex val(theta * spec.closed_form_constant);
  val *= ScaledComplex(std::polar(1.0, a.imag()), a.real());
  Complex out = val.value();
  if (!is_finite(out))
    throw OverflowError(
        "kernel_closed: value overflows double range; reduce |Im z| or the "
        "point magnitude");
  return out;
}

SeriesTruncation default_series_truncation(const SpaceConfig& cfg,
                                           const Point& u, const Point& v) {
  check_point(cfg, u, "default_series_truncation");
  check_point(cfg, v, "default_series_truncation");

  ThetaArgs args{cfg.alpha, 0.0, u.z - std::conj(v.z),
                 Complex(0.0, kTwoPi / cfg.nu)};
  SeriesTruncation tr;
  tr.n_cap = theta_truncation_for(args, cfg.theta_tol);

  double rho = 0.0;
  for (std::size_t j = 0; j < u.zprime.size(); ++j)
    rho += std::abs(u.zprime[j]) * std::abs(v.zprime[j]);
  rho *= cfg.nu;
  double log_tol = std::log(cfg.theta_tol);
  int k = 0;
  while (exp_series_log_remainder(rho, k) >= log_tol) {
    ++k;
    if (k > 500)
      throw UnreachableToleranceError(
          "default_series_truncation: transverse remainder does not reach "
          "tolerance");
  }
  tr.k_cap = k;
  return tr;
}

double kernel_truncation_bound(const SpaceConfig& cfg, const Point& u,
                               const Point& v, long n_cap, int k_cap) {
  Complex wbar = std::conj(v.z);
  Complex tau(0.0, kTwoPi / cfg.nu);
  ThetaArgs args{cfg.alpha, 0.0, u.z - wbar, tau};

  double theta_tail = theta_tail_bound(args, n_cap);
  // Sum of term moduli of the truncated theta factor.
  double theta_partial_abs = 0.0;
  for (long n = -n_cap; n <= n_cap; ++n) {
    double na = static_cast<double>(n) + cfg.alpha;
    theta_partial_abs += std::exp(-kPi * tau.imag() * na * na -
                                  kTwoPi * na * args.z.imag());
  }

  double rho = 0.0;
  for (std::size_t j = 0; j < u.zprime.size(); ++j)
    rho += std::abs(u.zprime[j]) * std::abs(v.zprime[j]);
  rho *= cfg.nu;
  double rem_k = std::exp(exp_series_log_remainder(rho, k_cap));

  double c = std::sqrt(2.0 * cfg.nu / kPi) *
             std::pow(cfg.nu / kPi, cfg.g - 1);
  double prefactor_log =
      0.5 * cfg.nu * (u.z * u.z + wbar * wbar).real() + std::log(c);
  return std::exp(prefactor_log) *
         (theta_tail * std::exp(rho) + theta_partial_abs * rem_k);
}

KernelSpec calibrate_kernel_unchecked(const SpaceConfig& cfg) {
  cfg.validate();
  KernelSpec spec;
  spec.cfg = cfg;
  spec.printed_constant =
      std::sqrt(1.0 / (kTwoPi * cfg.nu)) * std::pow(2.0 * cfg.nu, -cfg.g);
  spec.printed_tau = Complex(0.0, kTwoPi);

  // tau from the oracle: the quadrature norms satisfy
  // log N_n = const + factor * (n + alpha)^2, so the second difference over
  // n = 0, 1, 2 is exactly 2 * factor, independent of alpha.
  Grid grid = build_grid(cfg, GridBudget{4.0 * kPi * (2.0 + std::abs(cfg.alpha)),
                                         0.0, 0, 0, 0});
  MultiIndex k0(std::vector<int>(cfg.transverse_dim(), 0));
  auto log_norm_quad = [&](long n) {
    return basis_inner_product(grid, cfg, BasisIndex{n, k0}, BasisIndex{n, k0})
        .log_abs();
  };
  double l0 = log_norm_quad(0), l1 = log_norm_quad(1), l2 = log_norm_quad(2);
  double factor = 0.5 * (l2 - 2.0 * l1 + l0);  // measured 2 pi^2 / nu
  spec.tau_kernel = Complex(0.0, factor / kPi);

  // Constant from the oracle norm at n = 0:
  // C = exp(factor * alpha^2) / N_0.
  spec.closed_form_constant = std::exp(factor * cfg.alpha * cfg.alpha - l0);

  // Probe validation against the series.
  Rng rng(cfg.seed ^ 0x6b65726e656cULL);
  double max_dev = 0.0;
  for (int p = 0; p < 50; ++p) {
    Point u, v;
    u.z = rng.complex_in_box(1.0, 0.6);
    v.z = rng.complex_in_box(1.0, 0.6);
    for (int j = 0; j < cfg.transverse_dim(); ++j) {
      u.zprime.push_back(rng.complex_in_box(1.0, 1.0));
      v.zprime.push_back(rng.complex_in_box(1.0, 1.0));
    }
    SeriesTruncation tr = default_series_truncation(cfg, u, v);
    Complex s = kernel_series(cfg, u, v, tr.n_cap + 4, tr.k_cap + 4);
    Complex c = kernel_closed(spec, u, v);
    double denom = std::max({std::abs(s), std::abs(c), 1e-300});
    max_dev = std::max(max_dev, std::abs(s - c) / denom);
  }
  spec.probe_max_rel_dev = max_dev;
  return spec;
}

KernelSpec calibrate_kernel(const SpaceConfig& cfg) {
  KernelSpec spec = calibrate_kernel_unchecked(cfg);
  if (!(spec.probe_max_rel_dev < kCalibrationProbeLimit)) {
    std::ostringstream os;
    os << "calibrate_kernel: closed form deviates from the series by "
       << spec.probe_max_rel_dev << " (limit " << kCalibrationProbeLimit << ")";
    throw CalibrationError(os.str());
  }
  return spec;
}

}  // namespace thetafock

#include "thetafock/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "thetafock/basis.hpp"
#include "thetafock/character.hpp"
#include "thetafock/errors.hpp"
#include "thetafock/expansion.hpp"
#include "thetafock/linalg.hpp"
#include "thetafock/quadrature.hpp"
#include "thetafock/theta.hpp"

namespace thetafock {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point start = Clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  }
};

CheckResult make_check(const std::string& name, double residual, double tolerance,
                       Json details, double wall_ms) {
  CheckResult c;
  c.name = name;
  c.residual = residual;
  c.tolerance = tolerance;
  c.passed = residual < tolerance;
  c.details = std::move(details);
  c.wall_ms = wall_ms;
  return c;
}

// Of several (residual, tolerance) parts, keeps the one with the least
// margin as the headline numbers.
struct Parts {
  double worst_margin = 0.0;
  double residual = 0.0;
  double tolerance = std::numeric_limits<double>::infinity();

  void add(double r, double tol) {
    double m = r / tol;
    if (m >= worst_margin) {
      worst_margin = m;
      residual = r;
      tolerance = tol;
    }
  }
};

Expansion random_expansion(const SpaceConfig& cfg, Rng& rng, int n_terms,
                           double coeff_scale = 1.0) {
  auto window = index_window(cfg);
  Expansion e;
  e.cfg = cfg;
  for (int t = 0; t < n_terms; ++t) {
    const BasisIndex& idx =
        window[static_cast<std::size_t>(rng.integer(0, static_cast<long>(window.size()) - 1))];
    e.coeffs[idx] = rng.complex_in_box(coeff_scale, coeff_scale);
  }
  return e;
}

Point random_point(const SpaceConfig& cfg, Rng& rng, double z_re, double z_im,
                   double zp) {
  Point u;
  u.z = rng.complex_in_box(z_re, z_im);
  for (int j = 0; j < cfg.transverse_dim(); ++j)
    u.zprime.push_back(rng.complex_in_box(zp, zp));
  return u;
}

// ---- check 1: orthogonality --------------------------------------------

CheckResult check_orthogonality(const SpaceConfig& cfg, const Grid& grid) {
  Timer timer;
  auto window = index_window(cfg);
  GramMatrix gm = gram_matrix(grid, cfg, window);
  double off = gm.max_offdiag();
  double diag = gm.max_diag_error();
  Json details{{"max_offdiag", off}, {"max_diag_err", diag},
               {"indices", window.size()}};
  return make_check("orthogonality_gram", std::max(off, diag), 1e-8,
                    std::move(details), timer.ms());
}

// ---- check 2: norm arbitration -----------------------------------------

CheckResult check_norms(const SpaceConfig& cfg, const Grid& grid,
                        CalibrationBlock& calib) {
  Timer timer;
  auto window = index_window(cfg);

  double worst_dev = 0.0;
  std::map<std::string, std::pair<double, double>> ratio_minmax;  // variant -> (min,max)
  auto variants = std::vector<std::pair<std::string, NormVariant>>{
      {"lemma22", NormVariant::lemma22},
      {"thm32", NormVariant::thm32},
      {"intro", NormVariant::intro}};

  for (const auto& idx : window) {
    double l_quad = basis_inner_product(grid, cfg, idx, idx).log_abs();
    double l_formula = log_norm_squared(cfg, idx);
    worst_dev = std::max(worst_dev, std::abs(std::expm1(l_quad - l_formula)));
    for (const auto& [vname, variant] : variants) {
      double ratio =
          std::exp(l_formula - log_norm_squared_printed(cfg, idx, variant));
      auto [it, fresh] = ratio_minmax.try_emplace(vname, ratio, ratio);
      if (!fresh) {
        it->second.first = std::min(it->second.first, ratio);
        it->second.second = std::max(it->second.second, ratio);
      }
    }
  }

  double spread = 0.0;
  Json ratios;
  for (const auto& [vname, mm] : ratio_minmax) {
    double mid = 0.5 * (mm.first + mm.second);
    spread = std::max(spread, (mm.second - mm.first) / mid);
    ratios[vname] = mid;
    calib.norm_variant_ratios[vname] = mid;
  }
  calib.norm_ratio_spread = spread;

  Parts parts;
  parts.add(worst_dev, 1e-8);
  parts.add(spread, 1e-12);
  Json details{{"max_oracle_rel_dev", worst_dev},
               {"ratio_spread", spread},
               {"ratios", std::move(ratios)}};
  return make_check("norm_oracle_agreement", parts.residual, parts.tolerance,
                    std::move(details), timer.ms());
}

// ---- check 3: kernel closed form vs series ------------------------------

CheckResult check_kernel(const SpaceConfig& cfg, KernelSpec& spec,
                         CalibrationBlock& calib) {
  Timer timer;
  spec = calibrate_kernel_unchecked(cfg);
  calib.fitted_constant = spec.closed_form_constant;
  calib.printed_constant = spec.printed_constant;
  calib.fitted_tau = spec.tau_kernel;
  calib.printed_tau = spec.printed_tau;
  calib.probe_max_rel_dev = spec.probe_max_rel_dev;

  Complex tau_expected(0.0, kTwoPi / cfg.nu);
  double tau_dev = std::abs(spec.tau_kernel - tau_expected) / std::abs(tau_expected);

  Parts parts;
  parts.add(spec.probe_max_rel_dev, 1e-8);
  parts.add(tau_dev, 1e-12);
  Json details{{"probe_max_rel_dev", spec.probe_max_rel_dev},
               {"tau_rel_dev_from_2pi_over_nu", tau_dev},
               {"fitted_constant", spec.closed_form_constant},
               {"printed_constant", spec.printed_constant}};
  return make_check("kernel_closed_vs_series", parts.residual, parts.tolerance,
                    std::move(details), timer.ms());
}

// ---- check 4: reproducing property --------------------------------------

CheckResult check_reproducing(const SpaceConfig& cfg, const KernelSpec& spec) {
  Timer timer;
  int n_win = std::min(cfg.n_max, 2);
  int k_win = std::min(cfg.k_max, 2);

  // Budgeted rules: the y-direction sees exp(-2 pi (2 alpha + n + m) y) with
  // m reaching into the theta series; the transverse directions see
  // exp(nu * u'_j * conj(v'_j)).
  int theta_reach = 6;
  GridBudget budget;
  budget.y_exponent = kTwoPi * (2.0 * std::abs(cfg.alpha) + n_win + theta_reach);
  budget.z_exponent = 1.3 * cfg.nu;
  budget.x_min = 2 * (n_win + theta_reach) + 2;
  Grid grid = build_grid(cfg, budget);

  Rng rng(cfg.seed ^ 0x7265700ULL);
  std::vector<Point> probes;
  for (int p = 0; p < 5; ++p) {
    Point u;
    u.z = rng.complex_in_box(1.0, 0.5);
    for (int j = 0; j < cfg.transverse_dim(); ++j)
      u.zprime.push_back(std::polar(0.4 + 0.8 * rng.unit(), kTwoPi * rng.unit()));
    probes.push_back(std::move(u));
  }

  double worst = 0.0;
  for (const auto& idx : index_window(cfg, n_win, k_win)) {
    for (const Point& u : probes) {
      // z-part of int K(u,v) e_{n,k}(v) exp(-H(v,v)): the rule absorbs
      // exp(-2 nu y^2), the sampled factor is
      // C exp((nu/2) z_u^2) theta(z_u - conj(w)) exp(2 pi i (alpha+n) w).
      KahanSum zpart;
      for (double x : grid.x_nodes) {
        for (std::size_t iy = 0; iy < grid.y.nodes.size(); ++iy) {
          double wy = grid.y.weights[iy];
          if (wy == 0.0) continue;
          Complex w(x, grid.y.nodes[iy]);
          ThetaArgs args{cfg.alpha, 0.0, u.z - std::conj(w), spec.tau_kernel};
          Complex sample =
              theta_eval(args, cfg.theta_tol) *
              std::exp(Complex(0.0, kTwoPi) * (cfg.alpha + static_cast<double>(idx.n)) * w);
          zpart.add(grid.x_weight * wy * sample);
        }
      }
      ScaledComplex value(zpart.value());
      value *= ScaledComplex(std::polar(spec.closed_form_constant, 0.0));
      Complex zu2 = 0.5 * cfg.nu * u.z * u.z;
      value *= ScaledComplex(std::polar(1.0, zu2.imag()), zu2.real());

      // Transverse factors: int exp(nu u_j conj(v)) v^{k_j} exp(-nu |v|^2).
      for (int j = 0; j < cfg.transverse_dim(); ++j) {
        KahanSum tpart;
        for (std::size_t p = 0; p < grid.t.nodes.size(); ++p) {
          if (grid.t.weights[p] == 0.0) continue;
          for (std::size_t q = 0; q < grid.t.nodes.size(); ++q) {
            if (grid.t.weights[q] == 0.0) continue;
            Complex v(grid.t.nodes[p], grid.t.nodes[q]);
            tpart.add(grid.t.weights[p] * grid.t.weights[q] *
                      std::exp(cfg.nu * u.zprime[j] * std::conj(v)) *
                      pow_int(v, idx.k.k[j]));
          }
        }
        value *= tpart.value();
      }

      Complex expected = basis_eval(cfg, idx, u);
      double rel = std::abs(value.value() - expected) / std::abs(expected);
      worst = std::max(worst, rel);
    }
  }
  Json details{{"max_rel_dev", worst}, {"n_win", n_win}, {"k_win", k_win}};
  return make_check("kernel_reproducing", worst, 1e-6, std::move(details),
                    timer.ms());
}

// ---- check 5: expansion round-trip and Parseval --------------------------

CheckResult check_expansion(const SpaceConfig& cfg, const Grid& grid,
                            std::vector<Expansion>& members_out) {
  Timer timer;
  Rng rng(cfg.seed ^ 0x657870ULL);

  double worst_roundtrip = 0.0;
  double worst_parseval = 0.0;
  double worst_forms = 0.0;
  double worst_blackbox = 0.0;

  for (int trial = 0; trial < 20; ++trial) {
    Expansion e = random_expansion(cfg, rng, 10 + static_cast<int>(rng.integer(0, 5)));
    if (e.coeffs.empty()) continue;
    Expansion back = expand(cfg, as_function(e));

    double dev = 0.0;
    for (const auto& [idx, a] : e.coeffs) {
      auto it = back.coeffs.find(idx);
      Complex b = (it == back.coeffs.end()) ? Complex{} : it->second;
      dev = std::max(dev, std::abs(a - b));
    }
    for (const auto& [idx, b] : back.coeffs)
      if (!e.coeffs.count(idx)) dev = std::max(dev, std::abs(b));
    worst_roundtrip = std::max(worst_roundtrip, dev);

    // Parseval against the quadrature oracle, expanded bilinearly over
    // quadrature-computed basis pair inner products.
    double ng = norm_growth(e);
    std::vector<std::pair<BasisIndex, Complex>> terms(e.coeffs.begin(),
                                                      e.coeffs.end());
    KahanSum quad;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = 0; j < terms.size(); ++j) {
        ScaledComplex ip = basis_inner_product(grid, cfg, terms[i].first,
                                               terms[j].first);
        ip *= terms[i].second * std::conj(terms[j].second);
        quad.add(ip.value());
      }
    }
    worst_parseval =
        std::max(worst_parseval, std::abs(quad.value().real() / ng - 1.0));
    worst_forms =
        std::max(worst_forms, std::abs(norm_growth_slices(e) / ng - 1.0));

    if (cfg.g <= 2 && trial == 0) {
      Complex bb = inner_product(grid, as_function(e), as_function(e));
      worst_blackbox = std::max(worst_blackbox, std::abs(bb.real() / ng - 1.0));
    }
    if (static_cast<int>(members_out.size()) < 5) members_out.push_back(e);
  }

  Parts parts;
  parts.add(worst_roundtrip, 1e-9);
  parts.add(worst_parseval, 1e-8);
  parts.add(worst_forms, 1e-10);
  if (cfg.g <= 2) parts.add(worst_blackbox, 1e-8);
  Json details{{"roundtrip_max_coeff_err", worst_roundtrip},
               {"parseval_rel_dev", worst_parseval},
               {"norm_form_rel_dev", worst_forms},
               {"blackbox_rel_dev", worst_blackbox}};
  return make_check("expansion_roundtrip_parseval", parts.residual,
                    parts.tolerance, std::move(details), timer.ms());
}

// ---- check 6: automorphy ------------------------------------------------

CheckResult check_automorphy(const SpaceConfig& cfg,
                             const std::vector<Expansion>& members) {
  Timer timer;
  Rng rng(cfg.seed ^ 0x6175746fULL);

  double member_worst = 0.0;
  for (const Expansion& e : members) {
    PointFn f = as_function(e);
    for (long m = -3; m <= 3; ++m) {
      for (int p = 0; p < 4; ++p) {
        Point u = random_point(cfg, rng, 0.8, 0.5, 1.0);
        member_worst = std::max(member_worst, automorphy_residual(cfg, f, m, u));
      }
    }
  }

  // Planted non-members; each must be flagged by at least one probe.
  double nu = cfg.nu, alpha = cfg.alpha;
  std::vector<PointFn> planted;
  planted.push_back([nu, alpha](const Point& u) {
    return std::exp(Complex(0.0, kTwoPi) * (alpha + 0.5) * u.z +
                    0.5 * nu * u.z * u.z);
  });
  planted.push_back(
      [nu](const Point& u) { return std::exp(0.25 * nu * u.z * u.z); });
  if (std::abs(alpha - std::round(alpha)) > 0.05)
    planted.push_back(
        [nu](const Point& u) { return std::exp(0.5 * nu * u.z * u.z); });

  double nonmember_min_flag = std::numeric_limits<double>::infinity();
  for (const PointFn& f : planted) {
    double flag = 0.0;
    for (long m = 1; m <= 3; ++m)
      for (int p = 0; p < 4; ++p) {
        Point u = random_point(cfg, rng, 0.8, 0.5, 1.0);
        flag = std::max(flag, automorphy_residual(cfg, f, m, u));
      }
    nonmember_min_flag = std::min(nonmember_min_flag, flag);
  }

  bool members_ok = member_worst < 1e-11;
  bool planted_ok = nonmember_min_flag > 1e-3;
  Json details{{"member_max_residual", member_worst},
               {"planted_min_flag", nonmember_min_flag},
               {"planted_count", planted.size()}};
  CheckResult c = make_check("automorphy", member_worst, 1e-11,
                             std::move(details), 0.0);
  c.passed = members_ok && planted_ok;
  if (members_ok && !planted_ok) {
    // Surface the failing part as the headline numbers.
    c.residual = nonmember_min_flag;
    c.tolerance = 1e-3;  // must exceed this; flagged via passed
  }
  c.wall_ms = timer.ms();
  return c;
}

// ---- check 7: character / RDQ -------------------------------------------

CheckResult check_rdq_cocycle(const SpaceConfig& cfg) {
  Timer timer;
  Character ch{cfg.alpha};
  double worst = 0.0;
  double worst_contract = 0.0;
  for (long m1 = -100; m1 <= 100; ++m1) {
    for (long m2 = -100; m2 <= 100; ++m2) {
      double r = check_rdq(ch, m1, m2);
      worst = std::max(worst, r);
      double cap = 4.0 * std::numeric_limits<double>::epsilon() *
                   (std::abs(m1) + std::abs(m2) + 1.0);
      worst_contract = std::max(worst_contract, r / cap);
    }
  }
  double unit_dev = 0.0;
  for (long m = -1000; m <= 1000; ++m)
    unit_dev = std::max(unit_dev, std::abs(std::abs(chi_of(ch, m)) - 1.0));

  Parts parts;
  parts.add(worst, 1e-12);
  parts.add(worst_contract, 1.0);
  parts.add(unit_dev, 1e-15);
  Json details{{"max_cocycle_residual", worst},
               {"per_pair_contract_margin", worst_contract},
               {"unit_modulus_dev", unit_dev}};
  return make_check("rdq_character", parts.residual, parts.tolerance,
                    std::move(details), timer.ms());
}

// ---- check 8: theta soundness + quasi-periodicity ------------------------

CheckResult check_theta(const SpaceConfig& cfg) {
  Timer timer;
  Rng rng(cfg.seed ^ 0x7468ULL);
  double worst_sound = 0.0;  // |S_N - S_{N+20}| / bound(N)
  double worst_qp = 0.0;
  double tol = 1e-10;

  for (int trial = 0; trial < 1000; ++trial) {
    ThetaArgs args;
    args.alpha = rng.uniform(-1.0, 1.0);
    args.beta = rng.uniform(-1.0, 1.0);
    args.z = rng.complex_in_box(1.0, 1.0);
    args.tau = Complex(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 3.0));

    long n_lo = static_cast<long>(std::ceil(std::abs(args.alpha))) + 1;
    long n = std::max(n_lo, rng.integer(2, 12));
    double bound;
    while (true) {
      try {
        bound = theta_tail_bound(args, n);
        break;
      } catch (const TailBoundError&) {
        ++n;
      }
    }
    Complex s_n = theta_eval_capped(args, n);
    Complex s_far = theta_eval_capped(args, n + 20);
    worst_sound = std::max(worst_sound, std::abs(s_n - s_far) / bound);

    Complex t0 = theta_eval(args, tol);
    ThetaArgs shifted = args;
    shifted.z = args.z + 1.0;
    Complex t1 = theta_eval(shifted, tol);
    Complex expected = std::polar(1.0, kTwoPi * args.alpha) * t0;
    worst_qp =
        std::max(worst_qp, std::abs(t1 - expected) / (1.0 + std::abs(expected)));
  }

  Parts parts;
  parts.add(worst_sound, 1.0);
  parts.add(worst_qp, 10.0 * tol);
  Json details{{"max_tail_margin", worst_sound},
               {"max_quasi_periodicity_residual", worst_qp},
               {"trials", 1000}};
  return make_check("theta_soundness", parts.residual, parts.tolerance,
                    std::move(details), timer.ms());
}

// ---- check 9: pointwise bound --------------------------------------------

CheckResult check_pointwise(const SpaceConfig& cfg) {
  Timer timer;
  Rng rng(cfg.seed ^ 0x7077ULL);
  double worst_margin = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    Expansion e = random_expansion(cfg, rng, 5 + static_cast<int>(rng.integer(0, 5)),
                                   rng.unit() < 0.5 ? 1.0 : 50.0);
    if (e.coeffs.empty()) continue;
    Point u = random_point(cfg, rng, 1.0, 0.8, 1.2);
    double fv = std::abs(reconstruct(e, u));
    double bound = pointwise_bound(e, u);
    if (fv == 0.0) continue;
    worst_margin = std::max(worst_margin, fv / bound);
  }
  Json details{{"max_ratio_f_over_bound", worst_margin}, {"trials", 10000}};
  return make_check("pointwise_bound", worst_margin, 1.0 + 1e-15,
                    std::move(details), timer.ms());
}

// ---- assembly -------------------------------------------------------------

RunReport run_suite_once(const SpaceConfig& cfg, unsigned threads) {
  RunReport report;
  report.cfg = cfg;

  Grid grid = build_grid(cfg);
  grid.threads = threads;

  report.checks.push_back(check_orthogonality(cfg, grid));
  report.checks.push_back(check_norms(cfg, grid, report.calibration));
  KernelSpec spec;
  report.checks.push_back(check_kernel(cfg, spec, report.calibration));
  report.checks.push_back(check_reproducing(cfg, spec));
  std::vector<Expansion> members;
  report.checks.push_back(check_expansion(cfg, grid, members));
  report.checks.push_back(check_automorphy(cfg, members));
  report.checks.push_back(check_rdq_cocycle(cfg));
  report.checks.push_back(check_theta(cfg));
  report.checks.push_back(check_pointwise(cfg));
  return report;
}

}  // namespace

bool RunReport::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

RunReport verify_all(const SpaceConfig& cfg, unsigned threads) {
  cfg.validate();
  RunReport report = run_suite_once(cfg, threads);

  Timer timer;
  RunReport second = run_suite_once(cfg, threads == 1 ? 2 : 1);
  std::string a = report_to_json(report).dump();
  std::string b = report_to_json(second).dump();
  bool identical = (a == b);
  Json details{{"bytes_first", a.size()},
               {"bytes_second", b.size()},
               {"identical", identical}};
  CheckResult det = make_check("determinism", identical ? 0.0 : 1.0, 0.5,
                               std::move(details), timer.ms());
  report.checks.push_back(det);
  return report;
}

RunReport report_discrepancies(const SpaceConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.cfg = cfg;
  Grid grid = build_grid(cfg);
  report.checks.push_back(check_norms(cfg, grid, report.calibration));
  report.checks.back().name = "norm_variant_ratio_constancy";
  KernelSpec spec;
  report.checks.push_back(check_kernel(cfg, spec, report.calibration));
  report.checks.back().name = "kernel_calibration_probes";
  return report;
}

Json report_to_json(const RunReport& report) {
  Json j;
  j["config"] = config_to_json(report.cfg);
  Json checks = Json::array();
  for (const CheckResult& c : report.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["status"] = c.passed ? "pass" : "fail";
    jc["residual"] = c.residual;
    jc["tolerance"] = c.tolerance;
    jc["details"] = c.details;
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  Json calib;
  calib["fitted_constant"] = report.calibration.fitted_constant;
  calib["printed_constant"] = report.calibration.printed_constant;
  calib["fitted_tau"] = Json{{"re", report.calibration.fitted_tau.real()},
                             {"im", report.calibration.fitted_tau.imag()}};
  calib["printed_tau"] = Json{{"re", report.calibration.printed_tau.real()},
                              {"im", report.calibration.printed_tau.imag()}};
  calib["probe_max_rel_dev"] = report.calibration.probe_max_rel_dev;
  calib["norm_variant_ratios"] = report.calibration.norm_variant_ratios;
  calib["norm_ratio_spread"] = report.calibration.norm_ratio_spread;
  j["calibration"] = std::move(calib);
  return j;
}

std::string report_to_table(const RunReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(32) << "check" << std::setw(8) << "status"
     << std::setw(14) << "residual" << std::setw(14) << "tolerance"
     << "wall_ms\n";
  os << std::string(78, '-') << '\n';
  for (const CheckResult& c : report.checks) {
    os << std::left << std::setw(32) << c.name << std::setw(8)
       << (c.passed ? "pass" : "FAIL") << std::setw(14)
       << std::scientific << std::setprecision(3) << c.residual << std::setw(14)
       << c.tolerance << std::fixed << std::setprecision(1) << c.wall_ms
       << '\n';
  }
  os << std::string(78, '-') << '\n';
  os << "fitted constant " << std::scientific << std::setprecision(12)
     << report.calibration.fitted_constant << " (printed "
     << report.calibration.printed_constant << ")\n";
  os << "fitted tau      " << report.calibration.fitted_tau.real() << " + "
     << report.calibration.fitted_tau.imag() << "i (printed "
     << report.calibration.printed_tau.real() << " + "
     << report.calibration.printed_tau.imag() << "i)\n";
  for (const auto& [name, ratio] : report.calibration.norm_variant_ratios)
    os << "norm ratio " << name << " = " << ratio << '\n';
  os << (report.all_passed() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT")
     << '\n';
  return os.str();
}

}  // namespace thetafock

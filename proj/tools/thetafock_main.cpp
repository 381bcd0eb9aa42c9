#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "thetafock/basis.hpp"
#include "thetafock/expansion.hpp"
#include "thetafock/kernel.hpp"
#include "thetafock/quadrature.hpp"
#include "thetafock/report.hpp"
#include "thetafock/serialize.hpp"
#include "thetafock/theta.hpp"

namespace tf = thetafock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

tf::Complex parse_complex(const std::string& s) {
  std::istringstream is(s);
  double re = 0.0, im = 0.0;
  char sep = 0;
  if (!(is >> re)) throw std::invalid_argument("bad complex literal: " + s);
  if (is >> sep) {
    if (sep != ',' || !(is >> im))
      throw std::invalid_argument("bad complex literal: " + s);
  }
  return {re, im};
}

// "zre,zim;z2re,z2im;..." with g-1 transverse entries.
tf::Point parse_point(const std::string& s, const tf::SpaceConfig& cfg) {
  tf::Point u;
  std::istringstream is(s);
  std::string part;
  bool first = true;
  while (std::getline(is, part, ';')) {
    if (part.empty()) continue;
    if (first) {
      u.z = parse_complex(part);
      first = false;
    } else {
      u.zprime.push_back(parse_complex(part));
    }
  }
  if (first || static_cast<int>(u.zprime.size()) != cfg.transverse_dim())
    throw std::invalid_argument(
        "point: expected z plus " + std::to_string(cfg.transverse_dim()) +
        " transverse coordinates separated by ';'");
  return u;
}

tf::MultiIndex parse_multi_index(const std::string& s, const tf::SpaceConfig& cfg) {
  std::vector<int> k;
  if (!s.empty()) {
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, ',')) k.push_back(std::stoi(part));
  }
  if (static_cast<int>(k.size()) != cfg.transverse_dim())
    throw std::invalid_argument("k: expected " +
                                std::to_string(cfg.transverse_dim()) +
                                " entries");
  for (int v : k)
    if (v < 0) throw std::invalid_argument("k: entries must be >= 0");
  return tf::MultiIndex(std::move(k));
}

tf::SpaceConfig config_from(const std::string& path) {
  if (path.empty()) {
    tf::SpaceConfig cfg;
    cfg.validate();
    return cfg;
  }
  return tf::load_config(path);
}

void emit(const tf::Json& j, const std::string& out_path) {
  std::string text = j.dump(2);
  text.push_back('\n');
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + out_path);
    out << text;
  }
}

// Catalog for `expand --input`: a coefficient file, a single basis element,
// or a seeded random expansion.
tf::Expansion input_function(const tf::SpaceConfig& cfg, const std::string& spec) {
  if (spec.rfind("basis:", 0) == 0) {
    std::string rest = spec.substr(6);
    auto colon = rest.find(':');
    tf::BasisIndex idx;
    idx.n = std::stol(rest.substr(0, colon));
    std::string kpart = colon == std::string::npos ? "" : rest.substr(colon + 1);
    idx.k = parse_multi_index(kpart, cfg);
    tf::Expansion e;
    e.cfg = cfg;
    e.coeffs[idx] = {1.0, 0.0};
    return e;
  }
  if (spec.rfind("random:", 0) == 0) {
    long count = std::stol(spec.substr(7));
    tf::Rng rng(cfg.seed);
    auto window = tf::index_window(cfg);
    tf::Expansion e;
    e.cfg = cfg;
    for (long i = 0; i < count; ++i) {
      const auto& idx = window[static_cast<std::size_t>(
          rng.integer(0, static_cast<long>(window.size()) - 1))];
      e.coeffs[idx] = rng.complex_in_box(1.0, 1.0);
    }
    return e;
  }
  return tf::load_expansion(cfg, spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rank-one theta Fock-Bargmann space toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_path, seed_hex;
  bool as_table = false;
  app.add_option("--config", config_path, "JSON config path")->capture_default_str();
  app.add_option("--seed", seed_hex, "hex seed override");
  app.add_option("--out", out_path, "write JSON output to this file");
  app.add_flag("--table,!--json", as_table, "human-readable table (verify-all/report)");

  // theta
  auto* c_theta = app.add_subcommand("theta", "evaluate theta_{alpha,beta}(z|tau)");
  double t_alpha = 0.0, t_beta = 0.0, t_tol = 1e-12;
  std::string t_z = "0,0", t_tau = "0,1";
  c_theta->add_option("--alpha", t_alpha)->capture_default_str();
  c_theta->add_option("--beta", t_beta)->capture_default_str();
  c_theta->add_option("--z", t_z, "re,im")->capture_default_str();
  c_theta->add_option("--tau", t_tau, "re,im with im > 0")->capture_default_str();
  c_theta->add_option("--tol", t_tol)->capture_default_str();

  // basis-eval
  auto* c_basis = app.add_subcommand("basis-eval", "evaluate e_{n,k} at a point");
  long b_n = 0;
  std::string b_k, b_point;
  c_basis->add_option("--n", b_n)->required();
  c_basis->add_option("--k", b_k, "comma-separated, g-1 entries");
  c_basis->add_option("--point", b_point, "z;z2;... as re,im")->required();

  // norm
  auto* c_norm = app.add_subcommand("norm", "norm constants for an index");
  long nm_n = 0;
  std::string nm_k;
  c_norm->add_option("--n", nm_n)->required();
  c_norm->add_option("--k", nm_k);

  // gram
  auto* c_gram = app.add_subcommand("gram", "numerical Gram matrix of the window");
  int g_nwin = 2, g_kwin = 2;
  std::string g_csv;
  c_gram->add_option("--n-window", g_nwin)->capture_default_str();
  c_gram->add_option("--k-window", g_kwin)->capture_default_str();
  c_gram->add_option("--csv-out", g_csv, "also write the matrix as CSV");

  // kernel-eval
  auto* c_keval = app.add_subcommand("kernel-eval", "evaluate the kernel at (u, v)");
  std::string ke_u, ke_v, ke_method = "closed";
  c_keval->add_option("--u", ke_u)->required();
  c_keval->add_option("--v", ke_v)->required();
  c_keval->add_option("--method", ke_method, "series|closed")->capture_default_str();

  // kernel-check
  auto* c_kcheck = app.add_subcommand("kernel-check", "closed form vs series probes");
  int kc_probes = 50;
  c_kcheck->add_option("--probes", kc_probes)->capture_default_str();

  // expand
  auto* c_expand = app.add_subcommand("expand", "extract coefficients of a function");
  std::string ex_input;
  c_expand->add_option("--input", ex_input,
                       "coeff file | basis:n[:k1,k2,..] | random:count")
      ->required();

  // reconstruct
  auto* c_rec = app.add_subcommand("reconstruct", "evaluate a coefficient file");
  std::string rc_coeffs, rc_point;
  c_rec->add_option("--coeffs", rc_coeffs)->required();
  c_rec->add_option("--point", rc_point)->required();

  // verify-all / report
  auto* c_verify = app.add_subcommand("verify-all", "run the full property suite");
  unsigned v_threads = 1;
  c_verify->add_option("--threads", v_threads)->capture_default_str();
  auto* c_report = app.add_subcommand("report", "printed vs resolved constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    tf::SpaceConfig cfg = config_from(config_path);
    if (!seed_hex.empty()) cfg.seed = std::stoull(seed_hex, nullptr, 16);

    if (c_theta->parsed()) {
      tf::ThetaArgs args{t_alpha, t_beta, parse_complex(t_z), parse_complex(t_tau)};
      tf::ThetaResult r = tf::theta_sum(args, t_tol);
      emit(tf::Json{{"re", r.value.real()},
                    {"im", r.value.imag()},
                    {"n_used", r.n_used},
                    {"tail_bound", r.tail_bound}},
           out_path);
    } else if (c_basis->parsed()) {
      tf::BasisIndex idx{b_n, parse_multi_index(b_k, cfg)};
      tf::Point u = parse_point(b_point, cfg);
      tf::LogValue lv = tf::basis_eval_log(cfg, idx, u);
      tf::Complex v = lv.to_complex();
      emit(tf::Json{{"re", v.real()},
                    {"im", v.imag()},
                    {"log_modulus", lv.log_modulus},
                    {"phase", lv.phase}},
           out_path);
    } else if (c_norm->parsed()) {
      tf::BasisIndex idx{nm_n, parse_multi_index(nm_k, cfg)};
      emit(tf::Json{
               {"canonical", tf::norm_squared(cfg, idx)},
               {"lemma22",
                tf::norm_squared_printed(cfg, idx, tf::NormVariant::lemma22)},
               {"thm32", tf::norm_squared_printed(cfg, idx, tf::NormVariant::thm32)},
               {"intro", tf::norm_squared_printed(cfg, idx, tf::NormVariant::intro)},
               {"log_canonical", tf::log_norm_squared(cfg, idx)}},
           out_path);
    } else if (c_gram->parsed()) {
      tf::Grid grid = tf::build_grid(cfg);
      auto window = tf::index_window(cfg, g_nwin, g_kwin);
      tf::GramMatrix gm = tf::gram_matrix(grid, cfg, window);
      if (!g_csv.empty()) {
        std::ofstream csv(g_csv, std::ios::binary);
        if (!csv) throw std::invalid_argument("cannot write " + g_csv);
        csv << tf::gram_to_csv(gm);
      }
      emit(tf::Json{{"size", gm.n},
                    {"max_offdiag", gm.max_offdiag()},
                    {"max_diag_err", gm.max_diag_error()}},
           out_path);
    } else if (c_keval->parsed()) {
      tf::Point u = parse_point(ke_u, cfg);
      tf::Point v = parse_point(ke_v, cfg);
      tf::SeriesTruncation tr = tf::default_series_truncation(cfg, u, v);
      tf::Complex val;
      if (ke_method == "series") {
        val = tf::kernel_series(cfg, u, v, tr.n_cap, tr.k_cap);
      } else if (ke_method == "closed") {
        tf::KernelSpec spec = tf::calibrate_kernel(cfg);
        val = tf::kernel_closed(spec, u, v);
      } else {
        throw std::invalid_argument("method must be series or closed");
      }
      emit(tf::Json{{"re", val.real()},
                    {"im", val.imag()},
                    {"method", ke_method},
                    {"trunc", tf::Json{{"n_cap", tr.n_cap}, {"k_cap", tr.k_cap}}}},
           out_path);
    } else if (c_kcheck->parsed()) {
      tf::KernelSpec spec = tf::calibrate_kernel_unchecked(cfg);
      tf::Rng rng(cfg.seed ^ 0x6b63ULL);
      double max_dev = spec.probe_max_rel_dev;
      for (int p = 50; p < kc_probes; ++p) {
        tf::Point u, v;
        u.z = rng.complex_in_box(1.0, 0.6);
        v.z = rng.complex_in_box(1.0, 0.6);
        for (int j = 0; j < cfg.transverse_dim(); ++j) {
          u.zprime.push_back(rng.complex_in_box(1.0, 1.0));
          v.zprime.push_back(rng.complex_in_box(1.0, 1.0));
        }
        tf::SeriesTruncation tr = tf::default_series_truncation(cfg, u, v);
        tf::Complex s = tf::kernel_series(cfg, u, v, tr.n_cap + 4, tr.k_cap + 4);
        tf::Complex c = tf::kernel_closed(spec, u, v);
        max_dev = std::max(max_dev,
                           std::abs(s - c) / std::max({std::abs(s), std::abs(c),
                                                       1e-300}));
      }
      emit(tf::Json{{"max_rel_dev", max_dev},
                    {"fitted_constant", spec.closed_form_constant},
                    {"printed_constant", spec.printed_constant},
                    {"fitted_tau", tf::Json{{"re", spec.tau_kernel.real()},
                                            {"im", spec.tau_kernel.imag()}}},
                    {"printed_tau", tf::Json{{"re", spec.printed_tau.real()},
                                             {"im", spec.printed_tau.imag()}}}},
           out_path);
      if (!(max_dev < 1e-8)) return kExitCheckFailure;
    } else if (c_expand->parsed()) {
      tf::Expansion input = input_function(cfg, ex_input);
      tf::Expansion result = tf::expand(cfg, tf::as_function(input));
      emit(tf::expansion_to_json(result), out_path);
    } else if (c_rec->parsed()) {
      tf::Expansion e = tf::load_expansion(cfg, rc_coeffs);
      tf::Point u = parse_point(rc_point, cfg);
      tf::Complex v = tf::reconstruct(e, u);
      emit(tf::Json{{"re", v.real()}, {"im", v.imag()}}, out_path);
    } else if (c_verify->parsed()) {
      tf::RunReport report = tf::verify_all(cfg, v_threads);
      if (as_table)
        std::cout << tf::report_to_table(report);
      else
        emit(tf::report_to_json(report), out_path);
      if (!out_path.empty() && as_table)
        emit(tf::report_to_json(report), out_path);
      return report.all_passed() ? kExitOk : kExitCheckFailure;
    } else if (c_report->parsed()) {
      tf::RunReport report = tf::report_discrepancies(cfg);
      if (as_table)
        std::cout << tf::report_to_table(report);
      else
        emit(tf::report_to_json(report), out_path);
      return report.all_passed() ? kExitOk : kExitCheckFailure;
    }
  } catch (const tf::UnreachableToleranceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  } catch (const tf::CalibrationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::cerr << "config schema: {g, nu, alpha, theta_tol, n_max, k_max, "
                 "quad:{x_points, hermite_order}, seed?}\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
  return kExitOk;
}

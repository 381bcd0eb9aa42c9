#include "thetafock/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "thetafock/basis.hpp"
#include "thetafock/errors.hpp"

namespace thetafock {

namespace {

constexpr int kMaxHermiteOrder = 700;
constexpr double kInvPiQuarter = 0.75112554446494248285870300477623;  // pi^{-1/4}

// phi_k(t) = h_k(t) exp(-t^2/2) with h_k orthonormal for weight exp(-t^2).
// Returns (phi_q, phi_{q-1}).
std::pair<double, double> hermite_phi(int q, double t) {
  double prev = 0.0;                          // phi_{-1}
  double cur = kInvPiQuarter * std::exp(-0.5 * t * t);  // phi_0
  for (int k = 1; k <= q; ++k) {
    double next = t * std::sqrt(2.0 / k) * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

double sum_phi_squares(int q, double t) {
  double prev = 0.0;
  double cur = kInvPiQuarter * std::exp(-0.5 * t * t);
  double s = cur * cur;
  for (int k = 1; k < q; ++k) {
    double next = t * std::sqrt(2.0 / k) * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
    s += cur * cur;
  }
  return s;
}

double newton_polish(int q, double guess, double upper_guard) {
  double t = guess;
  for (int it = 0; it < 80; ++it) {
    auto [phi, phi_prev] = hermite_phi(q, t);
    double deriv = std::sqrt(2.0 * q) * phi_prev - t * phi;
    if (deriv == 0.0) break;
    double step = phi / deriv;
    double tn = t - step;
    if (tn >= upper_guard) tn = 0.5 * (t + upper_guard);  // stay below the previous zero
    if (tn < 0.0) tn = 0.5 * t;
    double done = std::abs(tn - t) <= 1e-15 * (1.0 + std::abs(tn));
    t = tn;
    if (done) break;
  }
  return t;
}

}  // namespace

Rule1D gauss_hermite(int order) {
  if (order < 1 || order > kMaxHermiteOrder)
    throw std::invalid_argument("gauss_hermite: order must be in [1, " +
                                std::to_string(kMaxHermiteOrder) + "]");

  std::vector<double> positive;
  double upper = std::numeric_limits<double>::infinity();
  double guess =
      std::sqrt(2.0 * order + 1.0) -
      1.85575 * std::pow(2.0 * order + 1.0, -1.0 / 6.0);  // largest zero
  int n_positive = order / 2;
  for (int i = 0; i < n_positive; ++i) {
    double t = newton_polish(order, guess, upper);
    positive.push_back(t);
    upper = t;
    // WKB spacing of consecutive zeros.
    double under = std::max(2.0 * order + 1.0 - t * t, 4.0);
    guess = t - kPi / std::sqrt(under);
    if (guess < 0.0) guess = 0.5 * t;
  }

  Rule1D rule;
  std::vector<double> nodes;
  if (order % 2 == 1) nodes.push_back(0.0);
  for (double t : positive) {
    nodes.push_back(t);
    nodes.push_back(-t);
  }
  std::sort(nodes.begin(), nodes.end());

  rule.nodes = nodes;
  rule.weights.reserve(nodes.size());
  rule.log_weights.reserve(nodes.size());
  for (double t : nodes) {
    double s = sum_phi_squares(order, t);
    double log_w = -t * t - std::log(s);
    rule.log_weights.push_back(log_w);
    rule.weights.push_back(std::exp(log_w));
  }
  return rule;
}

int hermite_order_for_exponent(double c) {
  double ac = std::abs(c);
  int q = static_cast<int>(std::ceil(0.5 * (0.5 * ac + 6.5) * (0.5 * ac + 6.5))) + 10;
  q = std::max(q, 20);
  if (q > kMaxHermiteOrder)
    throw std::invalid_argument(
        "quadrature: exponential budget c=" + std::to_string(c) +
        " needs Hermite order beyond the supported " +
        std::to_string(kMaxHermiteOrder));
  return q;
}

Complex gaussian_integral(double a, Complex b) {
  if (!(a > 0.0)) throw std::domain_error("gaussian_integral: a must be positive");
  return std::sqrt(kPi / a) * std::exp(b * b / (4.0 * a));
}

namespace {

Rule1D scale_rule(const Rule1D& base, double node_scale) {
  // exp(-t^2) rule -> exp(-a y^2) rule with y = t/sqrt(a): node_scale = 1/sqrt(a).
  Rule1D out;
  out.nodes.reserve(base.nodes.size());
  out.weights.reserve(base.nodes.size());
  out.log_weights.reserve(base.nodes.size());
  double log_scale = std::log(node_scale);
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    out.nodes.push_back(base.nodes[i] * node_scale);
    out.weights.push_back(base.weights[i] * node_scale);
    out.log_weights.push_back(base.log_weights[i] + log_scale);
  }
  return out;
}

}  // namespace

Grid build_grid(const SpaceConfig& cfg) { return build_grid(cfg, GridBudget{}); }

Grid build_grid(const SpaceConfig& cfg, const GridBudget& budget) {
  cfg.validate();
  Grid grid;
  grid.g = cfg.g;
  grid.nu = cfg.nu;

  int m = std::max({cfg.quad.x_points, 2 * cfg.n_max + 2, budget.x_min, 3});
  grid.x_nodes.resize(m);
  for (int j = 0; j < m; ++j) grid.x_nodes[j] = static_cast<double>(j) / m;
  grid.x_weight = 1.0 / m;

  double y_budget = budget.y_exponent >= 0.0
                        ? budget.y_exponent
                        : 4.0 * kPi * (cfg.n_max + std::abs(cfg.alpha));
  double c_y = y_budget / std::sqrt(2.0 * cfg.nu);
  int y_order = std::max({cfg.quad.hermite_order, 20,
                          hermite_order_for_exponent(c_y), budget.y_min});
  grid.y = scale_rule(gauss_hermite(y_order), 1.0 / std::sqrt(2.0 * cfg.nu));

  int t_order = std::max({cfg.k_max + 1, 8, budget.t_min});
  if (budget.z_exponent > 0.0) {
    double c_t = budget.z_exponent / std::sqrt(cfg.nu);
    t_order = std::max(t_order, hermite_order_for_exponent(c_t));
  }
  grid.t = scale_rule(gauss_hermite(t_order), 1.0 / std::sqrt(cfg.nu));
  return grid;
}

std::size_t Grid::total_nodes() const {
  double total = static_cast<double>(x_nodes.size()) * y.nodes.size();
  for (int j = 1; j < g; ++j)
    total *= static_cast<double>(t.nodes.size()) * t.nodes.size();
  if (total > 4e8) return static_cast<std::size_t>(4e8) + 1;
  return static_cast<std::size_t>(total);
}

Complex inner_product(const Grid& grid, const PointFn& f, const PointFn& g) {
  const std::size_t n_x = grid.x_nodes.size();
  const std::size_t n_y = grid.y.nodes.size();
  const std::size_t n_t = grid.t.nodes.size();
  const int d = grid.g - 1;

  std::size_t total = grid.total_nodes();
  if (total > 4e8)
    throw std::invalid_argument(
        "inner_product: tensor grid too large; reduce orders or dimension");

  const double nu = grid.nu;
  auto make_ctx = [d] {
    Point u;
    u.zprime.resize(d);
    return u;
  };

  auto term = [&](Point& u, std::size_t idx) -> Complex {
    std::size_t rest = idx;
    double log_w = std::log(grid.x_weight);
    for (int j = d - 1; j >= 0; --j) {
      std::size_t it = rest % n_t;
      rest /= n_t;
      std::size_t is = rest % n_t;
      rest /= n_t;
      u.zprime[j] = Complex(grid.t.nodes[is], grid.t.nodes[it]);
      log_w += grid.t.log_weights[is] + grid.t.log_weights[it];
    }
    std::size_t iy = rest % n_y;
    rest /= n_y;
    std::size_t ix = rest;
    double x = grid.x_nodes[ix];
    double y = grid.y.nodes[iy];
    u.z = Complex(x, y);
    log_w += grid.y.log_weights[iy];

    // The rule absorbs exp(-2 nu y^2) and exp(-nu |z'|^2); the remaining part
    // of exp(-H) is exp(nu (y^2 - x^2)).
    double w = std::exp(log_w + nu * (y * y - x * x));
    if (w == 0.0) return {0.0, 0.0};

    Complex fv = f(u);
    Complex gv = g(u);
    if (!is_finite(fv) || !is_finite(gv)) {
      std::ostringstream os;
      os << "inner_product: non-finite sample at node z=(" << x << "," << y << ")";
      for (int j = 0; j < d; ++j)
        os << " z'_" << (j + 2) << "=(" << u.zprime[j].real() << ","
           << u.zprime[j].imag() << ")";
      throw NonFiniteSampleError(os.str());
    }
    return fv * std::conj(gv) * w;
  };

  return blocked_sum_ctx(total, grid.threads, make_ctx, term);
}

namespace {

Complex trapezoid_phase_sum(const Grid& grid, long dn) {
  KahanSum acc;
  for (double x : grid.x_nodes)
    acc.add(std::polar(grid.x_weight, kTwoPi * static_cast<double>(dn) * x));
  return acc.value();
}

// log of sum_m w_m exp(b * y_m): the y-direction factor of a basis pair.
double y_exponential_log_sum(const Rule1D& y, double b) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < y.nodes.size(); ++i)
    m = std::max(m, y.log_weights[i] + b * y.nodes[i]);
  double s = 0.0;
  for (std::size_t i = 0; i < y.nodes.size(); ++i)
    s += std::exp(y.log_weights[i] + b * y.nodes[i] - m);
  return m + std::log(s);
}

Complex transverse_monomial_sum(const Rule1D& t, int k_left, int k_right) {
  KahanSum acc;
  for (std::size_t p = 0; p < t.nodes.size(); ++p) {
    if (t.weights[p] == 0.0) continue;
    for (std::size_t q = 0; q < t.nodes.size(); ++q) {
      if (t.weights[q] == 0.0) continue;
      Complex v(t.nodes[p], t.nodes[q]);
      acc.add(t.weights[p] * t.weights[q] * pow_int(v, k_left) *
              pow_int(std::conj(v), k_right));
    }
  }
  return acc.value();
}

}  // namespace

ScaledComplex basis_inner_product(const Grid& grid, const SpaceConfig& cfg,
                                  const BasisIndex& i, const BasisIndex& j) {
  const int d = cfg.transverse_dim();
  if (i.k.size() != d || j.k.size() != d)
    throw std::invalid_argument("basis_inner_product: multi-index dimension mismatch");

  ScaledComplex result(trapezoid_phase_sum(grid, i.n - j.n));
  double b = -kTwoPi * (2.0 * cfg.alpha + static_cast<double>(i.n + j.n));
  result *= ScaledComplex::from_log(y_exponential_log_sum(grid.y, b), 0.0);
  for (int c = 0; c < d; ++c)
    result *= transverse_monomial_sum(grid.t, i.k.k[c], j.k.k[c]);
  return result;
}

double GramMatrix::max_offdiag() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) m = std::max(m, std::abs(at(i, j)));
  return m;
}

double GramMatrix::max_diag_error() const {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    m = std::max(m, std::abs(at(i, i) - Complex(1.0, 0.0)));
  return m;
}

GramMatrix gram_matrix(const Grid& grid, const SpaceConfig& cfg,
                       const std::vector<BasisIndex>& indices) {
  std::set<BasisIndex> unique(indices.begin(), indices.end());
  if (unique.size() != indices.size())
    throw std::invalid_argument("gram_matrix: indices must be distinct");

  GramMatrix gm;
  gm.n = indices.size();
  gm.a.assign(gm.n * gm.n, Complex{});

  std::vector<double> log_norms(gm.n);
  for (std::size_t i = 0; i < gm.n; ++i)
    log_norms[i] = log_norm_squared(cfg, indices[i]);

  for (std::size_t i = 0; i < gm.n; ++i) {
    for (std::size_t j = i; j < gm.n; ++j) {
      ScaledComplex v = basis_inner_product(grid, cfg, indices[i], indices[j]);
      v *= ScaledComplex::from_log(-0.5 * (log_norms[i] + log_norms[j]), 0.0);
      Complex entry = v.value();
      gm.a[i * gm.n + j] = entry;
      gm.a[j * gm.n + i] = std::conj(entry);
    }
  }
  return gm;
}

}  // namespace thetafock

#include "thetafock/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace thetafock {

void SpaceConfig::validate() const {
  if (g < 1) throw std::invalid_argument("SpaceConfig: g must be >= 1");
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("SpaceConfig: nu must be positive and finite");
  if (!std::isfinite(alpha))
    throw std::invalid_argument("SpaceConfig: alpha must be finite");
  if (!(theta_tol > 0.0))
    throw std::invalid_argument("SpaceConfig: theta_tol must be positive");
  if (n_max < 0) throw std::invalid_argument("SpaceConfig: n_max must be >= 0");
  if (k_max < 0) throw std::invalid_argument("SpaceConfig: k_max must be >= 0");
  if (quad.x_points < 3)
    throw std::invalid_argument("SpaceConfig: quad.x_points must be >= 3");
  if (quad.hermite_order < 2)
    throw std::invalid_argument("SpaceConfig: quad.hermite_order must be >= 2");
}

double MultiIndex::log_factorial() const {
  double s = 0.0;
  for (int v : k) s += std::lgamma(static_cast<double>(v) + 1.0);
  return s;
}

namespace {

void check_dim(const SpaceConfig& cfg, const Point& u, const char* what) {
  if (static_cast<int>(u.zprime.size()) != cfg.transverse_dim())
    throw std::invalid_argument(std::string(what) +
                                ": point dimension does not match config (g=" +
                                std::to_string(cfg.g) + ")");
}

}  // namespace

Complex hermitian_form(const SpaceConfig& cfg, const Point& u, const Point& v) {
  check_dim(cfg, u, "hermitian_form");
  check_dim(cfg, v, "hermitian_form");
  Complex s = u.z * std::conj(v.z);
  for (std::size_t j = 0; j < u.zprime.size(); ++j)
    s += u.zprime[j] * std::conj(v.zprime[j]);
  return cfg.nu * s;
}

double gaussian_weight(const SpaceConfig& cfg, const Point& u) {
  check_dim(cfg, u, "gaussian_weight");
  double s = std::norm(u.z);
  for (const Complex& zj : u.zprime) s += std::norm(zj);
  return std::exp(-cfg.nu * s);
}

std::pair<Point, long> wrap_to_fundamental(const SpaceConfig& cfg, const Point& u) {
  check_dim(cfg, u, "wrap_to_fundamental");
  long m = static_cast<long>(std::floor(u.z.real()));
  Point wrapped(u.z - static_cast<double>(m), u.zprime);
  return {std::move(wrapped), m};
}

namespace {

void enumerate_rec(int dim, int remaining, std::vector<int>& cur,
                   std::vector<MultiIndex>& out) {
  if (static_cast<int>(cur.size()) == dim) {
    out.emplace_back(cur);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    cur.push_back(v);
    enumerate_rec(dim, remaining - v, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_up_to(int dim, int degree) {
  std::vector<MultiIndex> out;
  std::vector<int> cur;
  enumerate_rec(dim, degree, cur, out);
  return out;
}

std::vector<BasisIndex> index_window(const SpaceConfig& cfg, int n_win, int k_win) {
  std::vector<BasisIndex> out;
  auto ks = multi_indices_up_to(cfg.transverse_dim(), k_win);
  for (long n = -n_win; n <= n_win; ++n)
    for (const auto& k : ks) out.push_back(BasisIndex{n, k});
  return out;
}

std::vector<BasisIndex> index_window(const SpaceConfig& cfg) {
  return index_window(cfg, cfg.n_max, cfg.k_max);
}

}  // namespace thetafock

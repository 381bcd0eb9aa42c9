#pragma once

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "thetafock/numeric.hpp"

namespace thetafock {

// Controls for the fundamental-domain product quadrature.
struct QuadratureSpec {
  int x_points = 16;       // periodic trapezoid count on [0,1]
  int hermite_order = 20;  // Gauss-Hermite order per real Gaussian direction
};

// Parameters of the rank-one space on C^g in the adapted coordinates (z; z'),
// where the lattice direction is normalized so that the Hermitian form is
// nu * (z conj(w) + sum_j z_j conj(w_j)).
//
// alpha is stored exactly as given; all formulas are invariant under the
// relabeling alpha -> alpha + 1 combined with n -> n - 1, so no normalization
// into [0,1) is performed.
struct SpaceConfig {
  int g = 2;                // complex dimension, >= 1
  double nu = 1.0;          // H(omega, omega) > 0
  double alpha = 0.3;       // character parameter, chi(m*omega) = e^{2 pi i alpha m}
  double theta_tol = 1e-12; // theta-series truncation tolerance
  int n_max = 3;            // Fourier index window |n| <= n_max
  int k_max = 3;            // monomial degree window |k| <= k_max
  QuadratureSpec quad;
  std::uint64_t seed = 0x5EED;

  int transverse_dim() const { return g - 1; }
  void validate() const;  // throws std::invalid_argument on bad parameters
};

// A point of C^g split as (z; z_2, ..., z_g).
struct Point {
  Complex z{};
  std::vector<Complex> zprime;

  Point() = default;
  Point(Complex z_, std::vector<Complex> zprime_)
      : z(z_), zprime(std::move(zprime_)) {}
};

// Multi-index (k_2, ..., k_g) of nonnegative integers.
struct MultiIndex {
  std::vector<int> k;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> k_) : k(std::move(k_)) {}

  int total() const {  // |k|
    int s = 0;
    for (int v : k) s += v;
    return s;
  }
  double log_factorial() const;  // log(k!)
  int size() const { return static_cast<int>(k.size()); }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

// Label (n, k) of a basis element.
struct BasisIndex {
  long n = 0;
  MultiIndex k;

  friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;
};

// H(u, v) = nu * (z conj(w) + sum_j z_j conj(w_j)).
// Throws std::invalid_argument on a dimension mismatch with cfg.
Complex hermitian_form(const SpaceConfig& cfg, const Point& u, const Point& v);

// exp(-H(u, u)); H(u, u) is real and >= 0.
double gaussian_weight(const SpaceConfig& cfg, const Point& u);

// Translates u by -m along the lattice direction so that Re z - m lands in
// [0, 1); returns the wrapped point and m = floor(Re z). zprime is unchanged.
std::pair<Point, long> wrap_to_fundamental(const SpaceConfig& cfg, const Point& u);

// All multi-indices of the given dimension with |k| <= degree, in
// lexicographic order.
std::vector<MultiIndex> multi_indices_up_to(int dim, int degree);

// The default index window: |n| <= n_max crossed with |k| <= k_max.
std::vector<BasisIndex> index_window(const SpaceConfig& cfg);
std::vector<BasisIndex> index_window(const SpaceConfig& cfg, int n_win, int k_win);

}  // namespace thetafock

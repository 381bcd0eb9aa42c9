#pragma once

#include <functional>
#include <vector>

#include "thetafock/geometry.hpp"
#include "thetafock/numeric.hpp"

namespace thetafock {

// One-dimensional Gaussian rule; weights carry the weight function, so
// integral f(t) w(t) dt ~ sum_i weights[i] * f(nodes[i]). log_weights are
// exact beyond the range where weights underflow.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;
};

// Gauss-Hermite rule of the given order for weight exp(-t^2). Newton on the
// scaled orthonormal recurrence; supported up to order 700.
Rule1D gauss_hermite(int order);

// Smallest order that integrates exp(c*t) against exp(-t^2) to ~1e-13
// relative (coverage of the shifted Gaussian peak plus margin).
int hermite_order_for_exponent(double c);

// Closed form int_R exp(-a y^2 + b y) dy = sqrt(pi/a) exp(b^2 / 4a), a > 0.
Complex gaussian_integral(double a, Complex b);

// Optional overrides for build_grid. y_exponent / z_exponent are budgets for
// integrand factors exp(b*y) (resp. exp(zeta*s) per real z' axis) that the
// rule must absorb accurately; *_min floor the rule sizes directly.
struct GridBudget {
  double y_exponent = -1.0;  // < 0: default 4*pi*(n_max + |alpha|)
  double z_exponent = 0.0;
  int x_min = 0;
  int y_min = 0;
  int t_min = 0;
};

// Product rule over the fundamental cell [0,1] x R x C^{g-1}: periodic
// trapezoid in x, Hermite in y for weight exp(-2 nu y^2), and a Hermite pair
// (re, im) per transverse coordinate for weight exp(-nu t^2).
struct Grid {
  int g = 1;
  double nu = 1.0;
  std::vector<double> x_nodes;  // j / M
  double x_weight = 0.0;        // 1 / M
  Rule1D y;                     // scaled for exp(-2 nu y^2)
  Rule1D t;                     // scaled for exp(-nu t^2), used twice per z'_j
  unsigned threads = 1;

  std::size_t total_nodes() const;
};

Grid build_grid(const SpaceConfig& cfg);
Grid build_grid(const SpaceConfig& cfg, const GridBudget& budget);

using PointFn = std::function<Complex(const Point&)>;

// <f, g> = int_{cell} f(u) conj(g(u)) exp(-H(u,u)) dlambda(u) over the full
// tensor grid. Deterministic blocked summation; throws NonFiniteSampleError
// naming the node if a sample is not finite.
Complex inner_product(const Grid& grid, const PointFn& f, const PointFn& g);

// <e_i, e_j> for basis elements, evaluated by per-axis 1-D quadrature sums
// (the integrand factorizes across coordinates). Scaled result: diagonal
// entries overflow double for large |n + alpha|^2 / nu.
ScaledComplex basis_inner_product(const Grid& grid, const SpaceConfig& cfg,
                                  const BasisIndex& i, const BasisIndex& j);

struct GramMatrix {
  std::size_t n = 0;
  std::vector<Complex> a;  // row-major, Hermitian

  Complex at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double max_offdiag() const;
  double max_diag_error() const;  // max |a_ii - 1|
};

// Normalized Gram matrix <e_i/|e_i|, e_j/|e_j|> over the given indices,
// computed with log-normalized basis values. Upper triangle computed,
// mirrored. Throws std::invalid_argument on duplicate indices.
GramMatrix gram_matrix(const Grid& grid, const SpaceConfig& cfg,
                       const std::vector<BasisIndex>& indices);

}  // namespace thetafock

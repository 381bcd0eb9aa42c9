#pragma once

#include <map>
#include <span>
#include <vector>

#include "thetafock/geometry.hpp"
#include "thetafock/numeric.hpp"
#include "thetafock/quadrature.hpp"

namespace thetafock {

// Finite coefficient map a_{n,k}: the computable representation of a member
// function f = sum a_{n,k} e_{n,k}.
struct Expansion {
  SpaceConfig cfg;
  std::map<BasisIndex, Complex> coeffs;
};

// The n-th Fourier slice psi_n as a finite monomial list over z'.
struct FourierSlice {
  long n = 0;
  std::vector<std::pair<MultiIndex, Complex>> monomials;

  Complex eval(std::span<const Complex> zprime) const;
};

std::vector<FourierSlice> slices(const Expansion& e);

// psi_n(z') = int_0^1 exp(-(nu/2)x^2 - 2 pi i alpha x) f(x, z')
//             * exp(-2 pi i n x) dx,
// as an m_samples-point DFT at y = 0; exact for band-limited members.
// Throws std::invalid_argument when m_samples < 2*n_max + 2.
Complex fourier_slice(const SpaceConfig& cfg, const PointFn& f, long n,
                      std::span<const Complex> zprime, int m_samples);

// Coefficients over the window |n| <= n_max, |k| <= k_max: Fourier slices
// followed by monomial extraction on the transverse Hermite grid.
// Coefficients below 1e-13 * max|sample| are dropped. The caller is
// responsible for f actually satisfying the functional equation
// (see automorphy_residual).
Expansion expand(const SpaceConfig& cfg, const PointFn& f);

// sum a_{n,k} e_{n,k}(u). Throws OverflowError when a term leaves double
// range.
Complex reconstruct(const Expansion& e, const Point& u);

// Turns an expansion into an evaluable function.
PointFn as_function(const Expansion& e);

// |f|^2 = sum |a_{n,k}|^2 |e_{n,k}|^2 (Parseval over the orthogonal basis).
// norm_growth_slices computes the same value grouped as
// sqrt(pi/(2 nu)) sum_n exp((2 pi^2/nu)(n+alpha)^2) |psi_n|^2.
double norm_growth(const Expansion& e);
double log_norm_growth(const Expansion& e);
double norm_growth_slices(const Expansion& e);

// |f(z+m, z') - chi(m) exp(nu (z + m/2) m) f(z, z')| normalized by
// 1 + |f(z, z') exp(nu (z + m/2) m)|; rounding-level for members, bounded
// away from zero for non-members.
double automorphy_residual(const SpaceConfig& cfg, const PointFn& f, long m,
                           const Point& u);

// Cauchy-Schwarz pointwise bound: |f(u)| <= bound. Tight (equality) for
// single-slice expansions. Throws DegenerateInputError when all coefficients
// vanish.
double pointwise_bound(const Expansion& e, const Point& u);

}  // namespace thetafock

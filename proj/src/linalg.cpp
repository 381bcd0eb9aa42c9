#include "thetafock/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thetafock {

namespace {

double offdiag_norm(const std::vector<double>& m, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += m[i * n + j] * m[i * n + j];
  return std::sqrt(s);
}

// Cyclic Jacobi sweeps on a real symmetric matrix, in place.
void jacobi_eigenvalues(std::vector<double>& m, std::size_t n) {
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return;

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (offdiag_norm(m, n) <= 1e-15 * scale * n) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = m[p * n + q];
        if (std::abs(apq) <= 1e-18 * scale) continue;
        double app = m[p * n + p], aqq = m[q * n + q];
        double theta = 0.5 * (aqq - app) / apq;
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double mkp = m[k * n + p], mkq = m[k * n + q];
          m[k * n + p] = c * mkp - s * mkq;
          m[k * n + q] = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double mpk = m[p * n + k], mqk = m[q * n + k];
          m[p * n + k] = c * mpk - s * mqk;
          m[q * n + k] = s * mpk + c * mqk;
        }
      }
    }
  }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(std::size_t n, std::span<const Complex> a) {
  if (a.size() != n * n)
    throw std::invalid_argument("hermitian_eigenvalues: size mismatch");

  std::size_t n2 = 2 * n;
  std::vector<double> m(n2 * n2, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double re = a[i * n + j].real();
      double im = a[i * n + j].imag();
      m[i * n2 + j] = re;
      m[(i + n) * n2 + (j + n)] = re;
      m[i * n2 + (j + n)] = -im;
      m[(i + n) * n2 + j] = im;
    }
  }
  jacobi_eigenvalues(m, n2);

  std::vector<double> all(n2);
  for (std::size_t i = 0; i < n2; ++i) all[i] = m[i * n2 + i];
  std::sort(all.begin(), all.end());
  // The embedding doubles every eigenvalue; take one of each adjacent pair.
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (all[2 * i] + all[2 * i + 1]);
  return out;
}

}  // namespace thetafock

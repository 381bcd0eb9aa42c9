#pragma once

#include <span>
#include <vector>

#include "thetafock/numeric.hpp"

namespace thetafock {

// Eigenvalues of an n x n Hermitian matrix (row-major), ascending. Cyclic
// Jacobi on the real-symmetric embedding [[Re, -Im], [Im, Re]]; each
// eigenvalue of the input appears twice there, so the doubled list is
// collapsed back to n values.
std::vector<double> hermitian_eigenvalues(std::size_t n, std::span<const Complex> a);

}  // namespace thetafock

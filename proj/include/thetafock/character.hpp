#pragma once

#include "thetafock/numeric.hpp"

namespace thetafock {

// The character of the rank-one lattice, chi(m*omega) = e^{2 pi i alpha m}.
// Only alpha-parameterized characters are constructible: any unimodular map
// on the lattice that makes the space nontrivial is of this form.
struct Character {
  double alpha = 0.0;
};

// e^{2 pi i alpha m}; unit modulus for every integer m.
Complex chi_of(const Character& ch, long m);

// Cocycle residual |chi(m1+m2) - chi(m1) chi(m2)|. The Hermitian form is real
// on the lattice, so the quantization condition reduces to plain
// multiplicativity; the residual is rounding-level for all integers.
double check_rdq(const Character& ch, long m1, long m2);

}  // namespace thetafock

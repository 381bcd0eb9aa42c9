#include "thetafock/character.hpp"

#include <cmath>

namespace thetafock {

Complex chi_of(const Character& ch, long m) {
  return std::polar(1.0, kTwoPi * ch.alpha * static_cast<double>(m));
}

double check_rdq(const Character& ch, long m1, long m2) {
  return std::abs(chi_of(ch, m1 + m2) - chi_of(ch, m1) * chi_of(ch, m2));
}

}  // namespace thetafock

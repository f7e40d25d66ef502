#pragma once

#include <numbers>
#include <random>

#include "squeeze/core.hpp"

namespace squeeze::test {

inline Cplxd random_in_disc(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
}

// Unit lower triangular with off-diagonal entries uniform in the closed unit disc.
inline UnitTriangularMatrix<double> random_admissible(int n, std::mt19937_64& rng) {
  CMatd a = CMatd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) a(i, j) = random_in_disc(rng);
  return UnitTriangularMatrix<double>(a);
}

inline UnitaryMatrix<double> random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Cplxd(g(rng), g(rng));
  Eigen::HouseholderQR<CMatd> qr(m);
  CMatd q = qr.householderQ() * CMatd::Identity(n, n);
  return UnitaryMatrix<double>(q);
}

}  // namespace squeeze::test

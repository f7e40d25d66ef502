#pragma once

#include <numbers>
#include <random>

namespace squeeze {

// Moduli follow Dirichlet(2, …, 2, 1) with the last component as slack, which
// is the pushforward of Lebesgue measure on the 1-norm ball; phases are uniform.
template <typename Rng>
CVecd sample_l1_ball(int n, Rng& rng) {
  std::gamma_distribution<double> g2(2.0, 1.0);
  std::exponential_distribution<double> g1(1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> g(n);
  double total = g1(rng);
  for (int j = 0; j < n; ++j) {
    g[j] = g2(rng);
    total += g[j];
  }
  CVecd z(n);
  for (int j = 0; j < n; ++j) z[j] = std::polar(g[j] / total, phase(rng));
  return z;
}

}  // namespace squeeze

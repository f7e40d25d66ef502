#pragma once

#include <vector>

#include "squeeze/domains.hpp"

namespace squeeze::detail {

// Nyström solution of the Kerzman–Stein equation for the Szegő kernel S(·, a)
// of a smooth Jordan curve, and the Riemann map recovered from it.
struct SzegoSolution {
  int nodes = 0;
  Cplxd a;
  std::vector<Cplxd> z;    // boundary nodes
  std::vector<Cplxd> dz;   // z′(s_k)·h, counterclockwise
  std::vector<Cplxd> S;    // S(z_k, a)
  std::vector<Cplxd> R;    // Riemann map at z_k, unit modulus
  std::vector<Cplxd> dR;   // R′(z_k)·dz_k
  double S_aa = 0.0;
  double gmres_residual = 0.0;

  Cplxd szego(Cplxd z) const;
  Cplxd forward(Cplxd z) const;
  Cplxd derivative(Cplxd z) const;
  // Starting guess for the inverse from the Cauchy formula on the image nodes.
  Cplxd inverse_guess(Cplxd w) const;
  Cplxd inverse(Cplxd w) const;
};

SzegoSolution solve_szego(const BoundaryCurve& curve, Cplxd a, int nodes);

// Largest difference of the boundary map values at the nodes shared by a
// solution and its refinement with twice the nodes.
double refinement_gap(const SzegoSolution& coarse, const SzegoSolution& fine);

}  // namespace squeeze::detail

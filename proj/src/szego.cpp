#include "szego.hpp"

#include <cmath>
#include <numbers>

#include "gmres.hpp"

namespace squeeze::detail {

namespace {

constexpr int kDenseLimit = 2048;
constexpr double kGmresTol = 1e-14;

// Σ v_k w_k/(z_k − z) / Σ w_k/(z_k − z): Cauchy's formula divided by the same
// formula for the constant 1, which cancels most of the quadrature error near
// the boundary. Returns the node value when z hits a node.
Cplxd compensated_cauchy(const std::vector<Cplxd>& nodes, const std::vector<Cplxd>& weights,
                         const std::vector<Cplxd>& values, Cplxd z) {
  Cplxd num = 0, den = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Cplxd d = nodes[k] - z;
    if (std::abs(d) < 1e-14 * (1.0 + std::abs(z))) return values[k];
    const Cplxd c = weights[k] / d;
    num += values[k] * c;
    den += c;
  }
  return num / den;
}

}  // namespace

Cplxd SzegoSolution::szego(Cplxd w) const { return compensated_cauchy(z, dz, S, w); }

Cplxd SzegoSolution::forward(Cplxd w) const { return compensated_cauchy(z, dz, R, w); }

Cplxd SzegoSolution::derivative(Cplxd w) const {
  const Cplxd s = szego(w);
  return 2.0 * std::numbers::pi * s * s / S_aa;
}

Cplxd SzegoSolution::inverse_guess(Cplxd w) const { return compensated_cauchy(R, dR, z, w); }

Cplxd SzegoSolution::inverse(Cplxd w) const {
  Cplxd x = inverse_guess(w);
  Cplxd res = forward(x) - w;
  for (int it = 0; it < 40 && std::abs(res) > 1e-15; ++it) {
    const Cplxd step = res / derivative(x);
    double lambda = 1.0;
    Cplxd next = x - step;
    Cplxd next_res = forward(next) - w;
    while (std::abs(next_res) > std::abs(res) && lambda > 1e-6) {
      lambda *= 0.5;
      next = x - lambda * step;
      next_res = forward(next) - w;
    }
    if (std::abs(next_res) >= std::abs(res)) break;
    x = next;
    res = next_res;
    if (std::abs(step) * lambda < 1e-16 * (1.0 + std::abs(x))) break;
  }
  return x;
}

SzegoSolution solve_szego(const BoundaryCurve& curve, Cplxd a, int nodes) {
  using std::numbers::pi;
  SzegoSolution sol;
  sol.nodes = nodes;
  sol.a = a;
  const double h = 2.0 * pi / nodes;
  const double orient = curve.orientation();
  sol.z.resize(nodes);
  sol.dz.resize(nodes);
  std::vector<Cplxd> tangent(nodes);
  std::vector<double> speed(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double s = k * h;
    const Cplxd d = orient * curve.tangent(s);
    sol.z[k] = curve.point(s);
    sol.dz[k] = d * h;
    speed[k] = std::abs(d) * h;
    tangent[k] = d / std::abs(d);
  }

  const Cplxd two_pi_i(0.0, 2.0 * pi);
  // A(z_j, z_k)·|dz_k| with H(z, w) = T(w)/(2πi(w − z)) and A = conj(Hᵀ) − H
  auto kernel = [&](int j, int k) -> Cplxd {
    if (j == k) return 0.0;
    const Cplxd hjk = tangent[k] / (two_pi_i * (sol.z[k] - sol.z[j]));
    const Cplxd hkj = tangent[j] / (two_pi_i * (sol.z[j] - sol.z[k]));
    return (std::conj(hkj) - hjk) * speed[k];
  };

  Eigen::VectorXcd rhs(nodes);
  for (int j = 0; j < nodes; ++j) rhs[j] = std::conj(tangent[j] / (two_pi_i * (sol.z[j] - a)));

  Eigen::VectorXcd x = rhs;
  GmresResult res;
  if (nodes <= kDenseLimit) {
    Eigen::MatrixXcd m(nodes, nodes);
    for (int j = 0; j < nodes; ++j)
      for (int k = 0; k < nodes; ++k) m(j, k) = (j == k ? 1.0 : 0.0) + kernel(j, k);
    res = gmres([&](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) { out.noalias() = m * v; }, rhs, x,
                kGmresTol, 60, 600);
  } else {
    res = gmres(
        [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
          out = v;
          for (int j = 0; j < nodes; ++j) {
            Cplxd acc = 0;
            for (int k = 0; k < nodes; ++k) acc += kernel(j, k) * v[k];
            out[j] += acc;
          }
        },
        rhs, x, kGmresTol, 60, 600);
  }
  sol.gmres_residual = res.relative_residual;

  sol.S.assign(x.data(), x.data() + nodes);
  sol.S_aa = compensated_cauchy(sol.z, sol.dz, sol.S, a).real();
  sol.R.resize(nodes);
  sol.dR.resize(nodes);
  for (int k = 0; k < nodes; ++k) {
    const Cplxd s = sol.S[k];
    sol.R[k] = Cplxd(0, -1) * tangent[k] * s / std::conj(s);
    sol.dR[k] = 2.0 * pi * s * s / sol.S_aa * sol.dz[k];
  }
  return sol;
}

double refinement_gap(const SzegoSolution& coarse, const SzegoSolution& fine) {
  double gap = 0.0;
  for (int k = 0; k < coarse.nodes; ++k) gap = std::max(gap, std::abs(coarse.R[k] - fine.R[2 * k]));
  return gap;
}

}  // namespace squeeze::detail

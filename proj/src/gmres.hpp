#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace squeeze::detail {

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Restarted GMRES with Givens rotations for a complex operator given as a
// matrix-vector product y = op(x).
template <typename Op>
GmresResult gmres(const Op& op, const Eigen::VectorXcd& rhs, Eigen::VectorXcd& x, double tol, int restart,
                  int max_iterations) {
  using Vec = Eigen::VectorXcd;
  using Cplx = std::complex<double>;
  const Eigen::Index n = rhs.size();
  const double bnorm = rhs.norm();
  GmresResult out;
  if (bnorm == 0) {
    x.setZero(n);
    out.converged = true;
    return out;
  }
  if (x.size() != n) x.setZero(n);

  Vec r(n), w(n);
  while (out.iterations < max_iterations) {
    op(x, w);
    r = rhs - w;
    double beta = r.norm();
    out.relative_residual = beta / bnorm;
    if (out.relative_residual <= tol) {
      out.converged = true;
      return out;
    }
    const int m = std::min<int>(restart, static_cast<int>(n));
    std::vector<Vec> v;
    v.reserve(m + 1);
    v.push_back(r / beta);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
    std::vector<Cplx> cs(m), sn(m);
    Vec g = Vec::Zero(m + 1);
    g[0] = beta;
    int k = 0;
    for (; k < m && out.iterations < max_iterations; ++k, ++out.iterations) {
      op(v[k], w);
      for (int i = 0; i <= k; ++i) {
        h(i, k) = v[i].dot(w);  // conjugates v[i]
        w -= h(i, k) * v[i];
      }
      h(k + 1, k) = w.norm();
      const bool breakdown = std::abs(h(k + 1, k)) < 1e-300;
      if (!breakdown) v.push_back(w / h(k + 1, k));
      for (int i = 0; i < k; ++i) {
        const Cplx t = std::conj(cs[i]) * h(i, k) + std::conj(sn[i]) * h(i + 1, k);
        h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      const double denom = std::hypot(std::abs(h(k, k)), std::abs(h(k + 1, k)));
      cs[k] = h(k, k) / denom;
      sn[k] = h(k + 1, k) / denom;
      h(k, k) = denom;
      h(k + 1, k) = 0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];
      out.relative_residual = std::abs(g[k + 1]) / bnorm;
      if (out.relative_residual <= tol || breakdown) {
        ++k;
        ++out.iterations;
        break;
      }
    }
    // back substitution on the k×k upper triangle
    Vec y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    for (int i = 0; i < k; ++i) x += y[i] * v[i];
    if (out.relative_residual <= tol) {
      op(x, w);
      out.relative_residual = (rhs - w).norm() / bnorm;
      out.converged = out.relative_residual <= 10 * tol;
      if (out.converged) return out;
    }
  }
  return out;
}

}  // namespace squeeze::detail

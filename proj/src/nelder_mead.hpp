#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <vector>

namespace squeeze::detail {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

// Minimizes f from x0 with an axis-aligned initial simplex of size `step`.
template <typename F>
NelderMeadResult nelder_mead(const F& f, const Eigen::VectorXd& x0, double step, double ftol, int max_evaluations) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  NelderMeadResult out;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++out.evaluations;
    return f(x);
  };
  for (int i = 0; i < n; ++i) pts[i + 1][i] += step;
  for (int i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<int> order(n + 1);
  while (out.evaluations < max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order.front(), worst = order.back(), second = order[n - 1];
    if (std::abs(vals[worst] - vals[best]) <= ftol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  out.x = pts[best];
  out.value = vals[best];
  return out;
}

}  // namespace squeeze::detail

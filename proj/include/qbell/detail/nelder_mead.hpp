#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "qbell/types.hpp"

namespace qbell::detail {

struct SimplexResult {
  RVector x;
  double value = 0.0;
  int evaluations = 0;
};

/// Plain Nelder-Mead minimization with the standard coefficients.
inline SimplexResult nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0,
                                 double step, int max_evals, double ftol) {
  const Eigen::Index n = x0.size();
  std::vector<RVector> pts(n + 1, x0);
  for (Eigen::Index i = 0; i < n; ++i) pts[i + 1](i) += step;
  std::vector<double> vals(n + 1);
  int evals = 0;
  for (Eigen::Index i = 0; i <= n; ++i) vals[i] = f(pts[i]), ++evals;

  std::vector<Eigen::Index> order(n + 1);
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    const auto best = order.front();
    const auto worst = order.back();
    const auto second = order[n - 1];
    if (vals[worst] - vals[best] <= ftol) break;

    RVector centroid = RVector::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(n);

    const RVector reflected = centroid + (centroid - pts[worst]);
    const double fr = f(reflected);
    ++evals;
    if (fr < vals[best]) {
      const RVector expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(expanded);
      ++evals;
      if (fe < fr) {
        pts[worst] = expanded, vals[worst] = fe;
      } else {
        pts[worst] = reflected, vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = reflected, vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      const RVector contracted = outside ? RVector(centroid + 0.5 * (reflected - centroid))
                                         : RVector(centroid + 0.5 * (pts[worst] - centroid));
      const double fc = f(contracted);
      ++evals;
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = contracted, vals[worst] = fc;
      } else {
        for (Eigen::Index i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          vals[i] = f(pts[i]);
          ++evals;
        }
      }
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  const auto idx = std::distance(vals.begin(), it);
  return {pts[idx], *it, evals};
}

}  // namespace qbell::detail

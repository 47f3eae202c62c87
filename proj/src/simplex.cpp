// Copyright 2026 The poitg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "poitg/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace poitg {

namespace {
double guarded(const std::function<double(const Eigen::VectorXd&)>& f,
               const Eigen::VectorXd& x, int& evals) {
  ++evals;
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}
}  // namespace

SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const SimplexOptions& opts) {
  const int d = static_cast<int>(x0.size());
  const double rho = 1.0, chi = 2.0, gamma = 0.5, sigma = 0.5;

  int evals = 0;
  std::vector<Eigen::VectorXd> v(d + 1, x0);
  std::vector<double> fv(d + 1);
  for (int i = 1; i <= d; ++i) v[i](i - 1) += opts.init_step;
  for (int i = 0; i <= d; ++i) fv[i] = guarded(f, v[i], evals);

  std::vector<int> order(d + 1);
  SimplexResult res;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[d], second_worst = order[d - 1];

    double diameter = 0.0;
    for (int i = 1; i <= d; ++i) {
      diameter = std::max(diameter, (v[order[i]] - v[best]).lpNorm<Eigen::Infinity>());
    }
    const double spread = fv[worst] - fv[best];
    if (diameter < opts.tol && spread < opts.tol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (int i = 0; i <= d; ++i) {
      if (i != worst) centroid += v[i];
    }
    centroid /= static_cast<double>(d);

    const Eigen::VectorXd xr = centroid + rho * (centroid - v[worst]);
    const double fr = guarded(f, xr, evals);
    if (fr < fv[best]) {
      const Eigen::VectorXd xe = centroid + chi * (xr - centroid);
      const double fe = guarded(f, xe, evals);
      if (fe < fr) {
        v[worst] = xe;
        fv[worst] = fe;
      } else {
        v[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      v[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      Eigen::VectorXd xc;
      if (outside) {
        xc = centroid + gamma * (xr - centroid);
      } else {
        xc = centroid - gamma * (centroid - v[worst]);
      }
      const double fc = guarded(f, xc, evals);
      if (fc < std::min(fr, fv[worst])) {
        v[worst] = xc;
        fv[worst] = fc;
      } else {
        for (int i = 0; i <= d; ++i) {
          if (i == best) continue;
          v[i] = v[best] + sigma * (v[i] - v[best]);
          fv[i] = guarded(f, v[i], evals);
        }
      }
    }
  }

  const auto it = std::min_element(fv.begin(), fv.end());
  res.x = v[static_cast<std::size_t>(it - fv.begin())];
  res.fmin = *it;
  res.iterations = evals;
  return res;
}

SimplexResult nelder_mead_restarted(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const SimplexOptions& opts, int rounds) {
  SimplexResult best = nelder_mead(f, x0, opts);
  int evals = best.iterations;
  for (int r = 1; r < rounds; ++r) {
    SimplexOptions o = opts;
    o.init_step = opts.init_step * 0.25;
    SimplexResult next = nelder_mead(f, best.x, o);
    evals += next.iterations;
    const bool improved = next.fmin < best.fmin - opts.tol;
    if (next.fmin < best.fmin) {
      next.iterations = evals;
      best = next;
    }
    if (!improved) break;
  }
  best.iterations = evals;
  return best;
}

}  // namespace poitg

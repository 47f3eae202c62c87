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

#ifndef POITG_SIMPLEX_HPP
#define POITG_SIMPLEX_HPP

#include <Eigen/Core>
#include <functional>

namespace poitg {

struct SimplexOptions {
  double tol = 1e-8;       // converged when diameter and f-spread both < tol
  int max_iter = 2000;     // per run
  double init_step = 0.25; // initial simplex edge along each coordinate
};

struct SimplexResult {
  Eigen::VectorXd x;
  double fmin = 0.0;
  bool converged = false;
  int iterations = 0;  // function evaluations spent
};

/// Derivative-free Nelder-Mead minimization of f over R^d, started at x0.
/// Standard reflection/expansion/contraction/shrink moves; non-finite f
/// values are treated as +inf, so the search simply backs away from them.
/// The returned point is the best vertex ever evaluated (never worse than
/// x0). Deterministic.
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const SimplexOptions& opts);

/// nelder_mead re-run from its own optimum with a fresh simplex until the
/// improvement between rounds drops below tol (at most `rounds` rounds).
SimplexResult nelder_mead_restarted(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const SimplexOptions& opts, int rounds = 3);

}  // namespace poitg

#endif  // POITG_SIMPLEX_HPP

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

#ifndef POITG_EM_HPP
#define POITG_EM_HPP

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "poitg/estimate.hpp"
#include "poitg/params.hpp"

namespace poitg {

// EM on the latent representation Y = (1-Z) X1 + Z X2 with Z ~ Bernoulli(alpha)
// and X1, X2 the Poisson-geometric convolutions with ratios q and q^2. Each
// sweep runs E-step responsibilities, the closed-form alpha update (their
// mean), and a 2-parameter maximization over (lambda, q) at the new alpha.

/// Posterior P(Z_i = 1 | y_i), one entry per observation, computed in log
/// space. The denominator is the mixture mass itself.
Eigen::VectorXd e_step(const Params& p, const CountData& data);

/// Mean of the responsibilities; the maximizer of the latent Bernoulli part.
double update_alpha(const Eigen::VectorXd& responsibilities);

/// argmax over (lambda, q) of the observed-data log-likelihood with alpha
/// held fixed, searched in (log lambda, logit q) space from the warm start;
/// never returns a point worse than the warm start (beyond 1e-9).
std::pair<double, double> m_step(const CountData& data, double alpha,
                                 double lambda_init, double q_init);

struct EmIterate {
  long k = 0;
  double lambda = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  double loglik = 0.0;
};

struct EmState {
  Params params;
  Eigen::VectorXd responsibilities;
  double loglik = 0.0;
  long k = 0;
};

struct EmTrace {
  std::vector<EmIterate> iterates;  // one row per completed sweep
  EmState final_state;
};

struct EmOptions {
  double alpha0 = 0.5;
  double eps = 1e-4;     // simultaneous |delta| threshold on all three parameters
  long max_iter = 500;
  double ci_level = 0.95;
  std::optional<double> lambda0;  // default max(floor, ybar/2)
  double q0 = 0.5;
};

struct EmFit {
  FitResult result;
  EmTrace trace;
};

/// Iterates until |d lambda|, |d q| and |d alpha| all drop below eps (or
/// max_iter, reported as converged = false). The observed-data log-likelihood
/// is non-decreasing along the trace. Covariance and intervals at the
/// terminus come from the same machinery as fit_mle.
EmFit fit_em(const CountData& data, const EmOptions& opts = {});

}  // namespace poitg

#endif  // POITG_EM_HPP

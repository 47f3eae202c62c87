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

#ifndef POITG_ESTIMATE_HPP
#define POITG_ESTIMATE_HPP

#include <Eigen/Core>
#include <array>
#include <limits>
#include <optional>

#include "poitg/params.hpp"

namespace poitg {

/// Per-observation quantities entering the score: u_{ij} and v_{ij} (stored
/// on the log scale; both are positive) and the exact powers
/// q_{jk} = (1-q^j)/q^k for j in {1,2}, k in {0..3}. The mixture mass of
/// observation i is (1-alpha) q_{10} v_{i1} + alpha q_{20} v_{i2}.
struct ScoreTerms {
  Eigen::ArrayX2d log_u;
  Eigen::ArrayX2d log_v;
  Eigen::Matrix<double, 2, 4> qpow;
};

ScoreTerms score_terms(const Params& p, const CountData& data);

/// sum_i log pmf(y_i; p). Finite for every valid (p, data).
double log_likelihood(const Params& p, const CountData& data);

/// Gradient of log_likelihood in (lambda, q, alpha). At alpha = 0 the third
/// component is the one-sided derivative and alpha_boundary is set.
struct ScoreResult {
  Eigen::Vector3d value;
  bool alpha_boundary = false;
};
ScoreResult score(const Params& p, const CountData& data);

/// Observed information: negative Hessian of the log-likelihood at p,
/// obtained by central finite differences of the analytic score with step
/// max(1e-5, 1e-4 |theta_j|) per coordinate, then symmetrized. Requires p
/// far enough inside the domain for every perturbed point to be valid.
Eigen::Matrix3d observed_information(const Params& p, const CountData& data);

enum class FitMethod { kMle, kEm };

struct ParamInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool clipped_lower = false;
  bool clipped_upper = false;
};

struct FitResult {
  Params params;
  double loglik = 0.0;
  // NaN-filled when no valid information was available
  Eigen::Matrix3d covariance =
      Eigen::Matrix3d::Constant(std::numeric_limits<double>::quiet_NaN());
  double ci_level = 0.95;
  std::array<ParamInterval, 3> ci{};  // lambda, q, alpha
  bool ci_valid = false;
  bool converged = false;
  bool boundary = false;  // an estimate pinned at (or numerically on) a bound
  bool information_pd = false;
  long iterations = 0;
  FitMethod method = FitMethod::kMle;
};

struct FitOptions {
  std::optional<Params> init;
  long max_iter = 2000;
  double tol = 1e-8;
  bool multistart = false;
  double ci_level = 0.95;
};

/// Maximum likelihood by Nelder-Mead in the unconstrained reparameterization
/// (log lambda, logit q, logit alpha). Default start is
/// (max(floor, ybar/2), 0.5, 0.5); with multistart, the best of the
/// 27-point grid {0.25 ybar, 0.5 ybar, ybar} x {0.2, 0.5, 0.8} x
/// {0.25, 0.5, 0.75} (ties broken by grid order). Needs n >= 3. Covariance
/// and Wald intervals are attached whenever the optimum is interior and the
/// observed information is positive definite; boundary hits are flagged.
FitResult fit_mle(const CountData& data, const FitOptions& opts = {});

/// theta_j +/- z_{(1+level)/2} sqrt(cov_jj), clipped to the parameter
/// domains (0,inf), (0,1), [0,1), with the clipping recorded. Throws if the
/// fit carries no positive-definite information (a profile-likelihood
/// fallback would be needed; not provided here).
std::array<ParamInterval, 3> confidence_intervals(const FitResult& fit, double level);

/// Inverse standard normal cdf (used for the Wald multiplier; e.g.
/// 0.975 -> 1.959964).
double normal_quantile(double prob);

/// Fill in boundary flag, covariance, and Wald intervals for a finished fit
/// (shared by the MLE and EM paths). Leaves ci_valid false when the optimum
/// sits too close to a bound for the finite-difference steps or when the
/// information is not positive definite.
void attach_inference(FitResult& fit, const CountData& data);

/// Building blocks for the alpha = 0 special case, exposed for testing:
/// log-likelihood and analytic score of the plain Poisson-geometric model.
double poig_log_likelihood(double lambda, double q, const CountData& data);
Eigen::Vector2d poig_score(double lambda, double q, const CountData& data);

}  // namespace poitg

#endif  // POITG_ESTIMATE_HPP

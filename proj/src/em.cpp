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

#include "poitg/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "poitg/dist.hpp"
#include "poitg/simplex.hpp"
#include "poitg/special.hpp"

namespace poitg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// responsibility alpha w2 / ((1-alpha) w1 + alpha w2) for a single value
double responsibility(long y, const Params& p) {
  if (p.alpha() == 0.0) return 0.0;
  const double lw1 = poig_log_pmf(y, p.lambda(), p.q());
  const double lw2 = poig_log_pmf(y, p.lambda(), p.q_star());
  const double num = std::log(p.alpha()) + lw2;
  const double den = log_sum_exp(std::log1p(-p.alpha()) + lw1, num);
  return std::exp(num - den);
}
}  // namespace

Eigen::VectorXd e_step(const Params& p, const CountData& data) {
  std::map<long, double> by_value;
  for (const auto& [y, c] : data.histogram()) {
    by_value[y] = responsibility(y, p);
  }
  const auto counts = data.counts();
  Eigen::VectorXd resp(data.n());
  for (long i = 0; i < data.n(); ++i) resp[i] = by_value[counts[i]];
  return resp;
}

double update_alpha(const Eigen::VectorXd& responsibilities) {
  if (responsibilities.size() == 0) {
    throw std::domain_error("update_alpha: empty responsibilities");
  }
  return responsibilities.mean();
}

std::pair<double, double> m_step(const CountData& data, double alpha,
                                 double lambda_init, double q_init) {
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("m_step: alpha must lie in [0, 1)");
  }
  const double floor = Params::kDefaultLambdaFloor;
  const auto objective = [&](const Eigen::VectorXd& x) -> double {
    if (!(x.array().abs() < 700.0).all()) return kInf;
    const double lambda = std::max(std::exp(x[0]), floor);
    const double q = std::clamp(sigmoid(x[1]), 1e-12, 1.0 - 1e-12);
    return -log_likelihood(Params(lambda, q, alpha, floor), data);
  };

  Eigen::VectorXd x0(2);
  x0[0] = std::log(std::max(lambda_init, floor));
  x0[1] = std::log(q_init) - std::log1p(-q_init);

  SimplexOptions opts;
  opts.tol = 1e-9;  // tighter than the outer stopping rule
  opts.max_iter = 4000;
  const SimplexResult r = nelder_mead_restarted(objective, x0, opts);
  if (!std::isfinite(r.fmin)) {
    throw std::runtime_error(
        "m_step: optimizer failed; last feasible iterate lambda=" +
        std::to_string(lambda_init) + " q=" + std::to_string(q_init));
  }
  const double lambda = std::max(std::exp(r.x[0]), floor);
  const double q = std::clamp(sigmoid(r.x[1]), 1e-12, 1.0 - 1e-12);
  return {lambda, q};
}

EmFit fit_em(const CountData& data, const EmOptions& opts) {
  if (data.n() < 3) throw std::domain_error("fit_em: need n >= 3 observations");
  if (!(opts.eps > 0.0)) throw std::domain_error("fit_em: eps must be > 0");
  const double floor = Params::kDefaultLambdaFloor;

  double lambda = opts.lambda0.value_or(std::max(0.5 * data.mean(), floor));
  double q = opts.q0;
  double alpha = opts.alpha0;

  EmTrace trace{
      {}, EmState{Params(lambda, q, alpha, floor), Eigen::VectorXd(), 0.0, 0}};
  bool converged = false;
  long k = 0;
  while (k < opts.max_iter) {
    ++k;
    const Params current(lambda, q, alpha, floor);
    const Eigen::VectorXd resp = e_step(current, data);
    const double alpha_next = update_alpha(resp);
    const auto [lambda_next, q_next] = m_step(data, alpha_next, lambda, q);

    const Params next(lambda_next, q_next, alpha_next, floor);
    trace.iterates.push_back(
        {k, lambda_next, q_next, alpha_next, log_likelihood(next, data)});

    const bool done = std::abs(lambda_next - lambda) < opts.eps &&
                      std::abs(q_next - q) < opts.eps &&
                      std::abs(alpha_next - alpha) < opts.eps;
    lambda = lambda_next;
    q = q_next;
    alpha = alpha_next;
    if (done) {
      converged = true;
      break;
    }
  }

  const Params terminal(lambda, q, alpha, floor);
  FitResult fit{terminal};
  fit.loglik = log_likelihood(terminal, data);
  fit.converged = converged;
  fit.iterations = k;
  fit.method = FitMethod::kEm;
  fit.ci_level = opts.ci_level;
  attach_inference(fit, data);

  trace.final_state = EmState{terminal, e_step(terminal, data), fit.loglik, k};
  return EmFit{fit, std::move(trace)};
}

}  // namespace poitg

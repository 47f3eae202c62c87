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

#include "poitg/estimate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "poitg/dist.hpp"
#include "poitg/simplex.hpp"
#include "poitg/special.hpp"

namespace poitg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// distance from a domain bound below which an estimate counts as pinned
constexpr double kBoundaryTol = 1e-7;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p) - std::log1p(-p); }

double clamp_open_unit(double v) {
  return std::clamp(v, 1e-12, 1.0 - 1e-12);
}

Params untransform(const Eigen::VectorXd& x, double floor) {
  const double lambda = std::max(std::exp(x[0]), floor);
  const double q = clamp_open_unit(sigmoid(x[1]));
  double a = sigmoid(x[2]);
  a = std::min(a, 1.0 - 1e-12);  // alpha = 0 itself is admissible
  return Params(lambda, q, a, floor);
}

Eigen::VectorXd transform(const Params& p) {
  Eigen::VectorXd x(3);
  x[0] = std::log(p.lambda());
  x[1] = logit(p.q());
  x[2] = logit(std::max(p.alpha(), 1e-12));
  return x;
}

// per-distinct-value contributions to the score, shared by score() and
// score_terms()
struct ValueTerms {
  double log_w1, log_w2, log_p;  // component masses and mixture mass
  double uw1, uw2;               // u_j / w_j ratios
};

ValueTerms value_terms(long y, const Params& p) {
  const double lambda = p.lambda(), q = p.q(), alpha = p.alpha();
  ValueTerms t;
  t.log_w1 = poig_log_pmf(y, lambda, q);
  t.log_w2 = poig_log_pmf(y, lambda, p.q_star());
  t.log_p = (alpha == 0.0)
                ? t.log_w1
                : log_sum_exp(std::log1p(-alpha) + t.log_w1,
                              std::log(alpha) + t.log_w2);
  const double lgy = std::lgamma(static_cast<double>(y) + 1.0);
  for (int j = 1; j <= 2; ++j) {
    const double qj = std::pow(q, j);
    const double log_u = -lambda - j * std::log(q) +
                         static_cast<double>(y) * std::log(lambda) +
                         std::log1p(-qj) - lgy;
    const double uw = std::exp(log_u - (j == 1 ? t.log_w1 : t.log_w2));
    (j == 1 ? t.uw1 : t.uw2) = uw;
  }
  return t;
}

}  // namespace

double log_likelihood(const Params& p, const CountData& data) {
  const Eigen::VectorXd table = log_pmf_table(p, data.max_value());
  double ll = 0.0;
  for (const auto& [y, c] : data.histogram()) {
    ll += static_cast<double>(c) * table[y];
  }
  return ll;
}

ScoreResult score(const Params& p, const CountData& data) {
  const double lambda = p.lambda(), q = p.q(), alpha = p.alpha();
  const double q11 = (1.0 - q) / q;
  const double q22 = (1.0 - q * q) / (q * q);

  ScoreResult res;
  res.alpha_boundary = (alpha == 0.0);
  Eigen::Vector3d s = Eigen::Vector3d::Zero();
  for (const auto& [y, c] : data.histogram()) {
    const ValueTerms t = value_terms(y, p);
    const double a1 = (alpha == 0.0)
                          ? 1.0
                          : std::exp(std::log1p(-alpha) + t.log_w1 - t.log_p);
    const double a2 =
        (alpha == 0.0) ? 0.0 : std::exp(std::log(alpha) + t.log_w2 - t.log_p);
    const double yd = static_cast<double>(y), cd = static_cast<double>(c);

    s[0] += cd * (a1 * (q11 - t.uw1) + a2 * (q22 - t.uw2));
    const double g1 =
        yd / q - 1.0 / (1.0 - q) - lambda / (q * q) + (lambda / q) * t.uw1;
    const double g2 = 2.0 * (yd / q - q / (1.0 - q * q) - lambda / (q * q * q)) +
                      (2.0 * lambda / q) * t.uw2;
    s[1] += cd * (a1 * g1 + a2 * g2);
    s[2] += cd * (std::exp(t.log_w2 - t.log_p) - std::exp(t.log_w1 - t.log_p));
  }
  res.value = s;
  return res;
}

ScoreTerms score_terms(const Params& p, const CountData& data) {
  const double lambda = p.lambda(), q = p.q();
  ScoreTerms terms;
  const long n = data.n();
  terms.log_u.resize(n, 2);
  terms.log_v.resize(n, 2);
  for (int j = 1; j <= 2; ++j) {
    const double qj = std::pow(q, j);
    for (int k = 0; k <= 3; ++k) {
      terms.qpow(j - 1, k) = (1.0 - qj) / std::pow(q, k);
    }
  }
  const auto counts = data.counts();
  for (long i = 0; i < n; ++i) {
    const long y = counts[i];
    const double lgy = std::lgamma(static_cast<double>(y) + 1.0);
    for (int j = 1; j <= 2; ++j) {
      const double qj = std::pow(q, j);
      // u_ij = e^{-lambda} q^{j(y-1)} (lambda/q^j)^y (1-q^j) / y!
      terms.log_u(i, j - 1) = -lambda - j * std::log(q) +
                              static_cast<double>(y) * std::log(lambda) +
                              std::log1p(-qj) - lgy;
      // v_ij = w_ij / (1-q^j), the component mass without its (1-q^j) factor
      terms.log_v(i, j - 1) =
          poig_log_pmf(y, lambda, qj) - std::log1p(-qj);
    }
  }
  return terms;
}

Eigen::Matrix3d observed_information(const Params& p, const CountData& data) {
  const Eigen::Vector3d theta(p.lambda(), p.q(), p.alpha());
  Eigen::Matrix3d grad_of_score;
  for (int j = 0; j < 3; ++j) {
    const double h = std::max(1e-5, 1e-4 * std::abs(theta[j]));
    Eigen::Vector3d tp = theta, tm = theta;
    tp[j] += h;
    tm[j] -= h;
    if (tm[0] < p.lambda_floor() || tm[1] <= 0.0 || tp[1] >= 1.0 ||
        tm[2] < 0.0 || tp[2] >= 1.0) {
      throw std::domain_error(
          "observed_information: p must be interior (step " +
          std::to_string(h) + " leaves the domain)");
    }
    const Params pp(tp[0], tp[1], tp[2], p.lambda_floor());
    const Params pm(tm[0], tm[1], tm[2], p.lambda_floor());
    grad_of_score.col(j) =
        (score(pp, data).value - score(pm, data).value) / (2.0 * h);
  }
  return -0.5 * (grad_of_score + grad_of_score.transpose());
}

double normal_quantile(double prob) {
  if (!(prob > 0.0) || !(prob < 1.0)) {
    throw std::domain_error("normal_quantile: prob must lie in (0, 1)");
  }
  // Acklam's rational approximation, then one Halley step against erfc
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double z;
  if (prob < plow) {
    const double u = std::sqrt(-2.0 * std::log(prob));
    z = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (prob <= 1.0 - plow) {
    const double u = prob - 0.5, r = u * u;
    z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log1p(-prob));
    z = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  const double e = 0.5 * std::erfc(-z / std::sqrt(2.0)) - prob;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(z * z / 2.0);
  return z - u / (1.0 + z * u / 2.0);
}

std::array<ParamInterval, 3> confidence_intervals(const FitResult& fit,
                                                  double level) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw std::domain_error("confidence_intervals: level must lie in (0, 1)");
  }
  if (!fit.information_pd) {
    throw std::runtime_error(
        "confidence_intervals: observed information is not positive definite; "
        "a profile-likelihood fallback would be needed (not provided)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  const Eigen::Vector3d theta(fit.params.lambda(), fit.params.q(),
                              fit.params.alpha());
  const Eigen::Vector3d domain_lo(0.0, 0.0, 0.0);
  const Eigen::Vector3d domain_hi(kInf, 1.0, 1.0);

  std::array<ParamInterval, 3> out;
  for (int j = 0; j < 3; ++j) {
    const double half = z * std::sqrt(fit.covariance(j, j));
    ParamInterval iv;
    iv.lower = theta[j] - half;
    iv.upper = theta[j] + half;
    if (iv.lower < domain_lo[j]) {
      iv.lower = domain_lo[j];
      iv.clipped_lower = true;
    }
    if (iv.upper > domain_hi[j]) {
      iv.upper = domain_hi[j];
      iv.clipped_upper = true;
    }
    out[j] = iv;
  }
  return out;
}

void attach_inference(FitResult& fit, const CountData& data) {
  const Params& p = fit.params;
  fit.boundary = p.lambda() <= p.lambda_floor() * (1.0 + 1e-9) ||
                 p.q() < kBoundaryTol || p.q() > 1.0 - kBoundaryTol ||
                 p.alpha() < kBoundaryTol || p.alpha() > 1.0 - kBoundaryTol;

  const double h_l = std::max(1e-5, 1e-4 * p.lambda());
  const double h_q = std::max(1e-5, 1e-4 * p.q());
  const double h_a = std::max(1e-5, 1e-4 * p.alpha());
  const bool fd_interior = p.lambda() - h_l >= p.lambda_floor() &&
                           p.q() - h_q > 0.0 && p.q() + h_q < 1.0 &&
                           p.alpha() - h_a > 0.0 && p.alpha() + h_a < 1.0;
  if (!fd_interior) return;

  const Eigen::Matrix3d info = observed_information(p, data);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(info);
  fit.information_pd = (es.eigenvalues().array() > 0.0).all();
  if (!fit.information_pd) return;

  fit.covariance = info.inverse();
  fit.ci = confidence_intervals(fit, fit.ci_level);
  fit.ci_valid = true;
}

FitResult fit_mle(const CountData& data, const FitOptions& opts) {
  if (data.n() < 3) {
    throw std::domain_error("fit_mle: need n >= 3 observations");
  }
  const double floor =
      opts.init ? opts.init->lambda_floor() : Params::kDefaultLambdaFloor;

  const auto objective = [&](const Eigen::VectorXd& x) -> double {
    if (!(x.array().abs() < 700.0).all()) return kInf;
    return -log_likelihood(untransform(x, floor), data);
  };

  std::vector<Eigen::VectorXd> starts;
  if (opts.init) {
    starts.push_back(transform(*opts.init));
  } else {
    const double ybar = data.mean();
    if (opts.multistart) {
      for (double f : {0.25, 0.5, 1.0}) {
        for (double q0 : {0.2, 0.5, 0.8}) {
          for (double a0 : {0.25, 0.5, 0.75}) {
            starts.push_back(
                transform(Params(std::max(f * ybar, floor), q0, a0, floor)));
          }
        }
      }
    } else {
      starts.push_back(
          transform(Params(std::max(0.5 * ybar, floor), 0.5, 0.5, floor)));
    }
  }

  SimplexOptions sopts;
  sopts.tol = opts.tol;
  sopts.max_iter = static_cast<int>(opts.max_iter);

  SimplexResult best;
  best.fmin = kInf;
  long total_evals = 0;
  for (const auto& x0 : starts) {
    SimplexResult r = nelder_mead_restarted(objective, x0, sopts);
    total_evals += r.iterations;
    if (r.fmin < best.fmin) best = r;
  }

  FitResult fit{untransform(best.x, floor)};
  fit.loglik = -best.fmin;
  fit.converged = best.converged;
  fit.iterations = total_evals;
  fit.method = FitMethod::kMle;
  fit.ci_level = opts.ci_level;
  attach_inference(fit, data);
  return fit;
}

double poig_log_likelihood(double lambda, double q, const CountData& data) {
  if (!(lambda > 0.0)) {
    throw std::domain_error("poig_log_likelihood: lambda must be > 0");
  }
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("poig_log_likelihood: q must lie in (0, 1)");
  }
  const double n = static_cast<double>(data.n());
  double ll = n * std::log1p(-q) + n * data.mean() * std::log(q) +
              n * lambda * (1.0 - q) / q;
  for (const auto& [y, c] : data.histogram()) {
    ll += static_cast<double>(c) *
          log_regularized_upper_gamma(y + 1, lambda / q);
  }
  return ll;
}

Eigen::Vector2d poig_score(double lambda, double q, const CountData& data) {
  if (!(lambda > 0.0) || !(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("poig_score: invalid parameters");
  }
  const double n = static_cast<double>(data.n());
  const double beta = lambda / q;
  double s1 = n * (1.0 - q) / q;
  double s2 = -n / (1.0 - q) + n * data.mean() / q - n * lambda / (q * q);
  for (const auto& [y, c] : data.histogram()) {
    // alpha_j(y) beta^y = Pois(y; beta) / Q(y+1, beta) / q^j
    const double ratio = std::exp(log_poisson_pmf(y, beta) -
                                  log_regularized_upper_gamma(y + 1, beta));
    s1 -= static_cast<double>(c) * ratio / q;
    s2 += static_cast<double>(c) * lambda * ratio / (q * q);
  }
  return {s1, s2};
}

}  // namespace poitg

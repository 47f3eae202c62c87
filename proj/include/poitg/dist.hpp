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

#ifndef POITG_DIST_HPP
#define POITG_DIST_HPP

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <random>

#include "poitg/params.hpp"

namespace poitg {

// The PoiTG law is the convolution Y = Y1 + Y2 of Y1 ~ Poisson(lambda) with
// an independent transmuted-geometric Y2; for alpha in [0,1) the latter is
// the two-component mixture (1-alpha) Geo(q) + alpha Geo(q^2), so the whole
// law is the same mixture of two Poisson-geometric convolutions with ratios
// q and q^2. Everything below evaluates on the log scale.

/// Transmuted-geometric mass (1-alpha)(1-q)q^y + alpha(1-q^2)q^{2y}.
double tgd_pmf(long y, double q, double alpha);

/// log mass of the Poisson-geometric convolution with rate lambda and
/// ratio q: log(1-q) + y log q - lambda + LSE_{i<=y}[i log(lambda/q) - log i!].
double poig_log_pmf(long y, double lambda, double q);

/// log mass of PoiTG: log-sum of the two PoiG components weighted by
/// log(1-alpha), log(alpha). Finite (> -inf) for every y >= 0.
double log_pmf(long y, const Params& p);

/// exp(log_pmf).
double pmf(long y, const Params& p);

/// Masses for y = 0..y_max in one O(y_max) sweep, carrying the two partial
/// sums of the defining series as running log-scale accumulators.
Eigen::VectorXd pmf_table(const Params& p, long y_max);

/// Log masses for y = 0..y_max, same single sweep as pmf_table. This is the
/// evaluation path for likelihood-type sums, where the per-point form would
/// cost O(y_max^2).
Eigen::VectorXd log_pmf_table(const Params& p, long y_max);

/// P(Y <= y) by the closed form: regularized upper incomplete gamma at
/// (y+1, lambda) minus the two geometric-tail correction terms, each
/// evaluated in log space. Returns 0 for y < 0.
double cdf(long y, const Params& p);

/// Survival P(Y >= y) = 1 - cdf(y-1); equals 1 for y <= 0.
double sf(long y, const Params& p);

/// Hazard rate pmf(y) / sf(y); lies in (0, 1] on the support.
double hazard(long y, const Params& p);

/// Mean residual life E(Y - t | Y >= t). The infinite sum is truncated when
/// a geometric tail envelope (ratio q) certifies the remainder below tol;
/// tol must lie in (0, 1e-3].
double mrl(long t, const Params& p, double tol = 1e-9);

/// Columns evaluated in one shared pass; the pmf column is the pmf_table
/// code path itself, the others agree with the per-point functions to
/// full precision.
struct ReliabilityTable {
  Eigen::VectorXd pmf;
  Eigen::VectorXd cdf;
  Eigen::VectorXd sf;
  Eigen::VectorXd hazard;
};
ReliabilityTable reliability_table(const Params& p, long y_max);

/// Probability generating function E s^Y; requires |q^2 s| < 1.
double pgf(double s, const Params& p);
/// Moment generating function E e^{tY}; requires t < -2 log q.
double mgf(double t, const Params& p);
/// Cumulant generating function log mgf; same domain as mgf.
double cgf(double t, const Params& p);
/// Characteristic function E e^{itY}; defined for all real t.
std::complex<double> cf(double t, const Params& p);

/// Raw moments mu'_1..mu'_4, central moments mu_1..mu_4 (mu_1 = 0 exactly)
/// and the derived shape summaries. Central moments are evaluated both by
/// their closed forms and by the binomial combinations of the raw moments;
/// the two routes are required to agree to 1e-8 relative.
struct MomentSet {
  Eigen::Vector4d raw;
  Eigen::Vector4d central;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  double dispersion_index = 0.0;
  double cv_percent = 0.0;
};
MomentSet moments(const Params& p);

/// n independent draws of Y = Y1 + Y2: Y1 Poisson, Y2 the Bernoulli(alpha)
/// mixture of Geo(q) and Geo(q^2) drawn by inverse transform
/// floor(log U / log q^k). Deterministic given the engine state.
CountData sample(const Params& p, long n, std::mt19937_64& rng);

/// Hypothesis pair for the likelihood-ratio-order check. The constructor
/// enforces the ordering condition lower.lambda <= upper.lambda,
/// upper.q <= lower.q and equal alphas; it is a hypothesis the caller
/// asserts, not a conclusion.
class OrderPair {
 public:
  OrderPair(const Params& upper, const Params& lower);
  const Params& upper() const { return upper_; }
  const Params& lower() const { return lower_; }

 private:
  Params upper_;
  Params lower_;
};

struct LrOrderResult {
  bool holds = false;
  std::optional<long> first_violation;  // smallest x with L(x) > L(x+1) + tol
};

/// Scans x = 0..y_max-1 for violations of log L(x) <= log L(x+1) + tol,
/// L = pmf_upper / pmf_lower.
LrOrderResult lr_order_holds(const OrderPair& pair, long y_max, double tol);

}  // namespace poitg

#endif  // POITG_DIST_HPP

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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "poitg/dist.hpp"
#include "test_util.hpp"

namespace poitg {
namespace {

using test::fd_gradient;

const Params kRef(1.0, 0.5, 0.5);

TEST(LogLikelihood, SingleObservationAnchor) {
  const CountData d({0});
  EXPECT_NEAR(log_likelihood(kRef, d), -1.4700036292457356, 1e-13);
}

TEST(LogLikelihood, AdditiveInCopies) {
  const CountData one({2});
  const CountData five({2, 2, 2, 2, 2});
  EXPECT_NEAR(log_likelihood(kRef, five), 5.0 * log_likelihood(kRef, one), 1e-12);
}

TEST(LogLikelihood, TwoPointAnchor) {
  const CountData d({0, 1});
  EXPECT_NEAR(log_likelihood(kRef, d), -2.639902666041133, 1e-13);
}

TEST(LogLikelihood, PermutationInvariantBitwise) {
  std::mt19937_64 rng(5);
  std::vector<long> ys;
  std::uniform_int_distribution<long> u(0, 12);
  for (int i = 0; i < 500; ++i) ys.push_back(u(rng));
  std::vector<long> shuffled = ys;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_EQ(log_likelihood(kRef, CountData(ys)),
            log_likelihood(kRef, CountData(shuffled)));
}

TEST(Score, MatchesFiniteDifferences) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ul(0.5, 4.0), uq(0.15, 0.85),
      ua(0.05, 0.95);
  const std::vector<Params> truths{Params(2.0, 0.4, 0.3), Params(1.0, 0.6, 0.5),
                                   Params(4.0, 0.3, 0.7)};
  for (const Params& truth : truths) {
    const CountData data = sample(truth, 200, rng);
    for (int rep = 0; rep < 5; ++rep) {
      const Params p(ul(rng), uq(rng), ua(rng));
      const Eigen::Vector3d analytic = score(p, data).value;
      const Eigen::Vector3d fd = fd_gradient(
          [&](const Eigen::Vector3d& t) {
            return log_likelihood(Params(t[0], t[1], t[2]), data);
          },
          Eigen::Vector3d(p.lambda(), p.q(), p.alpha()), 1e-6);
      for (int j = 0; j < 3; ++j) {
        EXPECT_LE(std::abs(analytic[j] - fd[j]), 1e-5 * std::max(1.0, std::abs(fd[j])))
            << "component " << j;
      }
    }
  }
}

TEST(Score, BoundaryAlphaFlaggedAndOneSided) {
  const CountData d({0, 1, 2, 5});
  const Params p(1.2, 0.4, 0.0);
  const ScoreResult r = score(p, d);
  EXPECT_TRUE(r.alpha_boundary);
  // one-sided: sum over observations of (second-component / first-component - 1)
  double expect = 0.0;
  for (long y : {0L, 1L, 2L, 5L}) {
    expect += std::exp(poig_log_pmf(y, 1.2, 0.16) - poig_log_pmf(y, 1.2, 0.4)) - 1.0;
  }
  EXPECT_NEAR(r.value[2], expect, 1e-10);
}

TEST(Score, NearZeroAtInteriorOptimum) {
  std::mt19937_64 rng(13);
  const CountData data = sample(Params(2.0, 0.4, 0.3), 500, rng);
  FitOptions opts;
  const FitResult fit = fit_mle(data, opts);
  if (fit.boundary) GTEST_SKIP() << "draw landed on a boundary optimum";
  const Eigen::Vector3d s = score(fit.params, data).value;
  EXPECT_LT(s.lpNorm<Eigen::Infinity>(), 1e-4);
}

TEST(ScoreTerms, ReconstructsMixtureMass) {
  std::mt19937_64 rng(3);
  const CountData data = sample(kRef, 100, rng);
  const ScoreTerms terms = score_terms(kRef, data);
  // q_jk spot checks
  EXPECT_DOUBLE_EQ(terms.qpow(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(terms.qpow(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(terms.qpow(1, 0), 0.75);
  EXPECT_DOUBLE_EQ(terms.qpow(1, 3), 0.75 / 0.125);
  for (long i = 0; i < data.n(); ++i) {
    EXPECT_TRUE(std::isfinite(terms.log_v(i, 0)));  // v > 0
    EXPECT_TRUE(std::isfinite(terms.log_u(i, 0)));  // u > 0
    const double mass = 0.5 * terms.qpow(0, 0) * std::exp(terms.log_v(i, 0)) +
                        0.5 * terms.qpow(1, 0) * std::exp(terms.log_v(i, 1));
    const double want = pmf(data.counts()[i], kRef);
    EXPECT_NEAR(mass, want, 1e-13 * want);
  }
}

TEST(ObservedInformation, DoublingDataDoublesInformation) {
  std::mt19937_64 rng(23);
  const CountData data = sample(kRef, 300, rng);
  std::vector<long> twice(data.counts().begin(), data.counts().end());
  twice.insert(twice.end(), data.counts().begin(), data.counts().end());
  const Eigen::Matrix3d i1 = observed_information(kRef, data);
  const Eigen::Matrix3d i2 = observed_information(kRef, CountData(twice));
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      EXPECT_NEAR(i2(r, c), 2.0 * i1(r, c), 1e-9 * std::abs(i1(r, c)) + 1e-12);
    }
  }
}

TEST(ObservedInformation, MatchesDirectHessianOfLogLikelihood) {
  std::mt19937_64 rng(29);
  const CountData data = sample(Params(2.0, 0.4, 0.3), 400, rng);
  const Params p(1.8, 0.45, 0.4);
  const Eigen::Matrix3d info = observed_information(p, data);

  // independent route: second differences of the log-likelihood itself
  const auto ll = [&](const Eigen::Vector3d& t) {
    return log_likelihood(Params(t[0], t[1], t[2]), data);
  };
  const Eigen::Vector3d theta(p.lambda(), p.q(), p.alpha());
  Eigen::Matrix3d direct;
  const double h = 5e-4;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      Eigen::Vector3d tpp = theta, tpm = theta, tmp = theta, tmm = theta;
      tpp[r] += h; tpp[c] += h;
      tpm[r] += h; tpm[c] -= h;
      tmp[r] -= h; tmp[c] += h;
      tmm[r] -= h; tmm[c] -= h;
      direct(r, c) = -(ll(tpp) - ll(tpm) - ll(tmp) + ll(tmm)) / (4.0 * h * h);
    }
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      EXPECT_LE(std::abs(info(r, c) - direct(r, c)),
                1e-3 * std::max(1.0, std::abs(direct(r, c))))
          << r << "," << c;
    }
  }
}

TEST(ObservedInformation, SymmetricByConstruction) {
  std::mt19937_64 rng(31);
  const CountData data = sample(kRef, 200, rng);
  const Eigen::Matrix3d info = observed_information(kRef, data);
  EXPECT_EQ(info(0, 1), info(1, 0));
  EXPECT_EQ(info(0, 2), info(2, 0));
  EXPECT_EQ(info(1, 2), info(2, 1));
}

TEST(ObservedInformation, RequiresInteriorPoint) {
  const CountData d({0, 1, 2});
  EXPECT_THROW(observed_information(Params(1.0, 0.5, 1e-7), d), std::domain_error);
  EXPECT_THROW(observed_information(Params(1e-9, 0.5, 0.5), d), std::domain_error);
}

TEST(NormalQuantile, StandardValues) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-12);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-9);
  EXPECT_THROW(normal_quantile(0.0), std::domain_error);
  EXPECT_THROW(normal_quantile(1.0), std::domain_error);
}

TEST(ConfidenceIntervals, WaldArithmetic) {
  FitResult fit{Params(2.0, 0.4, 0.3)};
  fit.covariance = Eigen::Matrix3d::Zero();
  fit.covariance(0, 0) = 0.04;
  fit.covariance(1, 1) = 0.0025;
  fit.covariance(2, 2) = 0.01;
  fit.information_pd = true;
  const auto ci = confidence_intervals(fit, 0.95);
  EXPECT_NEAR(ci[0].lower, 1.608, 5e-5);
  EXPECT_NEAR(ci[0].upper, 2.392, 5e-5);
  EXPECT_FALSE(ci[0].clipped_lower);
  EXPECT_NEAR(ci[1].lower, 0.4 - 1.959963984540054 * 0.05, 1e-9);
}

TEST(ConfidenceIntervals, ClipsToDomains) {
  FitResult fit{Params(0.01, 0.05, 0.9)};
  fit.covariance = Eigen::Matrix3d::Identity() * 0.25;
  fit.information_pd = true;
  const auto ci = confidence_intervals(fit, 0.95);
  EXPECT_DOUBLE_EQ(ci[0].lower, 0.0);
  EXPECT_TRUE(ci[0].clipped_lower);
  EXPECT_DOUBLE_EQ(ci[1].lower, 0.0);
  EXPECT_TRUE(ci[1].clipped_lower);
  EXPECT_DOUBLE_EQ(ci[2].upper, 1.0);
  EXPECT_TRUE(ci[2].clipped_upper);
}

TEST(ConfidenceIntervals, RefusesWithoutInformation) {
  FitResult fit{Params(2.0, 0.4, 0.3)};
  fit.information_pd = false;
  try {
    confidence_intervals(fit, 0.95);
    FAIL() << "expected runtime_error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("profile-likelihood"), std::string::npos);
  }
  EXPECT_THROW(confidence_intervals(fit, 1.5), std::domain_error);
}

TEST(FitMle, NeedsAtLeastThreeObservations) {
  EXPECT_THROW(fit_mle(CountData({1, 2})), std::domain_error);
}

TEST(FitMle, NeverBelowInitialPoint) {
  std::mt19937_64 rng(41);
  const CountData data = sample(Params(2.0, 0.4, 0.3), 400, rng);
  FitOptions opts;
  opts.init = Params(1.0, 0.3, 0.2);
  const FitResult fit = fit_mle(data, opts);
  EXPECT_GE(fit.loglik, log_likelihood(*opts.init, data) - 1e-9);
}

TEST(FitMle, AllZerosPinsToLowerBoundaries) {
  const CountData zeros(std::vector<long>(50, 0));
  const FitResult fit = fit_mle(zeros);
  EXPECT_TRUE(fit.boundary || !fit.converged);
  EXPECT_LT(fit.params.lambda(), 1e-4);
  EXPECT_LT(fit.params.q(), 1e-3);
  EXPECT_FALSE(fit.ci_valid);
}

TEST(FitMle, PermutationInvariantBitwise) {
  std::mt19937_64 rng(43);
  const CountData data = sample(Params(2.0, 0.4, 0.3), 500, rng);
  std::vector<long> shuffled(data.counts().begin(), data.counts().end());
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const FitResult a = fit_mle(data);
  const FitResult b = fit_mle(CountData(shuffled));
  EXPECT_EQ(a.loglik, b.loglik);
  EXPECT_EQ(a.params.lambda(), b.params.lambda());
  EXPECT_EQ(a.params.q(), b.params.q());
  EXPECT_EQ(a.params.alpha(), b.params.alpha());
}

TEST(FitMle, MultistartNotWorseThanDefault) {
  std::mt19937_64 rng(47);
  const CountData data = sample(Params(2.0, 0.4, 0.3), 300, rng);
  const FitResult single = fit_mle(data);
  FitOptions opts;
  opts.multistart = true;
  const FitResult multi = fit_mle(data, opts);
  EXPECT_GE(multi.loglik, single.loglik - 1e-6);
}

TEST(FitMle, RecoversTruthInTypicalReplicate) {
  std::mt19937_64 rng(101);
  const CountData data = sample(Params(2.0, 0.4, 0.3), 2000, rng);
  const FitResult fit = fit_mle(data);
  if (!fit.ci_valid) GTEST_SKIP() << "replicate landed on a boundary";
  EXPECT_TRUE(fit.ci[0].lower <= 2.0 && 2.0 <= fit.ci[0].upper);
  EXPECT_TRUE(fit.ci[1].lower <= 0.4 && 0.4 <= fit.ci[1].upper);
  EXPECT_TRUE(fit.ci[2].lower <= 0.3 && 0.3 <= fit.ci[2].upper);
}

TEST(PoigBlocks, LogLikelihoodMatchesMixtureAtAlphaZero) {
  std::mt19937_64 rng(53);
  const CountData data = sample(Params(1.5, 0.45, 0.0), 300, rng);
  const double direct = poig_log_likelihood(1.5, 0.45, data);
  const double mixture = log_likelihood(Params(1.5, 0.45, 0.0), data);
  EXPECT_NEAR(direct, mixture, 1e-10 * std::abs(direct));
}

TEST(PoigBlocks, ScoreMatchesFiniteDifferences) {
  std::mt19937_64 rng(59);
  const CountData data = sample(Params(1.5, 0.45, 0.0), 250, rng);
  for (const auto& [lambda, q] : {std::pair{1.5, 0.45}, {0.7, 0.3}, {3.0, 0.7}}) {
    const Eigen::Vector2d s = poig_score(lambda, q, data);
    const double h = 1e-6;
    const double fd_l = (poig_log_likelihood(lambda + h, q, data) -
                         poig_log_likelihood(lambda - h, q, data)) /
                        (2.0 * h);
    const double fd_q = (poig_log_likelihood(lambda, q + h, data) -
                         poig_log_likelihood(lambda, q - h, data)) /
                        (2.0 * h);
    EXPECT_LE(std::abs(s[0] - fd_l), 1e-6 * std::max(1.0, std::abs(fd_l)));
    EXPECT_LE(std::abs(s[1] - fd_q), 1e-6 * std::max(1.0, std::abs(fd_q)));
  }
}

}  // namespace
}  // namespace poitg

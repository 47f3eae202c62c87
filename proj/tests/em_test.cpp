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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "poitg/dist.hpp"
#include "test_util.hpp"

namespace poitg {
namespace {

TEST(EStep, DegenerateWeights) {
  const CountData d({0, 1, 2, 7});
  const Eigen::VectorXd zero = e_step(Params(1.0, 0.5, 0.0), d);
  EXPECT_EQ(zero.minCoeff(), 0.0);
  EXPECT_EQ(zero.maxCoeff(), 0.0);
  const Eigen::VectorXd one = e_step(Params(1.0, 0.5, 1.0 - 1e-12), d);
  EXPECT_GT(one.minCoeff(), 1.0 - 1e-6);
}

TEST(EStep, ZeroCountClosedForm) {
  // both component masses at 0 share e^{-lambda}, so the posterior reduces
  // to alpha(1-q^2) / (alpha(1-q^2) + (1-alpha)(1-q)) = 0.6
  const CountData d({0});
  const Eigen::VectorXd r = e_step(Params(1.0, 0.5, 0.5), d);
  EXPECT_NEAR(r[0], 0.6, 1e-14);
}

TEST(EStep, WithinUnitIntervalAndMixtureConsistent) {
  std::mt19937_64 rng(61);
  const Params p(2.0, 0.4, 0.3);
  const CountData d = sample(p, 300, rng);
  const Eigen::VectorXd r = e_step(p, d);
  ASSERT_EQ(r.size(), d.n());
  for (long i = 0; i < d.n(); ++i) {
    EXPECT_GE(r[i], 0.0);
    EXPECT_LE(r[i], 1.0);
    // responsibility numerator/denominator reproduce the mixture mass
    const long y = d.counts()[i];
    const double num = p.alpha() * std::exp(poig_log_pmf(y, p.lambda(), p.q_star()));
    const double mass = pmf(y, p);
    EXPECT_NEAR(r[i], num / mass, 1e-13);
  }
}

TEST(UpdateAlpha, MeanAndEdges) {
  Eigen::VectorXd r(3);
  r << 0.2, 0.4, 0.6;
  EXPECT_NEAR(update_alpha(r), 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(update_alpha(Eigen::VectorXd::Zero(5)), 0.0);
  EXPECT_DOUBLE_EQ(update_alpha(Eigen::VectorXd::Constant(4, 0.37)), 0.37);
  EXPECT_THROW(update_alpha(Eigen::VectorXd()), std::domain_error);
}

TEST(MStep, ImprovesAndIsStableAtOptimum) {
  std::mt19937_64 rng(67);
  const CountData d = sample(Params(2.0, 0.4, 0.3), 500, rng);
  const double alpha = 0.3;
  const auto [l1, q1] = m_step(d, alpha, d.mean() / 2.0, 0.5);
  const double ll_start = log_likelihood(Params(d.mean() / 2.0, 0.5, alpha), d);
  const double ll_opt = log_likelihood(Params(l1, q1, alpha), d);
  EXPECT_GE(ll_opt, ll_start - 1e-9);

  // re-running from the optimum must not move or degrade
  const auto [l2, q2] = m_step(d, alpha, l1, q1);
  const double ll_again = log_likelihood(Params(l2, q2, alpha), d);
  EXPECT_GE(ll_again, ll_opt - 1e-9);
  EXPECT_NEAR(l2, l1, 1e-5);
  EXPECT_NEAR(q2, q1, 1e-5);
}

TEST(MStep, RecoversPlainConvolutionFit) {
  std::mt19937_64 rng(71);
  const CountData d = sample(Params(2.0, 0.4, 0.0), 2000, rng);
  const auto [lhat, qhat] = m_step(d, 0.0, d.mean() / 2.0, 0.5);
  // the 2-parameter score vanishes at the fitted point
  const Eigen::Vector2d s = poig_score(lhat, qhat, d);
  EXPECT_LT(std::abs(s[0]), 1e-2);
  EXPECT_LT(std::abs(s[1]), 1e-2);
  EXPECT_NEAR(lhat, 2.0, 0.3);
  EXPECT_NEAR(qhat, 0.4, 0.1);
}

TEST(MStep, ValidatesAlpha) {
  const CountData d({0, 1, 2});
  EXPECT_THROW(m_step(d, -0.1, 1.0, 0.5), std::domain_error);
  EXPECT_THROW(m_step(d, 1.0, 1.0, 0.5), std::domain_error);
}

TEST(FitEm, DefaultsFollowTheStatedRecipe) {
  const EmOptions opts;
  EXPECT_DOUBLE_EQ(opts.alpha0, 0.5);
  EXPECT_DOUBLE_EQ(opts.eps, 1e-4);
  EXPECT_EQ(opts.max_iter, 500);
}

TEST(FitEm, TraceIsMonotoneAndTerminates) {
  std::mt19937_64 rng(73);
  const CountData d = sample(Params(2.0, 0.4, 0.3), 800, rng);
  EmOptions opts;
  opts.max_iter = 3000;
  const EmFit em = fit_em(d, opts);
  ASSERT_FALSE(em.trace.iterates.empty());
  for (std::size_t i = 1; i < em.trace.iterates.size(); ++i) {
    EXPECT_GE(em.trace.iterates[i].loglik, em.trace.iterates[i - 1].loglik - 1e-9)
        << "iteration " << i;
  }
  EXPECT_EQ(em.result.method, FitMethod::kEm);
  EXPECT_EQ(em.result.iterations,
            static_cast<long>(em.trace.iterates.back().k));
  EXPECT_EQ(em.trace.final_state.responsibilities.size(), d.n());
  EXPECT_NEAR(em.trace.final_state.loglik, em.result.loglik, 1e-12);
}

TEST(FitEm, ResponsibilityMeanMatchesAlphaUpdate) {
  std::mt19937_64 rng(79);
  const CountData d = sample(Params(1.0, 0.5, 0.5), 400, rng);
  EmOptions opts;
  opts.max_iter = 1;  // a single sweep
  const EmFit em = fit_em(d, opts);
  const Eigen::VectorXd r = e_step(Params(std::max(d.mean() / 2.0, 1e-10), 0.5, 0.5), d);
  EXPECT_NEAR(em.trace.iterates[0].alpha, update_alpha(r), 1e-14);
}

TEST(FitEm, StaysPutWhenStartedAtInteriorOptimum) {
  std::mt19937_64 rng(13);
  const CountData d = sample(Params(2.0, 0.4, 0.3), 1000, rng);
  const FitResult mle = fit_mle(d);
  if (mle.boundary) GTEST_SKIP() << "draw landed on a boundary optimum";
  EmOptions opts;
  opts.lambda0 = mle.params.lambda();
  opts.q0 = mle.params.q();
  opts.alpha0 = mle.params.alpha();
  const EmFit em = fit_em(d, opts);
  EXPECT_TRUE(em.result.converged);
  EXPECT_NEAR(em.result.params.lambda(), mle.params.lambda(), 10.0 * opts.eps);
  EXPECT_NEAR(em.result.params.q(), mle.params.q(), 10.0 * opts.eps);
  EXPECT_NEAR(em.result.params.alpha(), mle.params.alpha(), 10.0 * opts.eps);
}

TEST(FitEm, PureFirstComponentDataDrivesAlphaDown) {
  std::mt19937_64 rng(89);
  const CountData d = sample(Params(2.0, 0.4, 0.0), 2000, rng);
  EmOptions opts;
  opts.max_iter = 3000;
  const EmFit em = fit_em(d, opts);
  EXPECT_LT(em.result.params.alpha(), 0.5);  // pulled toward the boundary
  for (std::size_t i = 1; i < em.trace.iterates.size(); ++i) {
    EXPECT_GE(em.trace.iterates[i].loglik, em.trace.iterates[i - 1].loglik - 1e-9);
  }
}

}  // namespace
}  // namespace poitg

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

#include "poitg/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "poitg/special.hpp"

namespace poitg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Largest Poisson rate for which the regularized partial sums
// sum_{i<=y} e^{-x} x^i / i! are accumulated in linear space (e^{-x} stays
// normal). Larger rates fall back to incremental log-sum accumulation.
constexpr double kLinearRateLimit = 600.0;

void require_nonnegative_y(long y, const char* what) {
  if (y < 0) {
    std::ostringstream os;
    os << what << ": y must be >= 0, got " << y;
    throw std::domain_error(os.str());
  }
}

// Running evaluator for the partial sums of the defining series. For one
// Poisson rate x it tracks r_y = sum_{i<=y} e^{-x} x^i / i! (the regularized
// incomplete-gamma partial sum) and exposes log r_y. advance() moves y -> y+1.
class RegularizedSum {
 public:
  explicit RegularizedSum(double rate)
      : rate_(rate), linear_(rate <= kLinearRateLimit) {
    if (linear_) {
      term_ = std::exp(-rate);
      sum_ = term_;
    } else {
      log_term_ = -rate;
      log_sum_ = -rate;
    }
    y_ = 0;
  }

  void advance() {
    ++y_;
    if (linear_) {
      term_ *= rate_ / static_cast<double>(y_);
      sum_ += term_;
    } else {
      log_term_ += std::log(rate_) - std::log(static_cast<double>(y_));
      log_sum_ = log_add_exp(log_sum_, log_term_);
    }
  }

  double log_sum() const { return linear_ ? std::log(sum_) : log_sum_; }

 private:
  double rate_;
  bool linear_;
  long y_ = 0;
  double term_ = 0.0, sum_ = 0.0;       // linear mode
  double log_term_ = 0.0, log_sum_ = 0.0;  // log mode
};

// log w_k(y) = log(1-q^k) + k y log q + lambda(1-q^k)/q^k + log r_y(lambda/q^k)
// where w_k is the PoiG mass with ratio q^k; all overflow-prone factors stay
// in exponents.
struct ComponentState {
  double log_one_minus_qk;
  double k_log_q;
  double growth;  // lambda (1-q^k)/q^k
  RegularizedSum sum;

  ComponentState(double lambda, double q, int k)
      : log_one_minus_qk(std::log1p(-std::pow(q, k))),
        k_log_q(k * std::log(q)),
        growth(lambda * (1.0 - std::pow(q, k)) / std::pow(q, k)),
        sum(lambda / std::pow(q, k)) {}

  double log_w(long y) const {
    return log_one_minus_qk + static_cast<double>(y) * k_log_q + growth +
           sum.log_sum();
  }
};

double log_mix(double log_w1, double log_w2, double alpha) {
  if (alpha == 0.0) return log_w1;
  return log_sum_exp(std::log1p(-alpha) + log_w1, std::log(alpha) + log_w2);
}

// log of the Poisson upper tail sum_{k>=y} e^{-lambda} lambda^k / k!
double log_poisson_upper_tail(long y, double lambda) {
  const double log_lambda = std::log(lambda);
  double log_term =
      static_cast<double>(y) * log_lambda - lambda - std::lgamma(y + 1.0);
  double acc = log_term;
  for (long k = y + 1;; ++k) {
    log_term += log_lambda - std::log(static_cast<double>(k));
    acc = log_add_exp(acc, log_term);
    if (log_term < acc - 45.0) break;
  }
  return std::min(acc, 0.0);
}

// survival in log space as a sum of non-negative pieces: the Poisson upper
// tail plus the two geometric-tail terms q^{ky} e^{lambda(1-q^k)/q^k} r_{y-1},
// which stays accurate where 1 - cdf(y-1) would cancel to zero.
double log_sf(long y, const Params& p) {
  if (y <= 0) return 0.0;
  const double lambda = p.lambda(), q = p.q(), alpha = p.alpha();
  double acc = log_poisson_upper_tail(y, lambda);
  for (int k = 1; k <= 2; ++k) {
    const double w = (k == 1) ? 1.0 - alpha : alpha;
    if (w == 0.0) continue;
    const double qk = std::pow(q, k);
    const double log_W = static_cast<double>(k * y) * std::log(q) +
                         lambda * (1.0 - qk) / qk +
                         log_regularized_upper_gamma(y, lambda / qk);
    acc = log_sum_exp(acc, std::log(w) + log_W);
  }
  return std::min(acc, 0.0);
}

}  // namespace

double tgd_pmf(long y, double q, double alpha) {
  require_nonnegative_y(y, "tgd_pmf");
  if (!(q > 0.0) || !(q < 1.0)) throw std::domain_error("tgd_pmf: q must lie in (0, 1)");
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("tgd_pmf: alpha must lie in [0, 1)");
  }
  const double yd = static_cast<double>(y);
  return (1.0 - alpha) * (1.0 - q) * std::pow(q, yd) +
         alpha * (1.0 - q * q) * std::pow(q, 2.0 * yd);
}

double poig_log_pmf(long y, double lambda, double q) {
  require_nonnegative_y(y, "poig_log_pmf");
  if (!(lambda > 0.0)) throw std::domain_error("poig_log_pmf: lambda must be > 0");
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("poig_log_pmf: q must lie in (0, 1)");
  }
  const double log_ratio = std::log(lambda) - std::log(q);
  std::vector<double> terms(static_cast<std::size_t>(y) + 1);
  for (long i = 0; i <= y; ++i) {
    terms[static_cast<std::size_t>(i)] =
        static_cast<double>(i) * log_ratio - std::lgamma(i + 1.0);
  }
  return std::log1p(-q) + static_cast<double>(y) * std::log(q) - lambda +
         log_sum_exp(terms);
}

double log_pmf(long y, const Params& p) {
  require_nonnegative_y(y, "log_pmf");
  const double lw1 = poig_log_pmf(y, p.lambda(), p.q());
  if (p.alpha() == 0.0) return lw1;
  const double lw2 = poig_log_pmf(y, p.lambda(), p.q_star());
  return log_mix(lw1, lw2, p.alpha());
}

double pmf(long y, const Params& p) { return std::exp(log_pmf(y, p)); }

Eigen::VectorXd pmf_table(const Params& p, long y_max) {
  require_nonnegative_y(y_max, "pmf_table");
  return reliability_table(p, y_max).pmf;
}

Eigen::VectorXd log_pmf_table(const Params& p, long y_max) {
  require_nonnegative_y(y_max, "log_pmf_table");
  ComponentState c1(p.lambda(), p.q(), 1), c2(p.lambda(), p.q(), 2);
  Eigen::VectorXd out(y_max + 1);
  for (long y = 0;; ++y) {
    out[y] = log_mix(c1.log_w(y), c2.log_w(y), p.alpha());
    if (y == y_max) break;
    c1.sum.advance();
    c2.sum.advance();
  }
  return out;
}

ReliabilityTable reliability_table(const Params& p, long y_max) {
  require_nonnegative_y(y_max, "reliability_table");
  const double lambda = p.lambda(), q = p.q(), alpha = p.alpha();

  ReliabilityTable t;
  t.pmf.resize(y_max + 1);
  t.cdf.resize(y_max + 1);
  t.sf.resize(y_max + 1);
  t.hazard.resize(y_max + 1);

  ComponentState c1(lambda, q, 1), c2(lambda, q, 2);
  RegularizedSum pois(lambda);  // Poisson(lambda) cdf partial sums

  // the survival column needs the partial sums one step behind the pmf/cdf
  // ones; carried across iterations
  double lagged_log_r1 = 0.0, lagged_log_r2 = 0.0;
  for (long y = 0;; ++y) {
    const double log_mass = log_mix(c1.log_w(y), c2.log_w(y), alpha);
    // closed-form cdf: Q(y+1, lambda) - (1-alpha) W1 - alpha W2 with
    // W_k = q^{k(y+1)} e^{lambda(1-q^k)/q^k} r_y(lambda/q^k)
    const double log_W1 = (y + 1) * c1.k_log_q + c1.growth + c1.sum.log_sum();
    const double log_W2 = (y + 1) * c2.k_log_q + c2.growth + c2.sum.log_sum();
    double F = std::exp(pois.log_sum()) - (1.0 - alpha) * std::exp(log_W1) -
               alpha * std::exp(log_W2);
    F = std::clamp(F, 0.0, 1.0);

    // survival by the positive-sum form: Poisson upper tail plus the two
    // q^{ky} e^{lambda(1-q^k)/q^k} r_{y-1} terms
    double lsf = 0.0;
    if (y > 0) {
      lsf = log_poisson_upper_tail(y, lambda);
      if (alpha < 1.0) {
        lsf = log_sum_exp(lsf, std::log1p(-alpha) + y * c1.k_log_q + c1.growth +
                                   lagged_log_r1);
      }
      if (alpha > 0.0) {
        lsf = log_sum_exp(lsf, std::log(alpha) + y * c2.k_log_q + c2.growth +
                                   lagged_log_r2);
      }
      lsf = std::min(lsf, 0.0);
    }

    t.pmf[y] = std::exp(log_mass);
    t.cdf[y] = F;
    t.sf[y] = std::exp(lsf);
    t.hazard[y] = std::exp(log_mass - lsf);

    if (y == y_max) break;
    lagged_log_r1 = c1.sum.log_sum();
    lagged_log_r2 = c2.sum.log_sum();
    c1.sum.advance();
    c2.sum.advance();
    pois.advance();
  }
  return t;
}

double cdf(long y, const Params& p) {
  if (y < 0) return 0.0;
  const double lambda = p.lambda(), q = p.q(), alpha = p.alpha();
  ComponentState c1(lambda, q, 1), c2(lambda, q, 2);
  RegularizedSum pois(lambda);
  for (long i = 0; i < y; ++i) {
    c1.sum.advance();
    c2.sum.advance();
    pois.advance();
  }
  const double log_W1 = (y + 1) * c1.k_log_q + c1.growth + c1.sum.log_sum();
  const double log_W2 = (y + 1) * c2.k_log_q + c2.growth + c2.sum.log_sum();
  const double F = std::exp(pois.log_sum()) - (1.0 - alpha) * std::exp(log_W1) -
                   alpha * std::exp(log_W2);
  return std::clamp(F, 0.0, 1.0);
}

double sf(long y, const Params& p) {
  if (y <= 0) return 1.0;
  return std::exp(log_sf(y, p));
}

double hazard(long y, const Params& p) {
  require_nonnegative_y(y, "hazard");
  return std::exp(log_pmf(y, p) - log_sf(y, p));
}

double mrl(long t, const Params& p, double tol) {
  require_nonnegative_y(t, "mrl");
  if (!(tol > 0.0) || !(tol <= 1e-3)) {
    throw std::domain_error("mrl: tol must lie in (0, 1e-3]");
  }
  const double lambda = p.lambda(), q = p.q(), alpha = p.alpha();
  const double denom = sf(t, p);

  // residual tail of sum_{y>Y} (y-t) p(y) under the geometric envelope
  // p(y) <= (1-alpha) C1 q^y + alpha C2 q^{2y}, C_k = (1-q^k) e^{lambda(1-q^k)/q^k}:
  // sum_{y>Y} (y-t) r^y = r^{Y+1} [ (Y+1-t)/(1-r) + r/(1-r)^2 ].
  const auto log_tail = [&](long Y) {
    double acc = kNegInf;
    for (int k = 1; k <= 2; ++k) {
      const double w = (k == 1) ? 1.0 - alpha : alpha;
      if (w == 0.0) continue;
      const double qk = std::pow(q, k);
      const double log_C = std::log1p(-qk) + lambda * (1.0 - qk) / qk;
      const double poly = static_cast<double>(Y + 1 - t) / (1.0 - qk) +
                          qk / ((1.0 - qk) * (1.0 - qk));
      acc = log_sum_exp(acc, std::log(w) + log_C +
                                 (Y + 1) * k * std::log(q) + std::log(poly));
    }
    return acc;
  };

  ComponentState c1(lambda, q, 1), c2(lambda, q, 2);
  for (long y = 0; y < t; ++y) {
    c1.sum.advance();
    c2.sum.advance();
  }
  const double log_stop = std::log(tol) + std::log(denom);
  double acc = 0.0;
  for (long y = t;; ++y) {
    acc += static_cast<double>(y - t) *
           std::exp(log_mix(c1.log_w(y), c2.log_w(y), alpha));
    if (y > t && log_tail(y) <= log_stop) break;
    if (y - t > 100'000'000L) {
      throw std::runtime_error("mrl: tail bound failed to certify");
    }
    c1.sum.advance();
    c2.sum.advance();
  }
  return acc / denom;
}

double pgf(double s, const Params& p) {
  const double q = p.q(), alpha = p.alpha(), lambda = p.lambda();
  if (!(std::abs(q * q * s) < 1.0)) {
    std::ostringstream os;
    os << "pgf: requires |q^2 s| < 1, i.e. |s| < " << 1.0 / (q * q);
    throw std::domain_error(os.str());
  }
  return std::exp(lambda * (s - 1.0)) * (1.0 - q) *
         (1.0 + alpha * q * (1.0 - s) - q * q * s) /
         ((1.0 - q * s) * (1.0 - q * q * s));
}

double mgf(double t, const Params& p) {
  const double q = p.q();
  if (!(t < -2.0 * std::log(q))) {
    std::ostringstream os;
    os << "mgf: requires t < -2 log q = " << -2.0 * std::log(q);
    throw std::domain_error(os.str());
  }
  return pgf(std::exp(t), p);
}

double cgf(double t, const Params& p) {
  const double q = p.q(), alpha = p.alpha(), lambda = p.lambda();
  if (!(t < -2.0 * std::log(q))) {
    std::ostringstream os;
    os << "cgf: requires t < -2 log q = " << -2.0 * std::log(q);
    throw std::domain_error(os.str());
  }
  const double s = std::exp(t);
  return lambda * (s - 1.0) +
         std::log((1.0 - q) * (1.0 + alpha * q * (1.0 - s) - q * q * s) /
                  ((1.0 - q * s) * (1.0 - q * q * s)));
}

std::complex<double> cf(double t, const Params& p) {
  const double q = p.q(), alpha = p.alpha(), lambda = p.lambda();
  const std::complex<double> s = std::exp(std::complex<double>(0.0, t));
  return std::exp(lambda * (s - 1.0)) * (1.0 - q) *
         (1.0 + alpha * q * (1.0 - s) - q * q * s) /
         ((1.0 - q * s) * (1.0 - q * q * s));
}

MomentSet moments(const Params& p) {
  const double L = p.lambda(), q = p.q(), a = p.alpha();
  const double om = 1.0 - q * q;  // 1 - q^2
  const double L2 = L * L, L3 = L2 * L, L4 = L3 * L;
  const double a2 = a * a, a3 = a2 * a, a4 = a3 * a;
  const double q2 = q * q, q3 = q2 * q, q4 = q3 * q, q5 = q4 * q, q6 = q5 * q,
               q7 = q6 * q, q8 = q7 * q;

  MomentSet m;
  m.raw[0] = L + (q * (1.0 - a) + q2) / om;

  m.raw[1] = (L * (1.0 + L) + q * (1.0 - a) * (1.0 + 2.0 * L) +
              q2 * (3.0 - 2.0 * a - 2.0 * L2) + q3 * (1.0 - a) * (3.0 - 2.0 * L) +
              q4 * (1.0 - L + L2)) /
             (om * om);

  m.raw[2] = (L * (L2 + 3.0 * L + 1.0) + q * (1.0 - a) * (3.0 * L2 + 6.0 * L + 1.0) -
              q2 * (3.0 * L3 + 6.0 * L2 - 9.0 * L + 6.0 * a * (L + 1.0) - 7.0) -
              2.0 * q3 * (1.0 - a) * (3.0 * L2 - 8.0) +
              q4 * (3.0 * L3 + 3.0 * L2 - 9.0 * L + 6.0 * a * (L - 2.0) + 16.0) +
              q5 * (1.0 - a) * (3.0 * L2 - 6.0 * L + 7.0) - q6 * (L3 + L - 1.0)) /
             (om * om * om);

  m.raw[3] =
      (L * (L3 + 6.0 * L2 + 7.0 * L + 1.0) +
       q * (1.0 - a) * (4.0 * L3 + 18.0 * L2 + 14.0 * L + 1.0) -
       q2 * (4.0 * L4 + 20.0 * L3 - 2.0 * L2 - 46.0 * L +
             2.0 * a * (7.0 + 18.0 * L + 6.0 * L2) - 15.0) -
       q3 * (1.0 - a) * (12.0 * L3 + 30.0 * L2 - 54.0 * L - 61.0) +
       q4 * (6.0 * L4 + 24.0 * L3 - 24.0 * L2 + 8.0 * a * (3.0 * L2 - 13.0) + 115.0) +
       q5 * (1.0 - a) * (12.0 * L3 + 6.0 * L2 - 54.0 * L + 115.0) -
       q6 * (4.0 * L4 + 12.0 * L3 - 14.0 * L2 + 46.0 * L +
             2.0 * a * (25.0 - 18.0 * L + 6.0 * L2) - 61.0) -
       q7 * (1.0 - a) * (-15.0 + 14.0 * L - 6.0 * L2 + 4.0 * L3) +
       q8 * (L4 + 2.0 * L3 + L2 - L + 1.0)) /
      (om * om * om * om);

  m.central[0] = 0.0;

  m.central[1] = L + q * (1.0 - a + q * (2.0 + q * (1.0 - a) - a2)) / (om * om);

  m.central[2] = (L + q * (1.0 - a) - q2 * (3.0 * a2 + 3.0 * L - 4.0) -
                  2.0 * q3 * (a3 + 2.0 * a - 3.0) - q4 * (3.0 * a2 - 3.0 * L - 4.0) +
                  q5 * (1.0 - a) - q6 * L) /
                 (om * om * om);

  // palindromic in q: the q^j and q^{8-j} groups share coefficients
  m.central[3] =
      ((1.0 + q8) * L * (3.0 * L + 1.0) + (q + q7) * (1.0 - a) * (6.0 * L + 1.0) -
       (q2 + q6) * (a2 * (6.0 * L + 4.0) + 6.0 * a + 12.0 * L2 - 8.0 * L - 11.0) +
       (q3 + q5) * (1.0 - a) * (6.0 * a2 + 12.0 * a - 6.0 * L + 35.0) +
       q4 * (-3.0 * a4 + 4.0 * a2 * (3.0 * L - 7.0) - 12.0 * a +
             2.0 * (9.0 * L2 - 9.0 * L + 25.0))) /
      (om * om * om * om);

  // cross-validate the closed forms against the binomial identities
  const double mu1 = m.raw[0];
  const double b2 = m.raw[1] - mu1 * mu1;
  const double b3 = m.raw[2] - 3.0 * m.raw[1] * mu1 + 2.0 * mu1 * mu1 * mu1;
  const double b4 = m.raw[3] - 4.0 * m.raw[2] * mu1 + 6.0 * m.raw[1] * mu1 * mu1 -
                    3.0 * mu1 * mu1 * mu1 * mu1;
  const auto reldiff = [](double x, double ref) {
    return std::abs(x - ref) / std::max(1.0, std::abs(ref));
  };
  if (reldiff(m.central[1], b2) > 1e-8 || reldiff(m.central[2], b3) > 1e-8 ||
      reldiff(m.central[3], b4) > 1e-8) {
    throw std::logic_error("moments: closed forms disagree with binomial identities");
  }

  m.mean = m.raw[0];
  m.variance = m.central[1];
  m.skewness = m.central[2] / std::pow(m.variance, 1.5);
  m.kurtosis = m.central[3] / (m.variance * m.variance);
  m.dispersion_index = m.variance / m.mean;
  m.cv_percent = 100.0 * std::sqrt(m.variance) / m.mean;
  return m;
}

CountData sample(const Params& p, long n, std::mt19937_64& rng) {
  if (n < 1) throw std::domain_error("sample: n must be >= 1");
  std::poisson_distribution<long> pois(p.lambda());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double log_q = std::log(p.q());

  std::vector<long> out;
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const long y1 = pois(rng);
    const double k = (unif(rng) < p.alpha()) ? 2.0 : 1.0;
    const double u = 1.0 - unif(rng);  // (0, 1]
    const long y2 = static_cast<long>(std::floor(std::log(u) / (k * log_q)));
    out.push_back(y1 + y2);
  }
  return CountData(std::move(out));
}

OrderPair::OrderPair(const Params& upper, const Params& lower)
    : upper_(upper), lower_(lower) {
  if (!(lower.lambda() <= upper.lambda()) || !(upper.q() <= lower.q()) ||
      upper.alpha() != lower.alpha()) {
    throw std::domain_error(
        "OrderPair: requires lower.lambda <= upper.lambda, "
        "upper.q <= lower.q and equal alphas");
  }
}

LrOrderResult lr_order_holds(const OrderPair& pair, long y_max, double tol) {
  require_nonnegative_y(y_max, "lr_order_holds");
  if (!(tol >= 0.0)) throw std::domain_error("lr_order_holds: tol must be >= 0");
  LrOrderResult res;
  res.holds = true;
  double prev = log_pmf(0, pair.upper()) - log_pmf(0, pair.lower());
  for (long x = 0; x < y_max; ++x) {
    const double next = log_pmf(x + 1, pair.upper()) - log_pmf(x + 1, pair.lower());
    if (prev > next + tol) {
      res.holds = false;
      res.first_violation = x;
      return res;
    }
    prev = next;
  }
  return res;
}

}  // namespace poitg

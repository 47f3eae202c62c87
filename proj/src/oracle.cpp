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

#include "poitg/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace poitg {

namespace {

constexpr long kDirectYCap = 400;

double tgd_mass(long y, double q, double alpha) {
  const double yd = static_cast<double>(y);
  return (1.0 - alpha) * (1.0 - q) * std::pow(q, yd) +
         alpha * (1.0 - q * q) * std::pow(q, 2.0 * yd);
}

// direct convolution with the Poisson terms carried as running products
double convolve(long y, const Params& p, std::vector<double>& pois_terms) {
  const double lambda = p.lambda();
  while (static_cast<long>(pois_terms.size()) <= y) {
    if (pois_terms.empty()) {
      pois_terms.push_back(std::exp(-lambda));
    } else {
      const double i = static_cast<double>(pois_terms.size());
      pois_terms.push_back(pois_terms.back() * lambda / i);
    }
  }
  double sum = 0.0;
  for (long i = 0; i <= y; ++i) {
    sum += pois_terms[static_cast<std::size_t>(i)] *
           tgd_mass(y - i, p.q(), p.alpha());
  }
  return sum;
}

}  // namespace

double convolution_pmf_oracle(long y, const Params& p) {
  if (y < 0) throw std::domain_error("convolution_pmf_oracle: y must be >= 0");
  if (y > kDirectYCap) {
    throw std::domain_error(
        "convolution_pmf_oracle: y beyond the direct-arithmetic range");
  }
  std::vector<double> pois_terms;
  return convolve(y, p, pois_terms);
}

TruncatedMoment truncated_moment_oracle(const Params& p, int order,
                                        const OracleConfig& cfg) {
  if (order < 1 || order > 4) {
    throw std::domain_error("truncated_moment_oracle: order must be 1..4");
  }
  if (cfg.y_cap < 1) {
    throw std::domain_error("truncated_moment_oracle: y_cap must be >= 1");
  }
  if (!(cfg.tol > 0.0) || !(cfg.tol <= 1e-3)) {
    throw std::domain_error("truncated_moment_oracle: tol must lie in (0, 1e-3]");
  }

  const double lambda = p.lambda(), q = p.q(), alpha = p.alpha();
  const double r = static_cast<double>(order);

  // tail envelope sum_{y>Y} y^r [(1-alpha) C1 q^y + alpha C2 q^{2y}] with
  // C_k = (1-q^k) e^{lambda(1-q^k)/q^k}; successive terms shrink by at least
  // rho_k = q^k ((Y+2)/(Y+1))^r, so the tail is a_{Y+1} / (1 - rho_k).
  // Assembled in logs only to survive the e^{...} scale.
  const auto log_tail_bound = [&](long Y) {
    double bound = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 2; ++k) {
      const double w = (k == 1) ? 1.0 - alpha : alpha;
      if (w == 0.0) continue;
      const double qk = std::pow(q, k);
      const double rho =
          qk * std::pow(static_cast<double>(Y + 2) / static_cast<double>(Y + 1), r);
      if (rho >= 1.0) return std::numeric_limits<double>::infinity();
      const double log_term = std::log(w) + std::log1p(-qk) +
                              lambda * (1.0 - qk) / qk +
                              r * std::log(static_cast<double>(Y + 1)) +
                              static_cast<double>(k * (Y + 1)) * std::log(q) -
                              std::log1p(-rho);
      bound = std::max(bound, log_term) +
              std::log1p(std::exp(std::min(bound, log_term) -
                                  std::max(bound, log_term)));
    }
    return bound;
  };

  std::vector<double> pois_terms;
  TruncatedMoment out;
  double sum = 0.0;
  const double log_tol = std::log(cfg.tol);
  for (long y = 0;; ++y) {
    sum += std::pow(static_cast<double>(y), r) * convolve(y, p, pois_terms);
    const double lb = log_tail_bound(y);
    if (lb <= log_tol || y == cfg.y_cap) {
      out.value = sum;
      out.tail_bound = std::exp(lb);
      out.y_star = y;
      return out;
    }
  }
}

}  // namespace poitg

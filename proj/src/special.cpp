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

#include "poitg/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace poitg {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_log_scale(double x) {
  if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) {
    throw std::domain_error("log_sum_exp: entries must lie in [-inf, +inf)");
  }
}
}  // namespace

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) {
    throw std::domain_error("log_sum_exp: empty input");
  }
  double m = kNegInf;
  for (double t : terms) {
    check_log_scale(t);
    m = std::max(m, t);
  }
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

double log_sum_exp(double a, double b) {
  check_log_scale(a);
  check_log_scale(b);
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_add_exp(double acc, double term) { return log_sum_exp(acc, term); }

double log_regularized_upper_gamma(long n, double x) {
  if (n < 1) {
    throw std::domain_error("log_regularized_upper_gamma: n must be >= 1");
  }
  if (!(x >= 0.0)) {
    throw std::domain_error("log_regularized_upper_gamma: x must be >= 0");
  }
  if (x == 0.0) return 0.0;  // Gamma(n, 0) = Gamma(n)
  const double lx = std::log(x);
  // log sum_{k=0}^{n-1} exp(k log x - x - log k!), single max-shifted pass
  std::vector<double> terms(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    terms[static_cast<std::size_t>(k)] =
        static_cast<double>(k) * lx - x - std::lgamma(k + 1.0);
  }
  // clamp tiny positive round-off; the true value is a log-probability
  return std::min(log_sum_exp(terms), 0.0);
}

double log_poisson_pmf(long y, double rate) {
  if (y < 0) throw std::domain_error("log_poisson_pmf: y must be >= 0");
  if (!(rate > 0.0)) throw std::domain_error("log_poisson_pmf: rate must be > 0");
  return static_cast<double>(y) * std::log(rate) - rate - std::lgamma(y + 1.0);
}

}  // namespace poitg

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

#ifndef POITG_SPECIAL_HPP
#define POITG_SPECIAL_HPP

#include <span>

namespace poitg {

/// Natural-log-scale probabilities: finite or -inf (exact zero), never NaN
/// on valid inputs. All probability arithmetic in this library runs on this
/// scale; raw factors such as exp(lambda (1-q^k)/q^k) overflow long before
/// the quantities they belong to do.

/// log(sum_i exp(terms[i])), max-shifted. -inf entries are absorbed;
/// returns -inf iff every entry is -inf. Throws std::domain_error on an
/// empty span or a NaN/+inf entry.
double log_sum_exp(std::span<const double> terms);

/// Two-term special case, log(e^a + e^b).
double log_sum_exp(double a, double b);

/// Incremental form: given acc = log(S), returns log(S + e^term).
/// Equivalent to log_sum_exp(acc, term); spelled separately where a running
/// sum is accumulated one term at a time.
double log_add_exp(double acc, double term);

/// log of the regularized upper incomplete gamma for integer first argument,
/// log[Gamma(n, x) / Gamma(n)] = log sum_{k=0}^{n-1} e^{-x} x^k / k!,
/// i.e. the log of the Poisson(x) cdf at n - 1. Requires n >= 1, x >= 0.
/// Monotone non-increasing in x; equals 0 at x = 0.
double log_regularized_upper_gamma(long n, double x);

/// log Poisson mass: y log(rate) - rate - lgamma(y + 1). Requires y >= 0
/// and rate > 0.
double log_poisson_pmf(long y, double rate);

}  // namespace poitg

#endif  // POITG_SPECIAL_HPP

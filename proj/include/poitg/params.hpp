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

#ifndef POITG_PARAMS_HPP
#define POITG_PARAMS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace poitg {

/// Parameter triple of the PoiTG law: Poisson rate lambda > 0, geometric
/// ratio q in (0,1), mixture weight alpha in [0,1). Values are validated on
/// construction and immutable afterwards, so a Params is safe to share
/// across threads.
///
/// lambda = 0 has no special-cased code path: a configurable floor (default
/// 1e-10) stands in for the lambda -> 0 limit, under which the law reduces
/// to the two-geometric mixture. alpha = 0 is admitted and reduces the law
/// to the plain Poisson-geometric convolution.
class Params {
 public:
  static constexpr double kDefaultLambdaFloor = 1e-10;

  Params(double lambda, double q, double alpha,
         double lambda_floor = kDefaultLambdaFloor);

  double lambda() const { return lambda_; }
  double q() const { return q_; }
  double alpha() const { return alpha_; }
  double lambda_floor() const { return lambda_floor_; }

  /// Ratio of the second mixture component, q^2.
  double q_star() const { return q_ * q_; }

 private:
  double lambda_;
  double q_;
  double alpha_;
  double lambda_floor_;
};

/// A finite sample of observed counts y_1..y_n, n >= 1, each >= 0.
/// Alongside the raw sequence a value -> multiplicity histogram is kept
/// (sorted by value); likelihood-type sums run over distinct values, which
/// both speeds up repeated evaluation and makes the results invariant to
/// permutations of the input, bitwise.
class CountData {
 public:
  explicit CountData(std::vector<long> counts);

  std::span<const long> counts() const { return counts_; }
  long n() const { return static_cast<long>(counts_.size()); }
  double mean() const { return mean_; }
  long max_value() const { return histogram_.empty() ? 0 : histogram_.back().first; }

  /// (value, multiplicity) pairs, ascending by value.
  const std::vector<std::pair<long, long>>& histogram() const { return histogram_; }

 private:
  std::vector<long> counts_;
  std::vector<std::pair<long, long>> histogram_;
  double mean_ = 0.0;
};

}  // namespace poitg

#endif  // POITG_PARAMS_HPP

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

#include "poitg/params.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace poitg {

Params::Params(double lambda, double q, double alpha, double lambda_floor)
    : lambda_(lambda), q_(q), alpha_(alpha), lambda_floor_(lambda_floor) {
  if (!(lambda_floor > 0.0) || !std::isfinite(lambda_floor)) {
    throw std::domain_error("Params: lambda_floor must be a positive real");
  }
  if (std::isnan(lambda) || lambda < 0.0 || !std::isfinite(lambda)) {
    throw std::domain_error("Params: lambda must be a non-negative real");
  }
  lambda_ = std::max(lambda, lambda_floor);
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("Params: q must lie in (0, 1)");
  }
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("Params: alpha must lie in [0, 1)");
  }
}

CountData::CountData(std::vector<long> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw std::domain_error("CountData: need at least one observation");
  }
  std::map<long, long> hist;
  double sum = 0.0;
  for (long y : counts_) {
    if (y < 0) throw std::domain_error("CountData: counts must be >= 0");
    ++hist[y];
    sum += static_cast<double>(y);
  }
  histogram_.assign(hist.begin(), hist.end());
  mean_ = sum / static_cast<double>(counts_.size());
}

}  // namespace poitg

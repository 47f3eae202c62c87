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

#ifndef POITG_ORACLE_HPP
#define POITG_ORACLE_HPP

#include "poitg/params.hpp"

namespace poitg {

// Brute-force reference evaluations, kept deliberately free of the log-space
// machinery and recurrences the main implementation uses, so agreement
// between the two is evidence rather than tautology.

struct OracleConfig {
  long y_cap = 2000;   // hard truncation point, >= 1
  double tol = 1e-10;  // tail-bound target, in (0, 1e-3]
};

/// Mass at y by the defining convolution sum_{i<=y} Pois(i) Tgd(y-i) in
/// plain floating point with running Poisson terms. Capped at y = 400,
/// past which the direct terms drift into the underflow regime.
double convolution_pmf_oracle(long y, const Params& p);

struct TruncatedMoment {
  double value = 0.0;       // sum_{y<=y_star} y^order pmf(y)
  double tail_bound = 0.0;  // certified bound on the discarded tail
  long y_star = 0;
};

/// Truncated raw moment of the given order (1..4) with a certificate: the
/// truncation point is the first y where a geometric tail envelope drops
/// below cfg.tol (or cfg.y_cap, in which case the reported bound may exceed
/// the target).
TruncatedMoment truncated_moment_oracle(const Params& p, int order,
                                        const OracleConfig& cfg = {});

}  // namespace poitg

#endif  // POITG_ORACLE_HPP

// Copyright 2026 The sgnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SGNAV_COST_MODEL_HPP_
#define SGNAV_COST_MODEL_HPP_

#include <optional>
#include <vector>

namespace sgnav {

/// Token-cost model for batched versus per-pair edge proposal. Generation
/// cost grows as (tokens)^r.
struct CostModel {
  double prompt_tokens = 1000.0;   // L_pro
  double response_tokens = 10.0;   // L_res, per pair
  double exponent = 2.0;           // r in (1, 2]
  double per_pair_overhead = 2.0;  // delimiter tokens per pair in one batch

  double alpha() const { return response_tokens / prompt_tokens; }
};

struct CostEstimate {
  double t_our = 0.0;
  double t_naive = 0.0;
  double ratio = 0.0;
};

/// Throws InputError unless m >= 1 and n >= 0.
CostEstimate estimate_cost(const CostModel& model, int m, int n);

/// (m + n) * ratio with the per-pair overhead dropped:
/// (1 + m(m + n) alpha)^r / ((1 + alpha)^r m).
double bound_coefficient(int m, int n, double alpha, double r);

/// The bound as printed, with n = 100 substituted: (alpha m^2 + m - alpha)^r / m.
/// Its value at m = 5 is the constant 5.49.
double reported_coefficient(int m, double alpha, double r);

struct BoundViolation {
  int m = 0;
  int n = 0;
  double ratio = 0.0;
  double bound = 0.0;
};

struct SweepRange {
  int m_min = 1;
  int m_max = 5;
  int n_min = 1;
  int n_max = 100;
};

/// Checks ratio < c / (m + n) over the sweep in row-major (m, then n) order.
/// Returns the first violation, or nullopt when every point passes.
std::optional<BoundViolation> verify_complexity_bound(const CostModel& model,
                                                      double c = 5.49,
                                                      SweepRange range = {});

std::vector<BoundViolation> bound_violations(const CostModel& model, double c = 5.49,
                                             SweepRange range = {});

}  // namespace sgnav

#endif  // SGNAV_COST_MODEL_HPP_

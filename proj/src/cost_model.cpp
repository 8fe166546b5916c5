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

#include "sgnav/cost_model.hpp"

#include <cmath>
#include <string>

#include "sgnav/errors.hpp"

namespace sgnav {

CostEstimate estimate_cost(const CostModel& model, int m, int n) {
  if (m < 1 || n < 0) {
    throw InputError("estimate_cost needs m >= 1 and n >= 0, got m=" +
                     std::to_string(m) + " n=" + std::to_string(n));
  }
  const double pairs = static_cast<double>(m) * static_cast<double>(m + n);
  const double r = model.exponent;
  CostEstimate e;
  e.t_our = std::pow(model.prompt_tokens + pairs * model.response_tokens +
                         pairs * model.per_pair_overhead,
                     r);
  e.t_naive = pairs * std::pow(model.prompt_tokens + model.response_tokens, r);
  e.ratio = e.t_our / e.t_naive;
  return e;
}

double bound_coefficient(int m, int n, double alpha, double r) {
  const double md = m;
  return std::pow((1.0 + md * (md + n) * alpha) / (1.0 + alpha), r) / md;
}

double reported_coefficient(int m, double alpha, double r) {
  const double md = m;
  return std::pow(alpha * md * md + md - alpha, r) / md;
}

std::vector<BoundViolation> bound_violations(const CostModel& model, double c,
                                             SweepRange range) {
  std::vector<BoundViolation> out;
  for (int m = range.m_min; m <= range.m_max; ++m) {
    for (int n = range.n_min; n <= range.n_max; ++n) {
      const double ratio = estimate_cost(model, m, n).ratio;
      const double bound = c / static_cast<double>(m + n);
      if (!(ratio < bound)) out.push_back({m, n, ratio, bound});
    }
  }
  return out;
}

std::optional<BoundViolation> verify_complexity_bound(const CostModel& model,
                                                      double c, SweepRange range) {
  for (int m = range.m_min; m <= range.m_max; ++m) {
    for (int n = range.n_min; n <= range.n_max; ++n) {
      const double ratio = estimate_cost(model, m, n).ratio;
      const double bound = c / static_cast<double>(m + n);
      if (!(ratio < bound)) return BoundViolation{m, n, ratio, bound};
    }
  }
  return std::nullopt;
}

}  // namespace sgnav

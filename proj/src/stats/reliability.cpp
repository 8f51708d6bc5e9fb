// Copyright 2026 The hprobe Authors
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

#include "hprobe/stats/reliability.hpp"

#include "hprobe/error.hpp"
#include "hprobe/stats/descriptive.hpp"

namespace hprobe::stats {

ReliabilityStat cronbach_alpha(const RatingMatrix& m) {
  const std::size_t k = m.n_items();
  const std::size_t n = m.n_runs();
  if (k < 2) throw Error(ErrorCode::TooFewItems, "alpha needs at least two items, got " + std::to_string(k));
  if (n < 2) throw Error(ErrorCode::TooFewRuns, "alpha needs at least two runs, got " + std::to_string(n));
  for (const auto& row : m.rows) {
    if (row.size() != k) throw Error(ErrorCode::SchemaViolation, "rating row length differs from item count");
  }

  ReliabilityStat out;
  out.k = k;
  out.n = n;

  std::vector<double> column(n);
  double item_var_sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = m.rows[i][j];
    const double v = sample_variance(column);
    if (v == 0.0) out.zero_variance_items.push_back(m.item_ids[j]);
    item_var_sum += v;
  }
  std::vector<double> totals(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (double x : m.rows[i]) totals[i] += x;
  }
  const double total_var = sample_variance(totals);
  // Ratings are small integers, so a constant total is exactly constant.
  if (total_var <= 0.0) return out;

  const double kd = static_cast<double>(k);
  out.alpha = kd / (kd - 1.0) * (1.0 - item_var_sum / total_var);
  return out;
}

}  // namespace hprobe::stats

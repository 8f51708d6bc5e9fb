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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hprobe::stats {

/// Runs as rows, items as columns. No missing cells.
struct RatingMatrix {
  std::vector<std::string> item_ids;
  std::vector<std::vector<double>> rows;

  std::size_t n_items() const { return item_ids.size(); }
  std::size_t n_runs() const { return rows.size(); }
};

struct ReliabilityStat {
  std::optional<double> alpha;  // empty when the total score never varies
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<std::string> zero_variance_items;

  bool defined() const { return alpha.has_value(); }
};

/// Cronbach's alpha with sample (n - 1) variances.
/// Throws TooFewItems (k < 2), TooFewRuns (n < 2), SchemaViolation for ragged rows.
ReliabilityStat cronbach_alpha(const RatingMatrix& m);

}  // namespace hprobe::stats

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

#include "hprobe/stats/descriptive.hpp"

#include <cmath>
#include <numeric>

#include "hprobe/error.hpp"

namespace hprobe::stats {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::InsufficientData, "mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw Error(ErrorCode::InsufficientData, "variance needs at least two values");
  const double m = mean(xs);
  double ss = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double d = x - m;
    ss += d * d;
    comp += d;
  }
  return (ss - comp * comp / static_cast<double>(xs.size())) / static_cast<double>(xs.size() - 1);
}

double sample_sd(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

std::vector<double> standardize(std::span<const double> xs) {
  if (xs.size() < 2) throw Error(ErrorCode::InsufficientData, "standardize needs at least two values");
  const double m = mean(xs);
  const double var = sample_variance(xs);
  if (!(var > 0.0)) throw Error(ErrorCode::ZeroVariance, "column is constant");
  const double sd = std::sqrt(var);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back((x - m) / sd);
  return out;
}

}  // namespace hprobe::stats

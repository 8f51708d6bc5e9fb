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

#include <span>

namespace hprobe::stats {

struct EffectSize {
  double d = 0.0;
};

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
  double cohens_d = 0.0;
};

/// Pooled-variance Student t, df = n1 + n2 - 2. Throws TooFewSamples when a
/// sample has fewer than two values.
TTestResult students_t(std::span<const double> a, std::span<const double> b);

/// (mean_a - mean_b) / pooled sd.
EffectSize cohens_d(std::span<const double> a, std::span<const double> b);

}  // namespace hprobe::stats

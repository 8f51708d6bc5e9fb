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
#include <vector>

namespace hprobe::stats {

double mean(std::span<const double> xs);

/// Sample variance (denominator n - 1), two-pass. Requires n >= 2.
double sample_variance(std::span<const double> xs);

double sample_sd(std::span<const double> xs);

/// (x - mean) / sample sd. Throws InsufficientData for fewer than two values
/// and ZeroVariance for a constant column.
std::vector<double> standardize(std::span<const double> xs);

}  // namespace hprobe::stats

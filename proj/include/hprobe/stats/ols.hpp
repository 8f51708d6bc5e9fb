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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hprobe::stats {

struct Coefficient {
  std::string name;
  double coef = 0.0;
  double std_err = 0.0;
  double t = 0.0;
  double p = 1.0;
  std::string stars;
};

struct RegressionResult {
  Coefficient intercept;
  std::vector<Coefficient> predictors;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  std::size_t n = 0;
  double df_residual = 0.0;

  const Coefficient* find(std::string_view name) const;
};

/// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1, else "".
std::string significance_stars(double p);

/// OLS of y on an intercept plus the named predictor columns, classical SEs.
/// Throws InsufficientData when n <= p + 1, RankDeficient for collinear
/// columns, ZeroVariance when y is constant.
RegressionResult ols(const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns,
                     std::span<const double> y);

}  // namespace hprobe::stats

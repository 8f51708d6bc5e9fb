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
#include <string>
#include <string_view>
#include <vector>

namespace hprobe::stats {

/// Sums-of-squares flavour for unbalanced factorial designs.
/// I: sequential (A, then B, then A:B). II: each main effect adjusted for the
/// other, interaction last. III: every term adjusted for all others, with
/// sum-to-zero coding.
enum class SsType { I, II, III };

std::string_view to_string(SsType t);
SsType parse_ss_type(std::string_view s);

struct AnovaTerm {
  std::string name;
  double df = 0.0;
  double sum_sq = 0.0;
  double mean_sq = 0.0;
  double f = 0.0;
  double p = 1.0;
};

struct AnovaResidual {
  double df = 0.0;
  double sum_sq = 0.0;
};

struct AnovaTable {
  SsType ss_type = SsType::II;
  std::vector<AnovaTerm> terms;
  AnovaResidual residual;

  const AnovaTerm& term(std::string_view name) const;
};

/// Two-way ANOVA with interaction, F against the full-model residual.
/// Throws SingleLevel, EmptyCell, InsufficientData (no residual df or zero
/// residual variance).
AnovaTable two_way_anova(std::span<const double> values,
                         const std::vector<std::string>& factor_a,
                         const std::vector<std::string>& factor_b,
                         std::string_view a_name = "A",
                         std::string_view b_name = "B",
                         SsType type = SsType::II);

AnovaTable one_way_anova(std::span<const double> values,
                         const std::vector<std::string>& groups,
                         std::string_view name = "group");

}  // namespace hprobe::stats

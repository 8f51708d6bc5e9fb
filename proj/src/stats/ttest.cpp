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

#include "hprobe/stats/ttest.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hprobe/error.hpp"
#include "hprobe/stats/descriptive.hpp"
#include "hprobe/stats/distributions.hpp"

namespace hprobe::stats {
namespace {

struct Pooled {
  double diff;
  double var;
  double n1;
  double n2;
};

Pooled pool(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::TooFewSamples, "each sample needs at least two values (got " + std::to_string(a.size()) +
                                              " and " + std::to_string(b.size()) + ")");
  }
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double var = ((n1 - 1.0) * sample_variance(a) + (n2 - 1.0) * sample_variance(b)) / (n1 + n2 - 2.0);
  return {mean(a) - mean(b), var, n1, n2};
}

// Ratio with a zero denominator: equal means are no effect, otherwise unbounded.
double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  if (num == 0.0) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), num);
}

}  // namespace

TTestResult students_t(std::span<const double> a, std::span<const double> b) {
  const Pooled p = pool(a, b);
  TTestResult r;
  r.df = p.n1 + p.n2 - 2.0;
  r.t = ratio(p.diff, std::sqrt(p.var * (1.0 / p.n1 + 1.0 / p.n2)));
  r.p = t_two_sided(r.t, r.df);
  r.cohens_d = ratio(p.diff, std::sqrt(p.var));
  return r;
}

EffectSize cohens_d(std::span<const double> a, std::span<const double> b) {
  const Pooled p = pool(a, b);
  return {ratio(p.diff, std::sqrt(p.var))};
}

}  // namespace hprobe::stats

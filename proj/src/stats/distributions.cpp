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

#include "hprobe/stats/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "hprobe/error.hpp"

namespace hprobe::stats {
namespace {

constexpr int kMaxIterations = 20000;
constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) return h;
  }
  throw Error(ErrorCode::DomainError, "incomplete beta continued fraction did not converge");
}

// Returns {I_x(a,b), 1 - I_x(a,b)}; y = 1 - x is passed separately so callers
// can supply it without cancellation.
std::pair<double, double> beta_pair(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0) || std::isinf(a) || std::isinf(b)) {
    throw Error(ErrorCode::DomainError, "incomplete beta needs finite a, b > 0");
  }
  if (!(x >= 0.0) || !(x <= 1.0) || !(y >= 0.0) || !(y <= 1.0)) {
    throw Error(ErrorCode::DomainError, "incomplete beta needs x in [0, 1]");
  }
  if (x == 0.0) return {0.0, 1.0};
  if (y == 0.0) return {1.0, 0.0};
  const double log_front = a * std::log(x) + b * std::log(y) + std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = front * beta_continued_fraction(a, b, x) / a;
    return {lower, 1.0 - lower};
  }
  const double upper = front * beta_continued_fraction(b, a, y) / b;
  return {1.0 - upper, upper};
}

void check_df(double df, const char* what) {
  if (!(df > 0.0) || std::isnan(df)) {
    throw Error(ErrorCode::DomainError, std::string(what) + " must be positive");
  }
}

}  // namespace

double incomplete_beta(double a, double b, double x) { return beta_pair(a, b, x, 1.0 - x).first; }

double incomplete_beta_complement(double a, double b, double x) { return beta_pair(a, b, x, 1.0 - x).second; }

double t_two_sided(double t, double df) {
  check_df(df, "t degrees of freedom");
  if (std::isnan(t)) throw Error(ErrorCode::DomainError, "t statistic is NaN");
  if (t == 0.0) return 1.0;
  if (std::isinf(df)) return std::erfc(std::fabs(t) / std::sqrt(2.0));
  const double t2 = t * t;
  if (std::isinf(t2)) return 0.0;
  return beta_pair(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2)).first;
}

double t_tail(double t, double df) {
  const double two_sided = t_two_sided(t, df);
  return t >= 0.0 ? 0.5 * two_sided : 1.0 - 0.5 * two_sided;
}

double f_tail(double f, double df1, double df2) {
  check_df(df1, "F numerator degrees of freedom");
  check_df(df2, "F denominator degrees of freedom");
  if (std::isnan(f) || f < 0.0) throw Error(ErrorCode::DomainError, "F statistic must be >= 0");
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double scaled = df1 * f;
  const double x = df2 / (df2 + scaled);
  const double y = scaled / (df2 + scaled);
  return beta_pair(0.5 * df2, 0.5 * df1, x, y).first;
}

}  // namespace hprobe::stats

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

#include "hprobe/stats/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hprobe/error.hpp"
#include "hprobe/stats/descriptive.hpp"
#include "hprobe/stats/distributions.hpp"
#include "hprobe/stats/least_squares.hpp"

namespace hprobe::stats {

const Coefficient* RegressionResult::find(std::string_view name) const {
  for (const auto& c : predictors) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

namespace {

Coefficient make_coefficient(std::string name, double coef, double var, double df) {
  Coefficient c;
  c.name = std::move(name);
  c.coef = coef;
  c.std_err = std::sqrt(std::max(var, 0.0));
  if (c.std_err > 0.0) {
    c.t = coef / c.std_err;
  } else {
    // Exact fit: the estimate carries no sampling noise.
    c.t = coef == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), coef);
  }
  c.p = t_two_sided(c.t, df);
  c.stars = significance_stars(c.p);
  return c;
}

}  // namespace

RegressionResult ols(const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns,
                     std::span<const double> y) {
  if (names.size() != columns.size()) {
    throw Error(ErrorCode::InsufficientData, "predictor names and columns differ in count");
  }
  const std::size_t n = y.size();
  const std::size_t p = columns.size();
  if (n <= p + 1) {
    throw Error(ErrorCode::InsufficientData,
                std::to_string(n) + " observations for " + std::to_string(p) + " predictors");
  }
  for (std::size_t j = 0; j < p; ++j) {
    if (columns[j].size() != n) {
      throw Error(ErrorCode::InsufficientData, "predictor " + names[j] + " has the wrong length");
    }
  }

  Matrix x(n, p + 1);
  for (std::size_t i = 0; i < n; ++i) x(i, 0) = 1.0;
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) x(i, j + 1) = columns[j][i];
  }

  LeastSquaresFit fit;
  try {
    fit = least_squares(x, y);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient) throw;
    // Name the offending predictor rather than a column index.
    for (std::size_t j = 1; j <= p; ++j) {
      Matrix sub(n, j + 1);
      for (std::size_t c = 0; c <= j; ++c) {
        for (std::size_t i = 0; i < n; ++i) sub(i, c) = x(i, c);
      }
      try {
        least_squares(sub, y);
      } catch (const Error&) {
        throw Error(ErrorCode::RankDeficient, "predictor " + names[j - 1] + " is collinear with earlier columns");
      }
    }
    throw;
  }

  const double ybar = mean(y);
  double tss = 0.0;
  for (double v : y) tss += (v - ybar) * (v - ybar);
  if (!(tss > 0.0)) throw Error(ErrorCode::ZeroVariance, "response is constant");

  const double df = static_cast<double>(n - p - 1);
  const double s2 = fit.rss / df;
  const Matrix gram_inv = inverse_gram(fit);

  RegressionResult out;
  out.n = n;
  out.df_residual = df;
  out.intercept = make_coefficient("Intercept", fit.beta[0], s2 * gram_inv(0, 0), df);
  for (std::size_t j = 0; j < p; ++j) {
    out.predictors.push_back(make_coefficient(names[j], fit.beta[j + 1], s2 * gram_inv(j + 1, j + 1), df));
  }
  out.r_squared = std::clamp(1.0 - fit.rss / tss, 0.0, 1.0);
  out.adj_r_squared = 1.0 - (1.0 - out.r_squared) * static_cast<double>(n - 1) / df;
  return out;
}

}  // namespace hprobe::stats

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

#include "hprobe/stats/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hprobe/error.hpp"

namespace hprobe::stats {
namespace {

constexpr double kRankTolerance = 1e-9;

double norm(std::span<const double> v) {
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : v) {
    if (x == 0.0) continue;
    const double a = std::fabs(x);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

}  // namespace

LeastSquaresFit least_squares(const Matrix& x, std::span<const double> y) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (y.size() != n) throw Error(ErrorCode::InsufficientData, "response length differs from design rows");
  if (n < p || p == 0) {
    throw Error(ErrorCode::InsufficientData,
                std::to_string(n) + " rows cannot identify " + std::to_string(p) + " coefficients");
  }

  Matrix a = x;
  std::vector<double> b(y.begin(), y.end());
  std::vector<double> column_norms(p);
  for (std::size_t j = 0; j < p; ++j) column_norms[j] = norm(x.column(j));

  for (std::size_t k = 0; k < p; ++k) {
    auto col = a.column(k);
    const double alpha_norm = norm(col.subspan(k));
    if (alpha_norm <= kRankTolerance * std::max(column_norms[k], 1e-300)) {
      throw Error(ErrorCode::RankDeficient, "design column " + std::to_string(k) + " is linearly dependent");
    }
    const double alpha = col[k] > 0 ? -alpha_norm : alpha_norm;
    // v = x - alpha e1, stored in place; H = I - 2 v v^T / (v^T v).
    col[k] -= alpha;
    double vtv = 0.0;
    for (std::size_t i = k; i < n; ++i) vtv += col[i] * col[i];
    for (std::size_t j = k + 1; j < p; ++j) {
      auto cj = a.column(j);
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += col[i] * cj[i];
      const double s = 2.0 * dot / vtv;
      for (std::size_t i = k; i < n; ++i) cj[i] -= s * col[i];
    }
    double dot = 0.0;
    for (std::size_t i = k; i < n; ++i) dot += col[i] * b[i];
    const double s = 2.0 * dot / vtv;
    for (std::size_t i = k; i < n; ++i) b[i] -= s * col[i];
    // Diagonal of R; the Householder vector below it is no longer needed.
    col[k] = alpha;
    if (std::fabs(alpha) <= kRankTolerance * std::max(column_norms[k], 1e-300)) {
      throw Error(ErrorCode::RankDeficient, "design column " + std::to_string(k) + " is linearly dependent");
    }
  }

  LeastSquaresFit fit;
  fit.r = Matrix(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i <= j; ++i) fit.r(i, j) = a(i, j);
  }
  fit.beta.assign(p, 0.0);
  for (std::size_t ii = p; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < p; ++j) s -= fit.r(ii, j) * fit.beta[j];
    fit.beta[ii] = s / fit.r(ii, ii);
  }
  double rss = 0.0;
  for (std::size_t i = p; i < n; ++i) rss += b[i] * b[i];
  fit.rss = rss;
  return fit;
}

Matrix inverse_gram(const LeastSquaresFit& fit) {
  const std::size_t p = fit.r.rows();
  // R^{-1}, upper triangular, by back substitution column by column.
  Matrix rinv(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    rinv(j, j) = 1.0 / fit.r(j, j);
    for (std::size_t ii = j; ii-- > 0;) {
      double s = 0.0;
      for (std::size_t k = ii + 1; k <= j; ++k) s += fit.r(ii, k) * rinv(k, j);
      rinv(ii, j) = -s / fit.r(ii, ii);
    }
  }
  Matrix out(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = j; k < p; ++k) s += rinv(i, k) * rinv(j, k);
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

}  // namespace hprobe::stats

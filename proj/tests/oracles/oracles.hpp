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


// Reference implementations the library is checked against. They share no
// code with src/: tails come from Boost at 50 significant digits, the rest are
// textbook formulas evaluated in long double.

#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Wide = boost::multiprecision::cpp_bin_float_50;

inline double ibeta(double a, double b, double x) {
  return static_cast<double>(boost::math::ibeta(Wide(a), Wide(b), Wide(x)));
}

inline double t_two_sided(double t, double df) {
  const Wide tw(t);
  const Wide d(df);
  const Wide x = d / (d + tw * tw);
  return static_cast<double>(boost::math::ibeta(d / 2, Wide(0.5), x));
}

inline double t_upper(double t, double df) {
  const double two = t_two_sided(t, df);
  return t >= 0 ? two / 2 : 1.0 - two / 2;
}

inline double f_upper(double f, double df1, double df2) {
  const Wide fw(f);
  const Wide d1(df1);
  const Wide d2(df2);
  return static_cast<double>(boost::math::ibeta(d2 / 2, d1 / 2, d2 / (d2 + d1 * fw)));
}

/// alpha = k/(k-1) * (1 - trace(C) / sum(C)), C the item covariance matrix.
/// Returns NaN when sum(C) == 0.
inline double cronbach_alpha(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t k = rows.front().size();
  std::vector<long double> means(k, 0.0L);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < k; ++j) means[j] += r[j];
  }
  for (auto& m : means) m /= static_cast<long double>(n);
  long double trace = 0.0L;
  long double total = 0.0L;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      long double c = 0.0L;
      for (const auto& r : rows) c += (r[a] - means[a]) * (r[b] - means[b]);
      c /= static_cast<long double>(n - 1);
      total += c;
      if (a == b) trace += c;
    }
  }
  if (total == 0.0L) return std::nan("");
  const long double kk = static_cast<long double>(k);
  return static_cast<double>(kk / (kk - 1) * (1 - trace / total));
}

struct OlsFit {
  std::vector<double> beta;  // intercept first
  std::vector<double> se;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
};

/// Solves (X'X) b = X'y by Gauss-Jordan with partial pivoting, inverting X'X
/// alongside for the standard errors.
inline OlsFit ols(const std::vector<std::vector<double>>& columns, const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size() + 1;
  auto x = [&](std::size_t i, std::size_t j) -> long double { return j == 0 ? 1.0L : columns[j - 1][i]; };
  std::vector<std::vector<long double>> aug(p, std::vector<long double>(2 * p + 1, 0.0L));
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) {
      long double s = 0.0L;
      for (std::size_t i = 0; i < n; ++i) s += x(i, a) * x(i, b);
      aug[a][b] = s;
    }
    aug[a][p + a] = 1.0L;
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) s += x(i, a) * y[i];
    aug[a][2 * p] = s;
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::fabs(aug[r][c]) > std::fabs(aug[piv][c])) piv = r;
    }
    std::swap(aug[c], aug[piv]);
    const long double d = aug[c][c];
    if (d == 0.0L) throw std::runtime_error("singular normal equations");
    for (auto& v : aug[c]) v /= d;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const long double f = aug[r][c];
      for (std::size_t k = 0; k < 2 * p + 1; ++k) aug[r][k] -= f * aug[c][k];
    }
  }
  OlsFit fit;
  long double ybar = 0.0L;
  for (double v : y) ybar += v;
  ybar /= static_cast<long double>(n);
  long double rss = 0.0L;
  long double tss = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    long double yhat = 0.0L;
    for (std::size_t j = 0; j < p; ++j) yhat += aug[j][2 * p] * x(i, j);
    rss += (y[i] - yhat) * (y[i] - yhat);
    tss += (y[i] - ybar) * (y[i] - ybar);
  }
  const long double s2 = rss / static_cast<long double>(n - p);
  for (std::size_t j = 0; j < p; ++j) {
    fit.beta.push_back(static_cast<double>(aug[j][2 * p]));
    fit.se.push_back(static_cast<double>(std::sqrt(s2 * aug[j][p + j])));
  }
  fit.r_squared = static_cast<double>(1 - rss / tss);
  fit.adj_r_squared =
      static_cast<double>(1 - (rss / static_cast<long double>(n - p)) / (tss / static_cast<long double>(n - 1)));
  return fit;
}

struct BalancedAnova {
  double ss_a, ss_b, ss_ab, ss_e;
  double df_a, df_b, df_ab, df_e;
  double f_a, f_b, f_ab;
};

/// cells[i][j] holds the replicates of cell (a_i, b_j); all the same size.
inline BalancedAnova balanced_two_way(const std::vector<std::vector<std::vector<double>>>& cells) {
  const std::size_t a = cells.size();
  const std::size_t b = cells[0].size();
  const std::size_t r = cells[0][0].size();
  long double grand = 0.0L;
  std::vector<long double> row(a, 0.0L);
  std::vector<long double> col(b, 0.0L);
  std::vector<std::vector<long double>> cell(a, std::vector<long double>(b, 0.0L));
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      for (double v : cells[i][j]) cell[i][j] += v;
      cell[i][j] /= static_cast<long double>(r);
      row[i] += cell[i][j] / static_cast<long double>(b);
      col[j] += cell[i][j] / static_cast<long double>(a);
      grand += cell[i][j] / static_cast<long double>(a * b);
    }
  }
  long double ssa = 0.0L, ssb = 0.0L, ssab = 0.0L, sse = 0.0L;
  for (std::size_t i = 0; i < a; ++i) ssa += (row[i] - grand) * (row[i] - grand);
  for (std::size_t j = 0; j < b; ++j) ssb += (col[j] - grand) * (col[j] - grand);
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      const long double inter = cell[i][j] - row[i] - col[j] + grand;
      ssab += inter * inter;
      for (double v : cells[i][j]) sse += (v - cell[i][j]) * (v - cell[i][j]);
    }
  }
  ssa *= static_cast<long double>(b * r);
  ssb *= static_cast<long double>(a * r);
  ssab *= static_cast<long double>(r);
  BalancedAnova out{};
  out.df_a = static_cast<double>(a - 1);
  out.df_b = static_cast<double>(b - 1);
  out.df_ab = out.df_a * out.df_b;
  out.df_e = static_cast<double>(a * b * (r - 1));
  out.ss_a = static_cast<double>(ssa);
  out.ss_b = static_cast<double>(ssb);
  out.ss_ab = static_cast<double>(ssab);
  out.ss_e = static_cast<double>(sse);
  const long double mse = sse / static_cast<long double>(out.df_e);
  out.f_a = static_cast<double>(ssa / out.df_a / mse);
  out.f_b = static_cast<double>(ssb / out.df_b / mse);
  out.f_ab = static_cast<double>(ssab / out.df_ab / mse);
  return out;
}

struct TTest {
  double t, df, p, d;
};

inline TTest pooled_t(const std::vector<double>& a, const std::vector<double>& b) {
  auto moments = [](const std::vector<double>& v) {
    long double m = 0.0L;
    for (double x : v) m += x;
    m /= static_cast<long double>(v.size());
    long double ss = 0.0L;
    for (double x : v) ss += (x - m) * (x - m);
    return std::pair{m, ss};
  };
  const auto [ma, ssa] = moments(a);
  const auto [mb, ssb] = moments(b);
  const long double na = static_cast<long double>(a.size());
  const long double nb = static_cast<long double>(b.size());
  const long double sp2 = (ssa + ssb) / (na + nb - 2);
  TTest out{};
  out.df = static_cast<double>(na + nb - 2);
  out.t = static_cast<double>((ma - mb) / std::sqrt(sp2 * (1 / na + 1 / nb)));
  out.d = static_cast<double>((ma - mb) / std::sqrt(sp2));
  out.p = t_two_sided(out.t, out.df);
  return out;
}

// ---- generators -------------------------------------------------------------

/// Small hand-rolled generator helpers over a seeded engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double mu = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mu, sd)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  /// n x k integer ratings on [lo, hi] with a shared per-row trait, so the
  /// generated alphas spread over a realistic range.
  std::vector<std::vector<double>> ratings(std::size_t n, std::size_t k, int lo, int hi) {
    const double trait_weight = real(0.0, 1.0);
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    for (auto& r : rows) {
      const double trait = normal();
      for (auto& v : r) {
        const double mid = 0.5 * (lo + hi) + trait_weight * trait * (hi - lo) / 4.0 + normal(0.0, 1.0);
        v = std::clamp(static_cast<double>(std::lround(mid)), static_cast<double>(lo), static_cast<double>(hi));
      }
    }
    return rows;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle

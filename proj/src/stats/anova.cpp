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

#include "hprobe/stats/anova.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>

#include "hprobe/error.hpp"
#include "hprobe/stats/distributions.hpp"
#include "hprobe/stats/least_squares.hpp"

namespace hprobe::stats {

std::string_view to_string(SsType t) {
  switch (t) {
    case SsType::I: return "I";
    case SsType::II: return "II";
    case SsType::III: return "III";
  }
  return "?";
}

SsType parse_ss_type(std::string_view s) {
  if (s == "I" || s == "1") return SsType::I;
  if (s == "II" || s == "2") return SsType::II;
  if (s == "III" || s == "3") return SsType::III;
  throw Error(ErrorCode::InvalidConfig, "unknown sums-of-squares type '" + std::string(s) + "'");
}

const AnovaTerm& AnovaTable::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return t;
  }
  throw Error(ErrorCode::InsufficientData, "no ANOVA term named '" + std::string(name) + "'");
}

namespace {

struct Factor {
  std::vector<std::string> levels;  // sorted
  std::vector<std::size_t> index;   // per observation
};

Factor encode(const std::vector<std::string>& labels, std::string_view name) {
  Factor f;
  f.levels = labels;
  std::sort(f.levels.begin(), f.levels.end());
  f.levels.erase(std::unique(f.levels.begin(), f.levels.end()), f.levels.end());
  if (f.levels.size() < 2) {
    throw Error(ErrorCode::SingleLevel, "factor " + std::string(name) + " has fewer than two levels");
  }
  f.index.reserve(labels.size());
  for (const auto& l : labels) {
    f.index.push_back(static_cast<std::size_t>(std::lower_bound(f.levels.begin(), f.levels.end(), l) - f.levels.begin()));
  }
  return f;
}

// Contrast columns for one factor: treatment coding drops the first level,
// sum coding maps the last level to -1 everywhere.
std::vector<std::vector<double>> contrasts(const Factor& f, bool sum_coding) {
  const std::size_t n = f.index.size();
  const std::size_t k = f.levels.size();
  std::vector<std::vector<double>> cols(k - 1, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lvl = f.index[i];
    if (sum_coding) {
      if (lvl == k - 1) {
        for (auto& c : cols) c[i] = -1.0;
      } else {
        cols[lvl][i] = 1.0;
      }
    } else if (lvl > 0) {
      cols[lvl - 1][i] = 1.0;
    }
  }
  return cols;
}

std::vector<std::vector<double>> interaction(const std::vector<std::vector<double>>& a,
                                             const std::vector<std::vector<double>>& b) {
  std::vector<std::vector<double>> out;
  for (const auto& ca : a) {
    for (const auto& cb : b) {
      std::vector<double> c(ca.size());
      for (std::size_t i = 0; i < ca.size(); ++i) c[i] = ca[i] * cb[i];
      out.push_back(std::move(c));
    }
  }
  return out;
}

using Block = std::vector<std::vector<double>>;

double rss_of(std::span<const double> y, std::initializer_list<const Block*> blocks) {
  std::size_t p = 1;
  for (const Block* b : blocks) p += b->size();
  Matrix x(y.size(), p);
  for (std::size_t i = 0; i < y.size(); ++i) x(i, 0) = 1.0;
  std::size_t c = 1;
  for (const Block* b : blocks) {
    for (const auto& col : *b) {
      for (std::size_t i = 0; i < y.size(); ++i) x(i, c) = col[i];
      ++c;
    }
  }
  return least_squares(x, y).rss;
}

AnovaTerm make_term(std::string name, double df, double ss, double ms_res, double df_res) {
  AnovaTerm t;
  t.name = std::move(name);
  t.df = df;
  t.sum_sq = std::max(ss, 0.0);  // differences of nested RSS can dip below zero by rounding
  t.mean_sq = t.sum_sq / df;
  t.f = t.mean_sq / ms_res;
  t.p = f_tail(t.f, df, df_res);
  return t;
}

}  // namespace

AnovaTable two_way_anova(std::span<const double> values,
                         const std::vector<std::string>& factor_a,
                         const std::vector<std::string>& factor_b,
                         std::string_view a_name, std::string_view b_name, SsType type) {
  const std::size_t n = values.size();
  if (factor_a.size() != n || factor_b.size() != n) {
    throw Error(ErrorCode::InsufficientData, "factor labels and values differ in length");
  }
  const Factor fa = encode(factor_a, a_name);
  const Factor fb = encode(factor_b, b_name);
  const std::size_t a = fa.levels.size();
  const std::size_t b = fb.levels.size();

  std::vector<std::size_t> cell_counts(a * b, 0);
  for (std::size_t i = 0; i < n; ++i) ++cell_counts[fa.index[i] * b + fb.index[i]];
  for (std::size_t i = 0; i < a; ++i) {
    for (std::size_t j = 0; j < b; ++j) {
      if (cell_counts[i * b + j] == 0) {
        throw Error(ErrorCode::EmptyCell, "no observations for " + std::string(a_name) + "=" + fa.levels[i] + ", " +
                                              std::string(b_name) + "=" + fb.levels[j]);
      }
    }
  }
  if (n <= a * b) {
    throw Error(ErrorCode::InsufficientData, "no residual degrees of freedom (" + std::to_string(n) +
                                                 " observations, " + std::to_string(a * b) + " cells)");
  }

  const bool sum_coding = type == SsType::III;
  const Block ca = contrasts(fa, sum_coding);
  const Block cb = contrasts(fb, sum_coding);
  const Block cab = interaction(ca, cb);

  const double rss_full = rss_of(values, {&ca, &cb, &cab});
  const double df_res = static_cast<double>(n - a * b);
  const double ms_res = rss_full / df_res;
  if (!(ms_res > 0.0)) throw Error(ErrorCode::InsufficientData, "residual variance is zero");

  double ss_a = 0.0;
  double ss_b = 0.0;
  double ss_ab = 0.0;
  switch (type) {
    case SsType::I: {
      const double rss_0 = rss_of(values, {});
      const double rss_a = rss_of(values, {&ca});
      const double rss_ab_main = rss_of(values, {&ca, &cb});
      ss_a = rss_0 - rss_a;
      ss_b = rss_a - rss_ab_main;
      ss_ab = rss_ab_main - rss_full;
      break;
    }
    case SsType::II: {
      const double rss_a = rss_of(values, {&ca});
      const double rss_b = rss_of(values, {&cb});
      const double rss_main = rss_of(values, {&ca, &cb});
      ss_a = rss_b - rss_main;
      ss_b = rss_a - rss_main;
      ss_ab = rss_main - rss_full;
      break;
    }
    case SsType::III: {
      ss_a = rss_of(values, {&cb, &cab}) - rss_full;
      ss_b = rss_of(values, {&ca, &cab}) - rss_full;
      ss_ab = rss_of(values, {&ca, &cb}) - rss_full;
      break;
    }
  }

  AnovaTable t;
  t.ss_type = type;
  const std::string an(a_name);
  const std::string bn(b_name);
  t.terms.push_back(make_term(an, static_cast<double>(a - 1), ss_a, ms_res, df_res));
  t.terms.push_back(make_term(bn, static_cast<double>(b - 1), ss_b, ms_res, df_res));
  t.terms.push_back(make_term(an + ":" + bn, static_cast<double>((a - 1) * (b - 1)), ss_ab, ms_res, df_res));
  t.residual = {df_res, rss_full};
  return t;
}

AnovaTable one_way_anova(std::span<const double> values, const std::vector<std::string>& groups,
                         std::string_view name) {
  const std::size_t n = values.size();
  if (groups.size() != n) throw Error(ErrorCode::InsufficientData, "group labels and values differ in length");
  const Factor f = encode(groups, name);
  const std::size_t k = f.levels.size();
  if (n <= k) throw Error(ErrorCode::InsufficientData, "no residual degrees of freedom");
  const Block c = contrasts(f, false);
  const double rss_full = rss_of(values, {&c});
  const double rss_0 = rss_of(values, {});
  const double df_res = static_cast<double>(n - k);
  const double ms_res = rss_full / df_res;
  if (!(ms_res > 0.0)) throw Error(ErrorCode::InsufficientData, "residual variance is zero");
  AnovaTable t;
  t.ss_type = SsType::I;
  t.terms.push_back(make_term(std::string(name), static_cast<double>(k - 1), rss_0 - rss_full, ms_res, df_res));
  t.residual = {df_res, rss_full};
  return t;
}

}  // namespace hprobe::stats

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


#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "hprobe/error.hpp"
#include "hprobe/stats/anova.hpp"
#include "hprobe/stats/descriptive.hpp"
#include "hprobe/stats/distributions.hpp"
#include "hprobe/stats/least_squares.hpp"
#include "hprobe/stats/ols.hpp"
#include "hprobe/stats/reliability.hpp"
#include "hprobe/stats/ttest.hpp"
#include "oracles.hpp"

using namespace hprobe;
using namespace hprobe::stats;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an hprobe::Error";
  return ErrorCode::DomainError;
}

RatingMatrix matrix(const std::vector<std::vector<double>>& rows) {
  RatingMatrix m;
  for (std::size_t j = 0; j < rows.front().size(); ++j) m.item_ids.push_back("i" + std::to_string(j));
  m.rows = rows;
  return m;
}

}  // namespace

// ---- distributions ----------------------------------------------------------

TEST(Distributions, TTailAtZeroIsHalf) {
  for (double df : {1.0, 2.5, 10.0, 300.0}) EXPECT_DOUBLE_EQ(t_tail(0.0, df), 0.5);
}

TEST(Distributions, FTailOneOneOne) { EXPECT_NEAR(f_tail(1.0, 1.0, 1.0), oracle::f_upper(1.0, 1.0, 1.0), 1e-10); }

TEST(Distributions, ReportedTwentyTwoDfStatisticIsBelowOnePerMille) {
  EXPECT_LT(2.0 * t_tail(5.49, 22.0), 0.001);
}

TEST(Distributions, IncompleteBetaGrid) {
  for (double a : {0.5, 1.0, 2.5, 11.0, 60.0}) {
    for (double b : {0.5, 1.0, 3.0, 15.0, 45.0}) {
      for (double x : {0.0, 1e-6, 0.05, 0.3, 0.5, 0.77, 0.999, 1.0}) {
        EXPECT_NEAR(incomplete_beta(a, b, x), oracle::ibeta(a, b, x), 1e-10) << a << ' ' << b << ' ' << x;
        EXPECT_NEAR(incomplete_beta_complement(a, b, x), 1.0 - oracle::ibeta(a, b, x), 1e-10);
      }
    }
  }
}

TEST(Distributions, TailsAgainstWideOracle) {
  oracle::Gen g(11);
  for (int i = 0; i < 400; ++i) {
    const double df = g.integer(1, 200) + (i % 3 == 0 ? 0.5 : 0.0);
    const double t = g.real(-12.0, 12.0);
    EXPECT_NEAR(t_tail(t, df), oracle::t_upper(t, df), 1e-10) << t << ' ' << df;
    EXPECT_NEAR(t_two_sided(t, df), oracle::t_two_sided(t, df), 1e-10);
    const double f = g.real(0.0, 30.0);
    const double d1 = g.integer(1, 40);
    const double d2 = g.integer(1, 200);
    EXPECT_NEAR(f_tail(f, d1, d2), oracle::f_upper(f, d1, d2), 1e-10) << f << ' ' << d1 << ' ' << d2;
  }
}

TEST(Distributions, SymmetryAndLimits) {
  EXPECT_NEAR(t_tail(2.0, 7.0) + t_tail(-2.0, 7.0), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(f_tail(0.0, 3.0, 9.0), 1.0);
  EXPECT_DOUBLE_EQ(f_tail(std::numeric_limits<double>::infinity(), 3.0, 9.0), 0.0);
  EXPECT_DOUBLE_EQ(t_two_sided(std::numeric_limits<double>::infinity(), 4.0), 0.0);
  EXPECT_NEAR(t_two_sided(1.959963984540054, std::numeric_limits<double>::infinity()), 0.05, 1e-12);
}

TEST(Distributions, DomainErrors) {
  EXPECT_EQ(code_of([] { f_tail(-1.0, 1.0, 1.0); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { t_tail(1.0, 0.0); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { t_tail(std::nan(""), 3.0); }), ErrorCode::DomainError);
  EXPECT_EQ(code_of([] { incomplete_beta(1.0, 1.0, 1.5); }), ErrorCode::DomainError);
}

// ---- descriptive ------------------------------------------------------------

TEST(Standardize, SymmetricCase) {
  const std::vector<double> xs{1, 2, 3};
  const auto z = standardize(xs);
  EXPECT_DOUBLE_EQ(z[0], -1.0);
  EXPECT_DOUBLE_EQ(z[1], 0.0);
  EXPECT_DOUBLE_EQ(z[2], 1.0);
}

TEST(Standardize, ConstantColumnIsAnError) {
  const std::vector<double> xs{5, 5, 5};
  EXPECT_EQ(code_of([&] { standardize(xs); }), ErrorCode::ZeroVariance);
  const std::vector<double> one{4};
  EXPECT_EQ(code_of([&] { standardize(one); }), ErrorCode::InsufficientData);
}

TEST(Standardize, RandomColumnsHaveUnitMoments) {
  oracle::Gen g(5);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> xs(static_cast<std::size_t>(g.integer(2, 80)));
    for (auto& x : xs) x = g.normal(g.real(-50, 50), g.real(0.1, 20));
    const auto z = standardize(xs);
    long double m = 0.0L;
    for (double v : z) m += v;
    m /= static_cast<long double>(z.size());
    long double ss = 0.0L;
    for (double v : z) ss += (v - m) * (v - m);
    EXPECT_NEAR(static_cast<double>(m), 0.0, 1e-12);
    EXPECT_NEAR(static_cast<double>(std::sqrt(ss / static_cast<long double>(z.size() - 1))), 1.0, 1e-12);
  }
}

// ---- reliability ------------------------------------------------------------

TEST(CronbachAlpha, PerfectlyCorrelatedItems) {
  const auto s = cronbach_alpha(matrix({{1, 1}, {2, 2}, {3, 3}}));
  ASSERT_TRUE(s.defined());
  EXPECT_DOUBLE_EQ(*s.alpha, 1.0);
  EXPECT_EQ(s.k, 2u);
  EXPECT_EQ(s.n, 3u);
}

TEST(CronbachAlpha, SmallFixtureMatchesOracle) {
  const std::vector<std::vector<double>> rows{{3, 4, 2}, {5, 5, 4}, {1, 2, 2}, {4, 3, 5}};
  EXPECT_NEAR(*cronbach_alpha(matrix(rows)).alpha, oracle::cronbach_alpha(rows), 1e-10);
}

TEST(CronbachAlpha, IdenticalAnswersAreUndefined) {
  const auto s = cronbach_alpha(matrix({{3, 3, 3}, {3, 3, 3}, {3, 3, 3}}));
  EXPECT_FALSE(s.defined());
  EXPECT_EQ(s.zero_variance_items, (std::vector<std::string>{"i0", "i1", "i2"}));
}

TEST(CronbachAlpha, ZeroVarianceItemIsListedButAlphaDefined) {
  const auto s = cronbach_alpha(matrix({{1, 4}, {2, 4}, {3, 4}}));
  ASSERT_TRUE(s.defined());
  EXPECT_EQ(s.zero_variance_items, std::vector<std::string>{"i1"});
  EXPECT_DOUBLE_EQ(*s.alpha, 0.0);
}

TEST(CronbachAlpha, ShapeErrors) {
  EXPECT_EQ(code_of([] { cronbach_alpha(matrix({{1}, {2}})); }), ErrorCode::TooFewItems);
  EXPECT_EQ(code_of([] { cronbach_alpha(matrix({{1, 2}})); }), ErrorCode::TooFewRuns);
}

TEST(CronbachAlpha, RandomFixturesMatchOracle) {
  oracle::Gen g(21);
  for (int rep = 0; rep < 300; ++rep) {
    const auto rows = g.ratings(static_cast<std::size_t>(g.integer(2, 60)), static_cast<std::size_t>(g.integer(2, 12)), 0, 5);
    const double expected = oracle::cronbach_alpha(rows);
    const auto s = cronbach_alpha(matrix(rows));
    if (std::isnan(expected)) {
      EXPECT_FALSE(s.defined());
    } else {
      ASSERT_TRUE(s.defined());
      EXPECT_NEAR(*s.alpha, expected, 1e-10);
      EXPECT_LE(*s.alpha, 1.0 + 1e-12);
    }
  }
}

TEST(CronbachAlpha, InvariantUnderAffineRescaling) {
  oracle::Gen g(22);
  for (int rep = 0; rep < 200; ++rep) {
    auto rows = g.ratings(30, 6, 1, 5);
    const auto base = cronbach_alpha(matrix(rows));
    if (!base.defined()) continue;
    const double shift = g.real(-10, 10);
    const double scale = g.real(0.1, 10);
    for (auto& r : rows) {
      for (auto& v : r) v = v * scale + shift;
    }
    EXPECT_NEAR(*cronbach_alpha(matrix(rows)).alpha, *base.alpha, 1e-10);
  }
}

// ---- least squares / OLS ----------------------------------------------------

TEST(Ols, ExactFitOnSinglePredictor) {
  const std::vector<double> x{1, 2, 3, 4, 5, 7};
  const auto r = ols({"x"}, {x}, x);
  EXPECT_NEAR(r.predictors[0].coef, 1.0, 1e-12);
  EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(r.intercept.coef, 0.0, 1e-12);
}

TEST(Ols, RandomFixturesMatchNormalEquations) {
  oracle::Gen g(31);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 30;
    std::vector<std::vector<double>> cols(5, std::vector<double>(n));
    std::vector<double> y(n);
    for (auto& c : cols) {
      for (auto& v : c) v = g.normal();
    }
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = g.normal(0.0, 1.0);
      for (std::size_t j = 0; j < 5; ++j) y[i] += 0.3 * static_cast<double>(j) * cols[j][i];
    }
    const auto r = ols({"a", "b", "c", "d", "e"}, cols, y);
    const auto o = oracle::ols(cols, y);
    EXPECT_NEAR(r.intercept.coef, o.beta[0], 1e-8);
    EXPECT_NEAR(r.intercept.std_err, o.se[0], 1e-8);
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_NEAR(r.predictors[j].coef, o.beta[j + 1], 1e-8);
      EXPECT_NEAR(r.predictors[j].std_err, o.se[j + 1], 1e-8);
      EXPECT_NEAR(r.predictors[j].p, oracle::t_two_sided(o.beta[j + 1] / o.se[j + 1], 24.0), 1e-8);
    }
    EXPECT_NEAR(r.r_squared, o.r_squared, 1e-8);
    EXPECT_NEAR(r.adj_r_squared, o.adj_r_squared, 1e-8);
    EXPECT_LE(r.adj_r_squared, r.r_squared);
    EXPECT_DOUBLE_EQ(r.df_residual, 24.0);
  }
}

TEST(Ols, StandardizedInputsGiveZeroInterceptAndAffineInvariantRSquared) {
  oracle::Gen g(32);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 40;
    std::vector<std::vector<double>> cols(3, std::vector<double>(n));
    std::vector<double> y(n);
    for (auto& c : cols) {
      for (auto& v : c) v = g.normal(3.0, 2.0);
    }
    for (std::size_t i = 0; i < n; ++i) y[i] = cols[0][i] - cols[2][i] + g.normal(0, 2);
    std::vector<std::vector<double>> z;
    for (const auto& c : cols) z.push_back(standardize(c));
    const auto r = ols({"a", "b", "c"}, z, standardize(y));
    EXPECT_LT(std::fabs(r.intercept.coef), 1e-10);
    std::vector<double> y2 = y;
    for (auto& v : y2) v = 4.0 * v - 17.0;
    EXPECT_NEAR(ols({"a", "b", "c"}, cols, y2).r_squared, ols({"a", "b", "c"}, cols, y).r_squared, 1e-10);
  }
}

TEST(Ols, StarsFollowThresholds) {
  EXPECT_EQ(significance_stars(0.009), "***");
  EXPECT_EQ(significance_stars(0.01), "**");
  EXPECT_EQ(significance_stars(0.049), "**");
  EXPECT_EQ(significance_stars(0.05), "*");
  EXPECT_EQ(significance_stars(0.099), "*");
  EXPECT_EQ(significance_stars(0.1), "");
}

TEST(Ols, Errors) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> twice{2, 4, 6, 8, 10};
  const std::vector<double> y{1, 3, 2, 5, 4};
  EXPECT_EQ(code_of([&] { ols({"x", "x2"}, {x, twice}, y); }), ErrorCode::RankDeficient);
  EXPECT_EQ(code_of([&] { ols({"a", "b", "c", "d"}, {x, y, twice, x}, y); }), ErrorCode::InsufficientData);
  const std::vector<double> flat{2, 2, 2, 2, 2};
  EXPECT_EQ(code_of([&] { ols({"x"}, {x}, flat); }), ErrorCode::ZeroVariance);
  EXPECT_EQ(code_of([&] { ols({"c"}, {flat}, y); }), ErrorCode::RankDeficient);
}

TEST(Ols, RankErrorNamesThePredictor) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const std::vector<double> w{0, 1, 0, 1, 0, 1};
  const std::vector<double> sum{1, 3, 3, 5, 5, 7};
  const std::vector<double> y{1, 3, 2, 5, 4, 4};
  try {
    ols({"x", "w", "sum"}, {x, w, sum}, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("sum"), std::string::npos);
  }
}

TEST(LeastSquares, InverseGramMatchesDirectInverse) {
  Matrix x(4, 2);
  const double data[4][2] = {{1, 1}, {1, 2}, {1, 4}, {1, 7}};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 2; ++j) x(i, j) = data[i][j];
  }
  const std::vector<double> y{1, 2, 3, 4};
  const auto g = inverse_gram(least_squares(x, y));
  // X'X = [[4, 14], [14, 70]], det 84.
  EXPECT_NEAR(g(0, 0), 70.0 / 84.0, 1e-14);
  EXPECT_NEAR(g(0, 1), -14.0 / 84.0, 1e-14);
  EXPECT_NEAR(g(1, 1), 4.0 / 84.0, 1e-14);
}

// ---- ANOVA ------------------------------------------------------------------

namespace {

struct Long {
  std::vector<double> y;
  std::vector<std::string> a;
  std::vector<std::string> b;
};

Long flatten(const std::vector<std::vector<std::vector<double>>>& cells) {
  Long l;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < cells[i].size(); ++j) {
      for (double v : cells[i][j]) {
        l.y.push_back(v);
        l.a.push_back("a" + std::to_string(i));
        l.b.push_back("b" + std::to_string(j));
      }
    }
  }
  return l;
}

}  // namespace

TEST(Anova, TextbookTwoByTwo) {
  const std::vector<std::vector<std::vector<double>>> cells{{{4, 5, 6}, {7, 9, 8}}, {{3, 4, 2}, {10, 12, 11}}};
  const auto l = flatten(cells);
  const auto t = two_way_anova(l.y, l.a, l.b);
  const auto o = oracle::balanced_two_way(cells);
  EXPECT_NEAR(t.term("A").sum_sq, o.ss_a, 1e-8);
  EXPECT_NEAR(t.term("B").sum_sq, o.ss_b, 1e-8);
  EXPECT_NEAR(t.term("A:B").sum_sq, o.ss_ab, 1e-8);
  EXPECT_NEAR(t.residual.sum_sq, o.ss_e, 1e-8);
  EXPECT_NEAR(t.term("B").f, o.f_b, 1e-8);
  EXPECT_DOUBLE_EQ(t.residual.df, 8.0);
}

TEST(Anova, LayoutOfThreeAgentsByTwelveAlphas) {
  oracle::Gen g(41);
  std::vector<double> y;
  std::vector<std::string> agent;
  std::vector<std::string> instrument;
  for (const char* ag : {"g", "c", "l"}) {
    for (int k = 0; k < 12; ++k) {
      y.push_back(g.real(0.2, 0.95));
      agent.emplace_back(ag);
      instrument.emplace_back(k < 5 ? "MFQ" : "MFV");
    }
  }
  const auto t = two_way_anova(y, agent, instrument, "Agent", "Instrument");
  EXPECT_DOUBLE_EQ(t.term("Instrument").df, 1.0);
  EXPECT_DOUBLE_EQ(t.term("Agent").df, 2.0);
  EXPECT_DOUBLE_EQ(t.term("Agent:Instrument").df, 2.0);
  EXPECT_DOUBLE_EQ(t.residual.df, 30.0);
}

TEST(Anova, BalancedTypesAgree) {
  oracle::Gen g(42);
  for (int rep = 0; rep < 100; ++rep) {
    const int a = g.integer(2, 4);
    const int b = g.integer(2, 4);
    const int r = g.integer(2, 5);
    std::vector<std::vector<std::vector<double>>> cells(a, std::vector<std::vector<double>>(b));
    for (auto& row : cells) {
      for (auto& cell : row) {
        const double mu = g.normal(0, 2);
        for (int k = 0; k < r; ++k) cell.push_back(mu + g.normal());
      }
    }
    const auto l = flatten(cells);
    const auto t1 = two_way_anova(l.y, l.a, l.b, "A", "B", SsType::I);
    const auto t2 = two_way_anova(l.y, l.a, l.b, "A", "B", SsType::II);
    const auto t3 = two_way_anova(l.y, l.a, l.b, "A", "B", SsType::III);
    for (const char* term : {"A", "B", "A:B"}) {
      EXPECT_NEAR(t2.term(term).sum_sq, t1.term(term).sum_sq, 1e-8);
      EXPECT_NEAR(t3.term(term).sum_sq, t2.term(term).sum_sq, 1e-8);
    }
  }
}

TEST(Anova, UnbalancedTypeTwoDiffersFromSequentialForFirstFactor) {
  const std::vector<double> y{1, 2, 3, 4, 6, 5, 9, 8, 2, 7, 8};
  const std::vector<std::string> a{"x", "x", "x", "x", "y", "y", "y", "y", "y", "y", "y"};
  const std::vector<std::string> b{"p", "p", "q", "q", "p", "q", "q", "q", "p", "q", "p"};
  const auto t1 = two_way_anova(y, a, b, "A", "B", SsType::I);
  const auto t2 = two_way_anova(y, a, b, "A", "B", SsType::II);
  EXPECT_NEAR(t1.term("B").sum_sq, t2.term("B").sum_sq, 1e-10);
  EXPECT_GT(std::fabs(t1.term("A").sum_sq - t2.term("A").sum_sq), 1e-6);
  EXPECT_NEAR(t1.term("A:B").sum_sq, t2.term("A:B").sum_sq, 1e-10);
}

TEST(Anova, Preconditions) {
  const std::vector<double> y{1, 2, 3, 4};
  EXPECT_EQ(code_of([&] { two_way_anova(y, {"a", "b", "a", "b"}, {"x", "x", "x", "x"}); }), ErrorCode::SingleLevel);
  EXPECT_EQ(code_of([&] { two_way_anova(y, {"a", "a", "b", "b"}, {"x", "y", "x", "x"}); }), ErrorCode::EmptyCell);
  EXPECT_EQ(code_of([&] { two_way_anova(y, {"a", "a", "b", "b"}, {"x", "y", "x", "y"}); }),
            ErrorCode::InsufficientData);
}

TEST(Anova, TwoGroupFEqualsTSquared) {
  oracle::Gen g(43);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(static_cast<std::size_t>(g.integer(2, 20)));
    std::vector<double> b(static_cast<std::size_t>(g.integer(2, 20)));
    for (auto& v : a) v = g.normal(0.5, 1);
    for (auto& v : b) v = g.normal(0, 1);
    std::vector<double> y = a;
    y.insert(y.end(), b.begin(), b.end());
    std::vector<std::string> groups(a.size(), "a");
    groups.insert(groups.end(), b.size(), "b");
    const auto table = one_way_anova(y, groups);
    const auto t = students_t(a, b);
    EXPECT_NEAR(table.terms[0].f, t.t * t.t, 1e-8 * std::max(1.0, t.t * t.t));
    EXPECT_NEAR(table.terms[0].p, t.p, 1e-8);
  }
}

TEST(Anova, DeterministicBitForBit) {
  const std::vector<double> y{1, 2.5, 3, 4, 6, 5, 9, 8.25, 2, 7};
  const std::vector<std::string> a{"x", "x", "x", "x", "y", "y", "y", "y", "y", "x"};
  const std::vector<std::string> b{"p", "p", "q", "q", "p", "q", "q", "q", "p", "q"};
  const auto t1 = two_way_anova(y, a, b);
  const auto t2 = two_way_anova(y, a, b);
  for (std::size_t i = 0; i < t1.terms.size(); ++i) {
    EXPECT_EQ(t1.terms[i].sum_sq, t2.terms[i].sum_sq);
    EXPECT_EQ(t1.terms[i].p, t2.terms[i].p);
  }
}

// ---- t-test -----------------------------------------------------------------

TEST(StudentsT, IdenticalSamples) {
  const std::vector<double> a{0.6, 0.7, 0.8, 0.75};
  const auto r = students_t(a, a);
  EXPECT_DOUBLE_EQ(r.t, 0.0);
  EXPECT_DOUBLE_EQ(r.cohens_d, 0.0);
  EXPECT_DOUBLE_EQ(r.p, 1.0);
  EXPECT_DOUBLE_EQ(cohens_d(a, a).d, 0.0);
}

TEST(StudentsT, TwelveVersusTwelveHasTwentyTwoDf) {
  std::vector<double> a(12);
  std::vector<double> b(12);
  std::iota(a.begin(), a.end(), 0.0);
  std::iota(b.begin(), b.end(), 0.5);
  EXPECT_DOUBLE_EQ(students_t(a, b).df, 22.0);
}

TEST(StudentsT, KnownFixture) {
  // Means 3 and 5, both sample variances 2.5, pooled sd sqrt(2.5).
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{3, 4, 5, 6, 7};
  const auto r = students_t(a, b);
  EXPECT_NEAR(r.t, -2.0 / std::sqrt(2.5 * 0.4), 1e-12);
  EXPECT_NEAR(r.cohens_d, -2.0 / std::sqrt(2.5), 1e-12);
  EXPECT_DOUBLE_EQ(r.df, 8.0);
}

TEST(StudentsT, RandomFixturesMatchOracle) {
  oracle::Gen g(51);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> a(static_cast<std::size_t>(g.integer(2, 30)));
    std::vector<double> b(static_cast<std::size_t>(g.integer(2, 30)));
    for (auto& v : a) v = g.normal(g.real(-1, 1), g.real(0.1, 3));
    for (auto& v : b) v = g.normal(g.real(-1, 1), g.real(0.1, 3));
    const auto r = students_t(a, b);
    const auto o = oracle::pooled_t(a, b);
    EXPECT_NEAR(r.t, o.t, 1e-8);
    EXPECT_NEAR(r.p, o.p, 1e-8);
    EXPECT_NEAR(r.cohens_d, o.d, 1e-8);
    EXPECT_NEAR(cohens_d(a, b).d, o.d, 1e-8);
  }
}

TEST(StudentsT, ZeroSpreadWithDifferentMeans) {
  const std::vector<double> a{1, 1, 1};
  const std::vector<double> b{2, 2};
  const auto r = students_t(a, b);
  EXPECT_TRUE(std::isinf(r.t));
  EXPECT_LT(r.t, 0.0);
  EXPECT_DOUBLE_EQ(r.p, 0.0);
}

TEST(StudentsT, TooFewSamples) {
  const std::vector<double> a{1};
  const std::vector<double> b{2, 3};
  EXPECT_EQ(code_of([&] { students_t(a, b); }), ErrorCode::TooFewSamples);
  EXPECT_EQ(code_of([&] { cohens_d(b, a); }), ErrorCode::TooFewSamples);
}

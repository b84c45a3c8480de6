// Copyright 2026 The gsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsp/population_metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "test_util.hpp"

namespace gsp {
namespace {

CrossEvaluationMatrix RandomCross(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.Uniform() - 0.5;
  return CrossEvaluationMatrix(m);
}

// Value of a 2 x n zero-sum game by exact search over the row mixing
// probability: the lower envelope min_j(p a0j + (1-p) a1j) is concave and
// piecewise linear, so its maximum sits at an endpoint or a crossing.
double TwoRowValueOracle(const CrossEvaluationMatrix& a) {
  std::vector<double> candidates{0.0, 1.0};
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t k = j + 1; k < a.cols(); ++k) {
      const double dj = a(0, j) - a(1, j), dk = a(0, k) - a(1, k);
      if (dj == dk) continue;
      const double p = (a(1, k) - a(1, j)) / (dj - dk);
      if (p > 0.0 && p < 1.0) candidates.push_back(p);
    }
  double best = -std::numeric_limits<double>::infinity();
  for (double p : candidates) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::min(worst, p * a(0, j) + (1.0 - p) * a(1, j));
    best = std::max(best, worst);
  }
  return best;
}

TEST(RelativePopulationPerformance, SelfComparisonIsZero) {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = testing::RandomEvaluation(1 + rng.UniformInt(12), rng, trial % 2 ? 30 : 0);
    EXPECT_NEAR(RelativePopulationPerformance(CrossEvaluationMatrix::FromSquare(a)).value, 0.0,
                1e-9);
  }
}

TEST(RelativePopulationPerformance, SingleOption) {
  auto r = RelativePopulationPerformance(CrossEvaluationMatrix(DenseMatrix{{0.3}}));
  EXPECT_NEAR(r.value, 0.3, 1e-12);
  EXPECT_EQ(r.nash_row[0], 1.0);
  EXPECT_EQ(r.nash_col[0], 1.0);
}

TEST(RelativePopulationPerformance, ConstantMatrix) {
  CrossEvaluationMatrix a(DenseMatrix{{0.2, 0.2}, {0.2, 0.2}});
  // Every strategy pair is an equilibrium; enumerate pure pairs.
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(a(i, j), 0.2);
  EXPECT_NEAR(RelativePopulationPerformance(a).value, 0.2, 1e-12);
}

TEST(RelativePopulationPerformance, MatchesTwoRowOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = RandomCross(2, 1 + rng.UniformInt(6), rng);
    EXPECT_NEAR(RelativePopulationPerformance(a).value, TwoRowValueOracle(a), 1e-9);
  }
}

TEST(RelativePopulationPerformance, StrategiesAreEquilibrium) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = RandomCross(1 + rng.UniformInt(15), 1 + rng.UniformInt(15), rng);
    auto r = RelativePopulationPerformance(a);
    double recomputed = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        recomputed += r.nash_row[i] * a(i, j) * r.nash_col[j];
    EXPECT_NEAR(r.value, recomputed, 1e-9);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double col_payoff = 0.0;
      for (std::size_t i = 0; i < a.rows(); ++i) col_payoff += r.nash_row[i] * a(i, j);
      EXPECT_GE(col_payoff, r.value - 1e-9);
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double row_payoff = 0.0;
      for (std::size_t j = 0; j < a.cols(); ++j) row_payoff += a(i, j) * r.nash_col[j];
      EXPECT_LE(row_payoff, r.value + 1e-9);
    }
    auto [lo, hi] = std::minmax_element(a.values().data().begin(), a.values().data().end());
    EXPECT_GE(r.value, *lo - 1e-12);
    EXPECT_LE(r.value, *hi + 1e-12);
  }
}

TEST(RelativePopulationPerformance, SwappingPopulationsNegates) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = RandomCross(1 + rng.UniformInt(10), 1 + rng.UniformInt(10), rng);
    EXPECT_NEAR(RelativePopulationPerformance(a).value,
                -RelativePopulationPerformance(a.Swapped()).value, 2e-9);
  }
}

TEST(RppEvolution, IdenticalPopulationsAreZero) {
  Rng rng(5);
  auto a = testing::RandomEvaluation(20, rng, 30);
  for (double v : RppEvolution(CrossEvaluationMatrix::FromSquare(a))) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(RppEvolution, MatchesIndependentPerSubmatrixSolves) {
  Rng rng(6);
  auto a = RandomCross(3, 3, rng);
  auto evo = RppEvolution(a);
  ASSERT_EQ(evo.size(), 3u);
  for (std::size_t k = 1; k <= 3; ++k) {
    DenseMatrix block(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) block(i, j) = a(i, j);
    EXPECT_EQ(evo[k - 1], RelativePopulationPerformance(CrossEvaluationMatrix(block)).value);
  }
  EXPECT_EQ(evo[0], a(0, 0));
  EXPECT_NEAR(evo[2], RelativePopulationPerformance(a).value, 0.0);
  auto two = Submatrix(a, 2);
  EXPECT_NEAR(evo[1], TwoRowValueOracle(two), 1e-9);
}

TEST(RppEvolution, DependsOnlyOnLeadingBlock) {
  Rng rng(7);
  auto a = RandomCross(8, 8, rng);
  auto base = RppEvolution(a);
  for (std::size_t k = 1; k <= 8; ++k) {
    DenseMatrix m = a.values();
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j)
        if (i >= k || j >= k) m(i, j) = rng.Uniform() - 0.5;
    EXPECT_EQ(RppEvolution(CrossEvaluationMatrix(m))[k - 1], base[k - 1]);
  }
}

TEST(RppEvolution, RejectsUnequalPopulations) {
  Rng rng(8);
  EXPECT_THROW(RppEvolution(RandomCross(3, 4, rng)), MetagameError);
}

TEST(RppEvolution, CsvFormat) {
  EXPECT_EQ(RppEvolutionCsv({0.0, -0.125, 1.0 / 3}),
            "index,value\n1,0.000000\n2,-0.125000\n3,0.333333\n");
}

}  // namespace
}  // namespace gsp

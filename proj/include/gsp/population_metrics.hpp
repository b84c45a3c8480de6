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

// Relative population performance: the Nash value of the zero-sum game
// between two populations, and how it evolves as both populations grow
// checkpoint by checkpoint.

#ifndef GSP_POPULATION_METRICS_HPP_
#define GSP_POPULATION_METRICS_HPP_

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "gsp/csv.hpp"
#include "gsp/detail/simplex.hpp"
#include "gsp/metagame.hpp"
#include "gsp/nash.hpp"

namespace gsp {

struct RppResult {
  double value = 0.0;  // positive: row population wins on average
  MixedStrategy nash_row;
  MixedStrategy nash_col;
  std::size_t pivots = 0;
};

// Solves the zero-sum game with payoff `a` to the row player.
//
// Shifting the payoff to B = A - min(A) + 1 > 0 turns the column player's
// problem into  max sum(y)  s.t.  B y <= 1, y >= 0,  whose optimum is
// 1/value(B). The row player's equilibrium strategy is the normalized dual.
inline RppResult SolveZeroSumGame(const CrossEvaluationMatrix& a,
                                  std::size_t max_pivots = 1'000'000) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  double lo = a(0, 0);
  for (double v : a.values().data()) lo = std::min(lo, v);
  DenseMatrix shifted(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) shifted(i, j) = a(i, j) - lo + 1.0;

  auto lp = detail::SolveCanonicalLp(shifted, std::vector<double>(rows, 1.0),
                                     std::vector<double>(cols, 1.0), max_pivots);
  if (lp.status != detail::LpStatus::kOptimal)
    throw NashError("zero-sum solver did not reach an optimum");

  auto normalize = [](std::vector<double> v) {
    double total = 0.0;
    for (double& p : v) {
      p = std::max(0.0, p);
      total += p;
    }
    if (!(total > 0.0)) throw NashError("zero-sum solver returned an empty strategy");
    for (double& p : v) p /= total;
    return MixedStrategy(std::move(v));
  };

  RppResult r;
  r.nash_col = normalize(lp.x);
  r.nash_row = normalize(lp.duals);
  r.pivots = lp.pivots;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) r.value += r.nash_row[i] * a(i, j) * r.nash_col[j];
  return r;
}

inline RppResult RelativePopulationPerformance(const CrossEvaluationMatrix& a) {
  return SolveZeroSumGame(a);
}

// Element i (0-based) is the relative population performance of the
// leading (i+1) x (i+1) block, i.e. both populations truncated to their
// first i+1 checkpoints. The full matrix is estimated once and sliced.
inline std::vector<double> RppEvolution(const CrossEvaluationMatrix& a) {
  if (a.rows() != a.cols())
    throw MetagameError("rpp evolution needs equally sized populations, got " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  std::vector<double> out;
  out.reserve(a.rows());
  for (std::size_t k = 1; k <= a.rows(); ++k) {
    try {
      out.push_back(RelativePopulationPerformance(Submatrix(a, k)).value);
    } catch (const NashError& e) {
      throw NashError("rpp evolution at i=" + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

// "index,value" with a header row; index is 1-based (population size).
inline std::string RppEvolutionCsv(const std::vector<double>& evolution) {
  std::string out = "index,value\n";
  for (std::size_t i = 0; i < evolution.size(); ++i)
    out += std::to_string(i + 1) + "," + Fixed6(evolution[i]) + "\n";
  return out;
}

}  // namespace gsp

#endif  // GSP_POPULATION_METRICS_HPP_

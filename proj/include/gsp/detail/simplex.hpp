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

// Dense tableau simplex for
//
//     maximize c.x  subject to  M x <= b,  x >= 0,  with b >= 0.
//
// The origin is always feasible, so no phase one is needed. Dantzig pricing
// switches to Bland's rule after a run of degenerate pivots; the matrix
// games fed to it are highly degenerate (many zero right-hand sides).

#ifndef GSP_DETAIL_SIMPLEX_HPP_
#define GSP_DETAIL_SIMPLEX_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gsp/matrix.hpp"

namespace gsp::detail {

enum class LpStatus { kOptimal, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;      // primal, size = number of structural columns
  std::vector<double> duals;  // one per constraint row
  double objective = 0.0;
  std::size_t pivots = 0;
};

inline LpResult SolveCanonicalLp(const DenseMatrix& m, const std::vector<double>& b,
                                 const std::vector<double>& c, std::size_t max_pivots) {
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  if (b.size() != rows || c.size() != n) throw std::invalid_argument("lp: dimension mismatch");
  for (double v : b)
    if (v < 0.0) throw std::invalid_argument("lp: right-hand side must be nonnegative");

  constexpr double kEnterEps = 1e-10;
  // A column priced below this with no pivot row is roundoff, not a ray.
  constexpr double kSpuriousRayEps = 1e-7;
  constexpr double kPivotEps = 1e-9;
  constexpr std::size_t kDegenerateRunBeforeBland = 50;

  const std::size_t width = n + rows + 1;  // structural | slack | rhs
  std::vector<double> tab(rows * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return tab[i * width + j]; };
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = m(i, j);
    at(i, n + i) = 1.0;
    at(i, width - 1) = b[i];
  }
  // reduced[j] = c_j - c_B B^-1 a_j; objective value tracked separately.
  std::vector<double> reduced(n + rows, 0.0);
  for (std::size_t j = 0; j < n; ++j) reduced[j] = c[j];
  double objective = 0.0;
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = n + i;

  LpResult result;
  std::size_t degenerate_run = 0;
  while (true) {
    const bool bland = degenerate_run >= kDegenerateRunBeforeBland;
    std::size_t enter = n + rows;
    double best = kEnterEps;
    for (std::size_t j = 0; j < n + rows; ++j) {
      if (reduced[j] > best) {
        enter = j;
        if (bland) break;
        best = reduced[j];
      }
    }
    if (enter == n + rows) {
      result.status = LpStatus::kOptimal;
      break;
    }
    if (result.pivots >= max_pivots) {
      result.status = LpStatus::kIterationLimit;
      break;
    }
    std::size_t leave = rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      double a = at(i, enter);
      if (a <= kPivotEps) continue;
      double ratio = at(i, width - 1) / a;
      if (ratio < best_ratio - 1e-14 ||
          (ratio <= best_ratio + 1e-14 && leave < rows && basis[i] < basis[leave])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave == rows) {
      if (reduced[enter] < kSpuriousRayEps) {
        reduced[enter] = 0.0;
        continue;
      }
      result.status = LpStatus::kUnbounded;
      break;
    }
    degenerate_run = best_ratio <= 1e-14 ? degenerate_run + 1 : 0;

    const double piv = at(leave, enter);
    for (std::size_t j = 0; j < width; ++j) at(leave, j) /= piv;
    at(leave, enter) = 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(leave, j);
      at(i, enter) = 0.0;
      if (at(i, width - 1) < 0.0 && at(i, width - 1) > -1e-12) at(i, width - 1) = 0.0;
    }
    const double f = reduced[enter];
    for (std::size_t j = 0; j < n + rows; ++j) reduced[j] -= f * at(leave, j);
    reduced[enter] = 0.0;
    objective += f * at(leave, width - 1);
    basis[leave] = enter;
    ++result.pivots;
  }

  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] < n) result.x[basis[i]] = at(i, width - 1);
  result.duals.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) result.duals[i] = -reduced[n + i];
  result.objective = objective;
  return result;
}

}  // namespace gsp::detail

#endif  // GSP_DETAIL_SIMPLEX_HPP_

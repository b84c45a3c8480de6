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

// Maximum-entropy Nash equilibria of symmetric zero-sum games.
//
// For an antisymmetric payoff A the game value is 0, and the symmetric
// equilibria are exactly the polytope
//
//     P = { x in simplex : (A x)_j <= 0 for every pure strategy j },
//
// where (A x)_j is what pure strategy j earns against x. MaxentNash returns
// the unique entropy maximizer on P in two phases:
//
//   1. One LP over the cone {u >= 0 : A u <= 0} finds a strictly
//      complementary equilibrium: its support is the union of all
//      equilibrium supports, and every strategy outside it is strictly
//      worse against it. The entropy maximizer shares this support.
//   2. Damped Newton on the entropy, restricted to the affine hull of the
//      face found in phase 1 (zero payoff for every supported strategy),
//      with a log barrier on the strict inequalities and a decreasing
//      barrier weight.
//
// BruteForceMaxentNash is an independent test oracle for n <= 6: it
// enumerates every vertex of P and runs mirror ascent on the convex hull.

#ifndef GSP_NASH_HPP_
#define GSP_NASH_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsp/detail/simplex.hpp"
#include "gsp/metagame.hpp"
#include "gsp/rng.hpp"

namespace gsp {

class NashError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NashOptions {
  double tol = 1e-6;                      // max deviation gain accepted
  std::size_t max_iterations = 1'000'000;  // LP pivots + Newton steps
};

struct NashSolution {
  MixedStrategy strategy;
  double entropy = 0.0;   // nats
  double residual = 0.0;  // max_j (A x)_j clipped below at 0
  std::size_t iterations = 0;
};

// Probabilities below this are reported as exact zeros when serialized.
inline constexpr double kSupportThreshold = 1e-9;

// Payoff of every pure strategy against the mixture x.
inline std::vector<double> DeviationGains(const EvaluationMatrix& a, std::span<const double> x) {
  const std::size_t n = a.size();
  std::vector<double> gains(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) gains[j] += a(j, i) * x[i];
  return gains;
}

inline double EquilibriumResidual(const EvaluationMatrix& a, std::span<const double> x) {
  double r = 0.0;
  for (double g : DeviationGains(a, x)) r = std::max(r, g);
  return r;
}

namespace detail {

inline double ShannonEntropy(const Eigen::VectorXd& x) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] > 0.0) h -= x[i] * std::log(x[i]);
  return h;
}

// Orthonormal basis of the null space of c, and a least-squares solve.
struct AffineSlice {
  Eigen::MatrixXd basis;
  Eigen::VectorXd Project(const Eigen::MatrixXd& c, const Eigen::VectorXd& rhs,
                          const Eigen::VectorXd& point) const {
    Eigen::VectorXd residual = c * point - rhs;
    Eigen::VectorXd fix = c.completeOrthogonalDecomposition().solve(residual);
    return point - fix;
  }
};

inline AffineSlice NullSpace(const Eigen::MatrixXd& c) {
  AffineSlice slice;
  const Eigen::Index cols = c.cols();
  if (c.rows() == 0) {
    slice.basis = Eigen::MatrixXd::Identity(cols, cols);
    return slice;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold = 1e-10 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > threshold) ++rank;
  slice.basis = svd.matrixV().rightCols(cols - rank);
  return slice;
}

// Finds a strictly complementary point of the equilibrium cone by solving
//   max sum(t) + sum(r)
//   s.t. t_i <= u_i, t_i <= 1, r_j + (A u)_j <= 0, r_j <= 1, u,t,r >= 0.
// At the optimum t_i = 1 exactly for strategies in some equilibrium support
// and r_j = 1 exactly for strategies that can be strictly unprofitable.
struct ComplementaryPoint {
  std::vector<double> u;
  std::vector<bool> in_support;
  std::vector<bool> can_be_slack;
  std::size_t pivots = 0;
};

inline constexpr double kConeCap = 1e6;

inline ComplementaryPoint FindComplementaryPoint(const EvaluationMatrix& a,
                                                 std::size_t max_pivots) {
  const std::size_t n = a.size();
  const std::size_t vars = 3 * n;  // u | t | r
  // The last row caps sum(u): the cone is unbounded and without a cap the
  // pivots can wander along rays that carry no objective.
  DenseMatrix m(4 * n + 1, vars, 0.0);
  std::vector<double> b(4 * n + 1, 0.0), c(vars, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(4 * n, i) = 1.0;
  b[4 * n] = kConeCap;
  for (std::size_t i = 0; i < n; ++i) {
    m(i, n + i) = 1.0;  // t_i - u_i <= 0
    m(i, i) = -1.0;
    m(n + i, n + i) = 1.0;  // t_i <= 1
    b[n + i] = 1.0;
    m(2 * n + i, 2 * n + i) = 1.0;  // r_i + (A u)_i <= 0
    for (std::size_t k = 0; k < n; ++k) m(2 * n + i, k) = a(i, k);
    m(3 * n + i, 2 * n + i) = 1.0;  // r_i <= 1
    b[3 * n + i] = 1.0;
    c[n + i] = 1.0;
    c[2 * n + i] = 1.0;
  }
  // Deterministic right-hand-side perturbation removes the degeneracy of
  // the zero rows; t and r still land within O(1e-7) of 0 or 1.
  for (std::size_t i = 0; i < 4 * n; ++i)
    b[i] += 1e-7 * (1.0 + static_cast<double>(SplitMix64(i) >> 11) * 0x1.0p-53);
  LpResult lp = SolveCanonicalLp(m, b, c, max_pivots);
  if (lp.status != LpStatus::kOptimal)
    throw NashError(lp.status == LpStatus::kIterationLimit
                        ? "maxent nash: support LP hit the iteration budget"
                        : "maxent nash: support LP unbounded (input not antisymmetric?)");
  ComplementaryPoint p;
  p.u.assign(lp.x.begin(), lp.x.begin() + n);
  p.in_support.resize(n);
  p.can_be_slack.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.in_support[i] = lp.x[n + i] > 0.5;
    p.can_be_slack[i] = lp.x[2 * n + i] > 0.5;
  }
  p.pivots = lp.pivots;
  return p;
}

// Entropy maximization over { x_S : C x_S = rhs, G x_S < 0 } starting from a
// strictly feasible point. Returns the number of Newton steps taken.
inline std::size_t MaximizeEntropyOnFace(const Eigen::MatrixXd& c, const Eigen::VectorXd& rhs,
                                         const Eigen::MatrixXd& g, Eigen::VectorXd& x,
                                         std::size_t budget) {
  AffineSlice slice = NullSpace(c);
  x = slice.Project(c, rhs, x);
  const Eigen::MatrixXd& basis = slice.basis;
  if (basis.cols() == 0) return 0;

  const bool has_barrier = g.rows() > 0;
  auto objective = [&](const Eigen::VectorXd& p, double mu) {
    double f = ShannonEntropy(p);
    if (has_barrier) {
      Eigen::VectorXd s = -(g * p);
      for (Eigen::Index j = 0; j < s.size(); ++j) f += mu * std::log(s[j]);
    }
    return f;
  };

  std::size_t steps = 0;
  double mu = has_barrier ? 1e-1 : 0.0;
  while (true) {
    for (int iter = 0; iter < 200; ++iter) {
      if (steps >= budget) throw NashError("maxent nash: Newton budget exhausted");
      ++steps;
      Eigen::VectorXd grad_x = -(x.array().log() + 1.0).matrix();
      Eigen::MatrixXd hess_x = Eigen::MatrixXd(x.cwiseInverse().asDiagonal());  // negated
      Eigen::VectorXd s;
      if (has_barrier) {
        s = -(g * x);
        for (Eigen::Index j = 0; j < s.size(); ++j) {
          grad_x -= mu * g.row(j).transpose() / s[j];
          hess_x += mu * g.row(j).transpose() * g.row(j) / (s[j] * s[j]);
        }
      }
      Eigen::VectorXd grad = basis.transpose() * grad_x;
      Eigen::MatrixXd neg_hess = basis.transpose() * hess_x * basis;
      Eigen::VectorXd dy = neg_hess.ldlt().solve(grad);
      const double decrement = grad.dot(dy);
      if (!(decrement > 1e-22)) break;
      Eigen::VectorXd dx = basis * dy;

      double step = 1.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0) step = std::min(step, -0.99 * x[i] / dx[i]);
      if (has_barrier) {
        Eigen::VectorXd ds = -(g * dx);
        for (Eigen::Index j = 0; j < s.size(); ++j)
          if (ds[j] < 0.0) step = std::min(step, -0.99 * s[j] / ds[j]);
      }
      const double f0 = objective(x, mu);
      Eigen::VectorXd candidate = x + step * dx;
      // Below ~1e-10 the Armijo test drowns in roundoff of f itself; by then
      // Newton is in its quadratic region and the full step is safe.
      while (decrement > 1e-10 && objective(candidate, mu) < f0 + 0.25 * step * decrement &&
             step > 1e-16) {
        step *= 0.5;
        candidate = x + step * dx;
      }
      x = candidate;
      if (decrement < 1e-20) break;
    }
    if (!has_barrier || mu < 1e-15) break;
    mu *= 0.1;
  }
  return steps;
}

}  // namespace detail

inline NashSolution MaxentNash(const EvaluationMatrix& a, const NashOptions& options = {}) {
  if (!(options.tol > 0.0)) throw NashError("maxent nash: tolerance must be positive");
  const std::size_t n = a.size();
  if (n == 1) return {MixedStrategy::Pure(1, 0), 0.0, 0.0, 0};

  detail::ComplementaryPoint cp = detail::FindComplementaryPoint(a, options.max_iterations);

  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < n; ++i)
    if (cp.in_support[i]) support.push_back(i);
  if (support.empty()) throw NashError("maxent nash: empty equilibrium support");

  // Supported strategies earn exactly zero; the others are strict
  // inequalities unless the LP could not separate them.
  std::vector<std::size_t> equal_rows, slack_rows;
  for (std::size_t j = 0; j < n; ++j)
    (cp.in_support[j] || !cp.can_be_slack[j] ? equal_rows : slack_rows).push_back(j);

  const auto s = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd c(static_cast<Eigen::Index>(equal_rows.size()) + 1, s);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(c.rows());
  for (std::size_t r = 0; r < equal_rows.size(); ++r)
    for (Eigen::Index k = 0; k < s; ++k) c(r, k) = a(equal_rows[r], support[k]);
  c.row(c.rows() - 1).setOnes();
  rhs[c.rows() - 1] = 1.0;
  Eigen::MatrixXd g(static_cast<Eigen::Index>(slack_rows.size()), s);
  for (std::size_t r = 0; r < slack_rows.size(); ++r)
    for (Eigen::Index k = 0; k < s; ++k) g(r, k) = a(slack_rows[r], support[k]);

  Eigen::VectorXd x(s);
  double total = 0.0;
  for (Eigen::Index k = 0; k < s; ++k) total += cp.u[support[k]];
  for (Eigen::Index k = 0; k < s; ++k) x[k] = cp.u[support[k]] / total;

  const std::size_t budget =
      options.max_iterations > cp.pivots ? options.max_iterations - cp.pivots : 0;
  std::size_t newton = detail::MaximizeEntropyOnFace(c, rhs, g, x, budget);

  std::vector<double> probs(n, 0.0);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < s; ++k) {
    probs[support[k]] = std::max(0.0, x[k]);
    sum += probs[support[k]];
  }
  for (double& p : probs) p /= sum;

  NashSolution sol{MixedStrategy(std::move(probs)), 0.0, 0.0, cp.pivots + newton};
  sol.entropy = sol.strategy.Entropy();
  sol.residual = EquilibriumResidual(a, sol.strategy.probs());
  if (sol.residual > options.tol)
    throw NashError("maxent nash: residual " + std::to_string(sol.residual) +
                    " exceeds tolerance");
  return sol;
}

// Every vertex of the equilibrium polytope, by enumerating each support S
// together with each set T of tight constraints containing it and solving
// the square-or-tall system A[T,S] x = 0, sum(x) = 1.
inline std::vector<std::vector<double>> EnumerateEquilibriumVertices(const EvaluationMatrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> vertices;
  for (unsigned s_mask = 1; s_mask < (1u << n); ++s_mask) {
    std::vector<std::size_t> s_idx;
    for (std::size_t i = 0; i < n; ++i)
      if (s_mask & (1u << i)) s_idx.push_back(i);
    const unsigned free_mask = ((1u << n) - 1) & ~s_mask;
    // Iterate over all subsets of the strategies outside S.
    for (unsigned extra = free_mask;; extra = (extra - 1) & free_mask) {
      const unsigned t_mask = s_mask | extra;
      std::vector<std::size_t> t_idx;
      for (std::size_t j = 0; j < n; ++j)
        if (t_mask & (1u << j)) t_idx.push_back(j);
      const auto rows = static_cast<Eigen::Index>(t_idx.size()) + 1;
      const auto cols = static_cast<Eigen::Index>(s_idx.size());
      Eigen::MatrixXd sys(rows, cols);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
      for (Eigen::Index r = 0; r + 1 < rows; ++r)
        for (Eigen::Index k = 0; k < cols; ++k) sys(r, k) = a(t_idx[r], s_idx[k]);
      sys.row(rows - 1).setOnes();
      rhs[rows - 1] = 1.0;
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys);
      qr.setThreshold(1e-10);
      if (qr.rank() == cols) {
        Eigen::VectorXd xs = qr.solve(rhs);
        if ((sys * xs - rhs).norm() < 1e-9) {
          std::vector<double> x(n, 0.0);
          bool ok = true;
          for (Eigen::Index k = 0; k < cols; ++k) {
            if (xs[k] < -1e-10) ok = false;
            x[s_idx[k]] = std::max(0.0, xs[k]);
          }
          if (ok && EquilibriumResidual(a, x) <= 1e-10) {
            bool duplicate = false;
            for (const auto& v : vertices) {
              double d = 0.0;
              for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(v[i] - x[i]));
              if (d < 1e-9) duplicate = true;
            }
            if (!duplicate) vertices.push_back(std::move(x));
          }
        }
      }
      if (extra == 0) break;
    }
  }
  return vertices;
}

inline NashSolution BruteForceMaxentNash(const EvaluationMatrix& a) {
  const std::size_t n = a.size();
  if (n > 6) throw NashError("brute force oracle supports at most 6 strategies");
  auto vertices = EnumerateEquilibriumVertices(a);
  if (vertices.empty()) throw NashError("brute force oracle found no equilibrium");
  const std::size_t m = vertices.size();

  auto mix = [&](const std::vector<double>& lambda) {
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) x[i] += lambda[k] * vertices[k][i];
    return x;
  };
  auto entropy = [](const std::vector<double>& x) {
    double h = 0.0;
    for (double p : x)
      if (p > 0.0) h -= p * std::log(p);
    return h;
  };

  // Exponentiated-gradient ascent on the hull weights, several restarts.
  std::vector<double> best_x = vertices.front();
  double best_h = entropy(best_x);
  std::size_t iterations = 0;
  Rng rng(0xB0A7F0CEULL);
  const int restarts = m == 1 ? 1 : 8;
  for (int restart = 0; restart < restarts; ++restart) {
    std::vector<double> lambda(m);
    double total = 0.0;
    for (auto& l : lambda) {
      l = restart == 0 ? 1.0 : 0.05 + rng.Uniform();
      total += l;
    }
    for (auto& l : lambda) l /= total;
    std::vector<double> x = mix(lambda);
    double h = entropy(x);
    double eta = 1.0;
    for (int it = 0; it < 20000 && m > 1; ++it) {
      ++iterations;
      std::vector<double> grad(m, 0.0);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < n; ++i)
          if (vertices[k][i] > 0.0) grad[k] -= vertices[k][i] * (std::log(x[i]) + 1.0);
      double gmax = *std::max_element(grad.begin(), grad.end());
      std::vector<double> next(m);
      double z = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        next[k] = lambda[k] * std::exp(eta * (grad[k] - gmax));
        z += next[k];
      }
      for (auto& l : next) l /= z;
      std::vector<double> nx = mix(next);
      double nh = entropy(nx);
      if (nh >= h) {
        const double gain = nh - h;
        lambda = std::move(next);
        x = std::move(nx);
        h = nh;
        eta = std::min(eta * 1.5, 1e6);
        if (gain < 1e-16 && it > 100) break;
      } else {
        eta *= 0.5;
        if (eta < 1e-12) break;
      }
    }
    if (h > best_h) {
      best_h = h;
      best_x = x;
    }
  }
  double total = 0.0;
  for (double p : best_x) total += p;
  for (double& p : best_x) p /= total;
  NashSolution sol{MixedStrategy(best_x), 0.0, 0.0, iterations};
  sol.entropy = sol.strategy.Entropy();
  sol.residual = EquilibriumResidual(a, sol.strategy.probs());
  return sol;
}

// Maxent Nash of each leading k x k subgame, zero-padded to length n.
inline std::vector<MixedStrategy> NashSupportSeries(const EvaluationMatrix& a,
                                                    const NashOptions& options = {}) {
  const std::size_t n = a.size();
  std::vector<MixedStrategy> series;
  series.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    NashSolution sol;
    try {
      sol = MaxentNash(Submatrix(a, k), options);
    } catch (const NashError& e) {
      throw NashError("subgame k=" + std::to_string(k) + ": " + e.what());
    }
    std::vector<double> padded(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) padded[i] = sol.strategy[i];
    series.emplace_back(std::move(padded));
  }
  return series;
}

}  // namespace gsp

#endif  // GSP_NASH_HPP_

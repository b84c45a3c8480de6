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

// Meta-game value types.
//
// A WinrateMatrix holds head-to-head winrates inside one population. Row i,
// column j is the fraction of games policy i won against policy j. Only the
// strict upper triangle is free: the diagonal is 0.5 and w(j,i) = 1 - w(i,j)
// by construction. An EvaluationMatrix is the antisymmetric game obtained by
// subtracting one half from every winrate.
//
// The Cross* variants cover two different populations (rows from one,
// columns from the other). They are rectangular in general and only carry
// the range invariant.

#ifndef GSP_METAGAME_HPP_
#define GSP_METAGAME_HPP_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsp/csv.hpp"
#include "gsp/matrix.hpp"

namespace gsp {

class MetagameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr double kSimplexTolerance = 1e-9;

inline std::vector<std::string> DefaultLabels(std::size_t n, const std::string& prefix = "p") {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return labels;
}

// Probability vector on the simplex.
class MixedStrategy {
 public:
  MixedStrategy() = default;
  explicit MixedStrategy(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw MetagameError("mixed strategy over zero actions");
    double total = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw MetagameError("mixed strategy has a negative entry");
      total += p;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance)
      throw MetagameError("mixed strategy does not sum to one");
  }

  static MixedStrategy Uniform(std::size_t n) {
    return MixedStrategy(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }
  static MixedStrategy Pure(std::size_t n, std::size_t i) {
    std::vector<double> p(n, 0.0);
    p.at(i) = 1.0;
    return MixedStrategy(std::move(p));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  // Shannon entropy in nats.
  double Entropy() const {
    double h = 0.0;
    for (double p : probs_)
      if (p > 0.0) h -= p * std::log(p);
    return h;
  }

 private:
  std::vector<double> probs_;
};

class WinrateMatrix {
 public:
  WinrateMatrix() = default;

  // Validates a full n x n matrix and re-derives the lower triangle and the
  // diagonal exactly from the upper triangle.
  static WinrateMatrix FromEntries(const DenseMatrix& w, int sims_per_entry,
                                   std::vector<std::string> labels = {}) {
    if (!w.square()) throw MetagameError("winrate matrix must be square");
    const std::size_t n = w.rows();
    if (n == 0) throw MetagameError("winrate matrix must be non-empty");
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(w(i, i) - 0.5) > kSymmetryTolerance)
        throw MetagameError("winrate diagonal must be 0.5");
      for (std::size_t j = 0; j < n; ++j) {
        if (!(w(i, j) >= 0.0 && w(i, j) <= 1.0)) throw MetagameError("winrate outside [0,1]");
        if (std::abs(w(i, j) + w(j, i) - 1.0) > kSymmetryTolerance)
          throw MetagameError("winrate pair (" + std::to_string(i) + "," + std::to_string(j) +
                              ") does not sum to one");
      }
    }
    return FromUpperTriangle(
        n, sims_per_entry, [&](std::size_t i, std::size_t j) { return w(i, j); },
        std::move(labels));
  }

  // Builds from a function evaluated once per unordered pair i < j.
  template <typename PairFn>
  static WinrateMatrix FromUpperTriangle(std::size_t n, int sims_per_entry, PairFn&& upper,
                                         std::vector<std::string> labels = {}) {
    if (n == 0) throw MetagameError("winrate matrix must be non-empty");
    if (sims_per_entry <= 0) throw MetagameError("sims_per_entry must be positive");
    if (labels.empty()) labels = DefaultLabels(n);
    if (labels.size() != n) throw MetagameError("label count mismatch");
    WinrateMatrix m;
    m.values_ = DenseMatrix(n, n, 0.5);
    m.sims_ = sims_per_entry;
    m.labels_ = std::move(labels);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double v = upper(i, j);
        if (!(v >= 0.0 && v <= 1.0)) throw MetagameError("winrate outside [0,1]");
        m.values_(i, j) = v;
        m.values_(j, i) = 1.0 - v;
      }
    }
    return m;
  }

  // Appends one policy. `vs_existing[j]` is the new policy's winrate
  // against existing policy j.
  WinrateMatrix Extended(std::span<const double> vs_existing, std::string label) const {
    const std::size_t n = size();
    if (vs_existing.size() != n) throw MetagameError("Extended: wrong row length");
    std::vector<std::string> labels = labels_;
    labels.push_back(std::move(label));
    return FromUpperTriangle(
        n + 1, sims_,
        [&](std::size_t i, std::size_t j) { return j == n ? 1.0 - vs_existing[i] : values_(i, j); },
        std::move(labels));
  }

  std::size_t size() const { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const DenseMatrix& values() const { return values_; }
  const std::vector<std::string>& labels() const { return labels_; }
  int sims_per_entry() const { return sims_; }

 private:
  DenseMatrix values_;
  std::vector<std::string> labels_;
  int sims_ = 1;
};

class CrossWinrateMatrix {
 public:
  CrossWinrateMatrix() = default;
  CrossWinrateMatrix(DenseMatrix w, int sims_per_entry, std::vector<std::string> row_labels = {},
                     std::vector<std::string> col_labels = {})
      : values_(std::move(w)), sims_(sims_per_entry),
        row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
    if (values_.rows() == 0 || values_.cols() == 0) throw MetagameError("empty winrate matrix");
    if (sims_ <= 0) throw MetagameError("sims_per_entry must be positive");
    for (double v : values_.data())
      if (!(v >= 0.0 && v <= 1.0)) throw MetagameError("winrate outside [0,1]");
    if (row_labels_.empty()) row_labels_ = DefaultLabels(values_.rows(), "a");
    if (col_labels_.empty()) col_labels_ = DefaultLabels(values_.cols(), "b");
    if (row_labels_.size() != values_.rows() || col_labels_.size() != values_.cols())
      throw MetagameError("label count mismatch");
  }

  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const DenseMatrix& values() const { return values_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  int sims_per_entry() const { return sims_; }

 private:
  DenseMatrix values_;
  int sims_ = 1;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

// Antisymmetric payoff matrix of a symmetric zero-sum game.
class EvaluationMatrix {
 public:
  EvaluationMatrix() = default;

  // Accepts any antisymmetric matrix (not only shifted winrates, so that the
  // solvers can be exercised on scaled games). The lower triangle is
  // re-derived as the exact negation of the upper one.
  explicit EvaluationMatrix(const DenseMatrix& a, std::vector<std::string> labels = {}) {
    if (!a.square()) throw MetagameError("evaluation matrix must be square");
    const std::size_t n = a.rows();
    if (n == 0) throw MetagameError("evaluation matrix must be non-empty");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        if (!std::isfinite(a(i, j)) || std::abs(a(i, j) + a(j, i)) > kSymmetryTolerance)
          throw MetagameError("evaluation matrix is not antisymmetric at (" + std::to_string(i) +
                              "," + std::to_string(j) + ")");
    values_ = DenseMatrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        values_(i, j) = a(i, j);
        values_(j, i) = -a(i, j);
      }
    labels_ = labels.empty() ? DefaultLabels(n) : std::move(labels);
    if (labels_.size() != n) throw MetagameError("label count mismatch");
  }

  std::size_t size() const { return values_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const DenseMatrix& values() const { return values_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  DenseMatrix values_;
  std::vector<std::string> labels_;
};

// Payoff to the row population; no structure beyond finiteness.
class CrossEvaluationMatrix {
 public:
  CrossEvaluationMatrix() = default;
  explicit CrossEvaluationMatrix(DenseMatrix a, std::vector<std::string> row_labels = {},
                                 std::vector<std::string> col_labels = {})
      : values_(std::move(a)), row_labels_(std::move(row_labels)),
        col_labels_(std::move(col_labels)) {
    if (values_.rows() == 0 || values_.cols() == 0) throw MetagameError("empty evaluation matrix");
    for (double v : values_.data())
      if (!std::isfinite(v)) throw MetagameError("non-finite evaluation entry");
    if (row_labels_.empty()) row_labels_ = DefaultLabels(values_.rows(), "a");
    if (col_labels_.empty()) col_labels_ = DefaultLabels(values_.cols(), "b");
    if (row_labels_.size() != values_.rows() || col_labels_.size() != values_.cols())
      throw MetagameError("label count mismatch");
  }

  // The evaluation matrix of a population against itself.
  static CrossEvaluationMatrix FromSquare(const EvaluationMatrix& a) {
    return CrossEvaluationMatrix(a.values(), a.labels(), a.labels());
  }

  std::size_t rows() const { return values_.rows(); }
  std::size_t cols() const { return values_.cols(); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const DenseMatrix& values() const { return values_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  // Payoff matrix of the game with the populations swapped: -A^T.
  CrossEvaluationMatrix Swapped() const {
    DenseMatrix t = values_.Transposed();
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) = -t(i, j);
    return CrossEvaluationMatrix(std::move(t), col_labels_, row_labels_);
  }

 private:
  DenseMatrix values_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

inline EvaluationMatrix WinrateToEvaluation(const WinrateMatrix& w) {
  const std::size_t n = w.size();
  DenseMatrix a(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = w(i, j) - 0.5;
      a(j, i) = -a(i, j);
    }
  return EvaluationMatrix(a, w.labels());
}

inline CrossEvaluationMatrix WinrateToEvaluation(const CrossWinrateMatrix& w) {
  DenseMatrix a(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) a(i, j) = w(i, j) - 0.5;
  return CrossEvaluationMatrix(std::move(a), w.row_labels(), w.col_labels());
}

// Inverse of WinrateToEvaluation. Requires entries in [-1/2, 1/2].
inline WinrateMatrix EvaluationToWinrate(const EvaluationMatrix& a, int sims_per_entry) {
  return WinrateMatrix::FromUpperTriangle(
      a.size(), sims_per_entry, [&](std::size_t i, std::size_t j) { return a(i, j) + 0.5; },
      a.labels());
}

// Leading principal k x k block.
inline EvaluationMatrix Submatrix(const EvaluationMatrix& a, std::size_t k) {
  if (k < 1 || k > a.size())
    throw MetagameError("submatrix size " + std::to_string(k) + " out of range");
  std::vector<std::string> labels(a.labels().begin(), a.labels().begin() + k);
  return EvaluationMatrix(a.values().Leading(k, k), std::move(labels));
}

inline CrossEvaluationMatrix Submatrix(const CrossEvaluationMatrix& a, std::size_t k) {
  if (k < 1 || k > a.rows() || k > a.cols())
    throw MetagameError("submatrix size " + std::to_string(k) + " out of range");
  return CrossEvaluationMatrix(
      a.values().Leading(k, k),
      std::vector<std::string>(a.row_labels().begin(), a.row_labels().begin() + k),
      std::vector<std::string>(a.col_labels().begin(), a.col_labels().begin() + k));
}

// --- CSV ------------------------------------------------------------------
//
// The corner cell records the matrix kind and, for winrates, the number of
// simulations per entry, e.g. "winrate:sims=30".

inline std::string ToCsv(const WinrateMatrix& w) {
  return FormatMatrixCsv({"winrate:sims=" + std::to_string(w.sims_per_entry()), w.labels(),
                          w.labels(), w.values()});
}

inline std::string ToCsv(const CrossWinrateMatrix& w) {
  return FormatMatrixCsv({"cross_winrate:sims=" + std::to_string(w.sims_per_entry()),
                          w.row_labels(), w.col_labels(), w.values()});
}

inline std::string ToCsv(const EvaluationMatrix& a) {
  return FormatMatrixCsv({"evaluation", a.labels(), a.labels(), a.values()});
}

inline std::string ToCsv(const CrossEvaluationMatrix& a) {
  return FormatMatrixCsv({"cross_evaluation", a.row_labels(), a.col_labels(), a.values()});
}

namespace detail {
inline int SimsFromCorner(const std::string& corner) {
  auto pos = corner.find(":sims=");
  if (pos == std::string::npos) return 1;
  return static_cast<int>(ParseInt(corner.substr(pos + 6)));
}
}  // namespace detail

inline WinrateMatrix WinrateFromCsv(std::string_view text) {
  LabelledMatrix m = ParseMatrixCsv(text);
  if (m.row_labels != m.col_labels)
    throw MetagameError("population winrate csv needs identical row and column labels");
  return WinrateMatrix::FromEntries(m.values, detail::SimsFromCorner(m.corner), m.row_labels);
}

inline CrossWinrateMatrix CrossWinrateFromCsv(std::string_view text) {
  LabelledMatrix m = ParseMatrixCsv(text);
  return CrossWinrateMatrix(std::move(m.values), detail::SimsFromCorner(m.corner),
                            std::move(m.row_labels), std::move(m.col_labels));
}

}  // namespace gsp

#endif  // GSP_METAGAME_HPP_

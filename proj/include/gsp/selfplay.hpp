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

// Generalized self-play: a menagerie of frozen policies, an opponent
// sampling distribution over it and a curator deciding what enters and
// leaves. Four schemes are provided: naive, delta-uniform,
// delta-limit-uniform and PSRO with a maxent-Nash meta-solver.
//
// The live training policy is owned by the caller and passed in by
// reference; the menagerie only ever holds deep copies.

#ifndef GSP_SELFPLAY_HPP_
#define GSP_SELFPLAY_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gsp/agent.hpp"
#include "gsp/csv.hpp"
#include "gsp/learner.hpp"
#include "gsp/metagame.hpp"
#include "gsp/nash.hpp"
#include "gsp/parallel.hpp"
#include "gsp/rng.hpp"

namespace gsp {

class SelfPlayError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class SchemeKind { kNaive, kDeltaUniform, kDeltaLimitUniform, kPsro };

struct SelfPlayScheme {
  SchemeKind kind = SchemeKind::kNaive;
  double delta = 0.0;
  double w = 0.72;
  int n_matches = 50;

  static SelfPlayScheme Naive() { return {}; }
  static SelfPlayScheme DeltaUniform(double delta) {
    return {SchemeKind::kDeltaUniform, delta, 0.72, 50};
  }
  static SelfPlayScheme DeltaLimitUniform(double delta) {
    return {SchemeKind::kDeltaLimitUniform, delta, 0.72, 50};
  }
  static SelfPlayScheme Psro(double w = 0.72, int n_matches = 50) {
    return {SchemeKind::kPsro, 0.0, w, n_matches};
  }

  void Validate() const {
    if (!(delta >= 0.0 && delta <= 1.0)) throw SelfPlayError("delta outside [0,1]");
    // w above 1 is accepted: it makes the PSRO gate unreachable on purpose.
    if (!(w >= 0.0)) throw SelfPlayError("w must be nonnegative");
    if (n_matches < 1) throw SelfPlayError("n_matches must be positive");
  }

  std::string Name() const {
    switch (kind) {
      case SchemeKind::kNaive: return "naive";
      case SchemeKind::kDeltaUniform: return "delta_uniform";
      case SchemeKind::kDeltaLimitUniform: return "delta_limit_uniform";
      case SchemeKind::kPsro: return "psro";
    }
    return "?";
  }
};

inline SchemeKind ParseSchemeKind(const std::string& name) {
  if (name == "naive") return SchemeKind::kNaive;
  if (name == "delta_uniform") return SchemeKind::kDeltaUniform;
  if (name == "delta_limit_uniform") return SchemeKind::kDeltaLimitUniform;
  if (name == "psro") return SchemeKind::kPsro;
  throw SelfPlayError("unknown scheme: " + name);
}

// Number of most recent entries kept out of `history`: ceil((1 - delta) h),
// never below one. The small slack keeps e.g. (1 - 0.1) * 10 from rounding
// up to 10.
inline std::size_t DeltaWindow(double delta, std::size_t history) {
  const double exact = (1.0 - delta) * static_cast<double>(history);
  const auto k = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(history, 1));
}

struct MenagerieEntry {
  FrozenPolicy policy;
  std::int64_t stamp = 0;
  double expected_count = 0.0;  // sum of sampling probabilities received
};

class Menagerie {
 public:
  // The initial copy of the starting policy gets stamp 0.
  explicit Menagerie(const TabularSoftmaxPolicy& initial) { Insert(Freeze(initial), 0); }

  void Insert(FrozenPolicy policy, std::int64_t stamp) {
    if (!entries_.empty() && stamp <= entries_.back().stamp)
      throw SelfPlayError("menagerie stamps must strictly increase");
    entries_.push_back({std::move(policy), stamp, 0.0});
    ++history_size_;
  }

  // Keeps only the newest `k` entries.
  void KeepNewest(std::size_t k) {
    if (k == 0) throw SelfPlayError("menagerie cannot become empty");
    if (entries_.size() > k) entries_.erase(entries_.begin(), entries_.end() - static_cast<std::ptrdiff_t>(k));
  }

  std::size_t size() const { return entries_.size(); }
  // Total number of policies ever inserted, dropped ones included.
  std::size_t history_size() const { return history_size_; }
  const std::vector<MenagerieEntry>& entries() const { return entries_; }
  std::vector<MenagerieEntry>& entries() { return entries_; }
  const MenagerieEntry& operator[](std::size_t i) const { return entries_[i]; }
  const MenagerieEntry& back() const { return entries_.back(); }

 private:
  std::vector<MenagerieEntry> entries_;
  std::size_t history_size_ = 0;
};

// S_i = sum_{k=i}^{n} 1/k: expected number of times the i-th policy is
// drawn when one policy is added and one is sampled uniformly per episode.
inline double ExpectedSampleCountsDelta0(std::int64_t i, std::int64_t n) {
  if (i < 1 || i > n) throw std::out_of_range("need 1 <= i <= n");
  double s = 0.0;
  for (std::int64_t k = n; k >= i; --k) s += 1.0 / static_cast<double>(k);
  return s;
}

struct Opponent {
  FrozenPolicy policy;
  std::int64_t stamp = 0;
  std::size_t index = 0;  // position in the menagerie
};

// Row policy's winrate against the column policy. `row` and `col` are
// menagerie positions, usable for seed derivation.
using MatchRunner = std::function<double(const TabularSoftmaxPolicy& row_policy,
                                          const TabularSoftmaxPolicy& col_policy,
                                          std::size_t row, std::size_t col)>;

struct PsroState {
  WinrateMatrix winrate = WinrateMatrix::FromEntries(DenseMatrix(1, 1, 0.5), 30);
  MixedStrategy meta_strategy = MixedStrategy::Uniform(1);
  std::deque<bool> recent_outcomes;
  double meta_seconds = 0.0;    // M: time in the meta-solver
  double matrix_seconds = 0.0;  // W: time extending the winrate matrix
  std::size_t meta_steps = 0;
};

struct CurateResult {
  bool inserted = false;
  int trailing_wins = 0;    // wins in the gate window at insertion (PSRO)
  int trailing_count = 0;
};

struct SelfPlayOptions {
  int sims_per_entry = 30;  // PSRO matrix extension
  unsigned threads = 1;
  NashOptions nash{};
};

class SelfPlay {
 public:
  SelfPlay(SelfPlayScheme scheme, const TabularSoftmaxPolicy& initial, SelfPlayOptions options = {})
      : scheme_(scheme), options_(options), menagerie_(initial) {
    scheme_.Validate();
    if (options_.sims_per_entry < 1) throw SelfPlayError("sims_per_entry must be positive");
    psro_.winrate = WinrateMatrix::FromEntries(DenseMatrix(1, 1, 0.5), options_.sims_per_entry,
                                               {StampLabel(0)});
  }

  // Probability of drawing each menagerie entry next. Naive play does not
  // draw from the menagerie.
  std::vector<double> SamplingDistribution() const {
    const std::size_t n = menagerie_.size();
    std::vector<double> p(n, 0.0);
    switch (scheme_.kind) {
      case SchemeKind::kNaive:
        p.back() = 1.0;
        break;
      case SchemeKind::kDeltaUniform: {
        const std::size_t k = std::min(n, DeltaWindow(scheme_.delta, menagerie_.history_size()));
        for (std::size_t i = n - k; i < n; ++i) p[i] = 1.0 / static_cast<double>(k);
        break;
      }
      case SchemeKind::kDeltaLimitUniform: {
        const std::size_t k = std::min(n, DeltaWindow(scheme_.delta, menagerie_.history_size()));
        double top = 0.0, total = 0.0;
        for (std::size_t i = n - k; i < n; ++i) top = std::max(top, menagerie_[i].expected_count);
        for (std::size_t i = n - k; i < n; ++i)
          total += p[i] = std::max(0.0, top - menagerie_[i].expected_count) + kLimitEpsilon;
        for (double& v : p) v /= total;
        break;
      }
      case SchemeKind::kPsro: {
        auto probs = psro_.meta_strategy.probs();
        p.assign(probs.begin(), probs.end());
        break;
      }
    }
    return p;
  }

  // Draws the opponent for the next episode.
  Opponent SampleOpponent(const TabularSoftmaxPolicy& live, Rng& rng) {
    if (scheme_.kind == SchemeKind::kNaive)
      return {Freeze(live), menagerie_.back().stamp, menagerie_.size() - 1};
    std::vector<double> p = SamplingDistribution();
    const std::size_t i = rng.Categorical(p);
    if (scheme_.kind == SchemeKind::kDeltaLimitUniform)
      for (std::size_t j = 0; j < p.size(); ++j) menagerie_.entries()[j].expected_count += p[j];
    return {menagerie_[i].policy, menagerie_[i].stamp, i};
  }

  // End-of-episode curation. `episode` (1-based) becomes the stamp of any
  // inserted copy. `won` is the live policy's outcome; only PSRO uses it.
  CurateResult Curate(const TabularSoftmaxPolicy& live, std::int64_t episode, bool won,
                      const MatchRunner& runner = {}) {
    CurateResult r;
    switch (scheme_.kind) {
      case SchemeKind::kNaive:
        menagerie_.Insert(Freeze(live), episode);
        menagerie_.KeepNewest(1);
        r.inserted = true;
        break;
      case SchemeKind::kDeltaUniform:
      case SchemeKind::kDeltaLimitUniform:
        menagerie_.Insert(Freeze(live), episode);
        menagerie_.KeepNewest(DeltaWindow(scheme_.delta, menagerie_.history_size()));
        r.inserted = true;
        break;
      case SchemeKind::kPsro: {
        auto& buf = psro_.recent_outcomes;
        buf.push_back(won);
        if (static_cast<int>(buf.size()) > scheme_.n_matches) buf.pop_front();
        if (static_cast<int>(buf.size()) < scheme_.n_matches) break;
        const int wins = static_cast<int>(std::count(buf.begin(), buf.end(), true));
        if (static_cast<double>(wins) / scheme_.n_matches < scheme_.w) break;
        if (!runner) throw SelfPlayError("PSRO insertion needs a match runner");
        menagerie_.Insert(Freeze(live), episode);
        buf.clear();
        r = {true, wins, scheme_.n_matches};
        MetaStep(runner);
        break;
      }
    }
    return r;
  }

  // Extends the winrate matrix with the newest menagerie entry and
  // re-solves the meta-game.
  void MetaStep(const MatchRunner& runner) {
    using Clock = std::chrono::steady_clock;
    const std::size_t n = psro_.winrate.size();
    if (menagerie_.size() != n + 1) throw SelfPlayError("meta step expects exactly one new entry");
    const auto t0 = Clock::now();
    std::vector<double> row(n);
    const TabularSoftmaxPolicy& fresh = *menagerie_.back().policy;
    ParallelFor(n, options_.threads,
                [&](std::size_t j) { row[j] = runner(fresh, *menagerie_[j].policy, n, j); });
    psro_.winrate = psro_.winrate.Extended(row, StampLabel(menagerie_.back().stamp));
    const auto t1 = Clock::now();
    NashSolution nash = MaxentNash(WinrateToEvaluation(psro_.winrate), options_.nash);
    const auto t2 = Clock::now();
    psro_.meta_strategy = nash.strategy;
    psro_.matrix_seconds += std::chrono::duration<double>(t1 - t0).count();
    psro_.meta_seconds += std::chrono::duration<double>(t2 - t1).count();
    ++psro_.meta_steps;
  }

  const SelfPlayScheme& scheme() const { return scheme_; }
  const Menagerie& menagerie() const { return menagerie_; }
  const PsroState& psro() const { return psro_; }

  static constexpr double kLimitEpsilon = 1e-6;

 private:
  static std::string StampLabel(std::int64_t stamp) { return "e" + std::to_string(stamp); }

  SelfPlayScheme scheme_;
  SelfPlayOptions options_;
  Menagerie menagerie_;
  PsroState psro_;
};

// --- persistence ----------------------------------------------------------
//
// One "<stamp>.policy" file per entry (zero-padded) plus index.json with the
// stamps and the scheme parameters.

inline std::string MenagerieFileName(std::int64_t stamp) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%08lld.policy", static_cast<long long>(stamp));
  return buf;
}

inline void SaveMenagerie(const std::filesystem::path& dir, const Menagerie& m,
                          const SelfPlayScheme& scheme) {
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json index;
  index["scheme"] = scheme.Name();
  index["delta"] = scheme.delta;
  index["w"] = scheme.w;
  index["n_matches"] = scheme.n_matches;
  index["history_size"] = m.history_size();
  auto& entries = index["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : m.entries()) {
    WriteFileAtomic(dir / MenagerieFileName(e.stamp), SerializePolicy(*e.policy, e.stamp));
    entries.push_back({{"stamp", e.stamp}, {"file", MenagerieFileName(e.stamp)},
                       {"expected_count", e.expected_count}});
  }
  WriteFileAtomic(dir / "index.json", index.dump(2) + "\n");
}

struct LoadedMenagerie {
  std::vector<MenagerieEntry> entries;
  SelfPlayScheme scheme;
  std::size_t history_size = 0;
};

inline LoadedMenagerie LoadMenagerie(const std::filesystem::path& dir) {
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(ReadFile(dir / "index.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad menagerie index in " + dir.string() + ": " + e.what());
  }
  LoadedMenagerie out;
  try {
    out.scheme.kind = ParseSchemeKind(index.at("scheme").get<std::string>());
    out.scheme.delta = index.at("delta").get<double>();
    out.scheme.w = index.at("w").get<double>();
    out.scheme.n_matches = index.at("n_matches").get<int>();
    out.history_size = index.at("history_size").get<std::size_t>();
    for (const auto& e : index.at("entries")) {
      LoadedPolicy p = ParsePolicy(ReadFile(dir / e.at("file").get<std::string>()));
      const auto stamp = e.at("stamp").get<std::int64_t>();
      if (p.stamp != stamp) throw IoError("stamp mismatch in " + e.at("file").get<std::string>());
      out.entries.push_back({Freeze(p.policy), stamp, e.at("expected_count").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad menagerie index in " + dir.string() + ": " + e.what());
  }
  return out;
}

}  // namespace gsp

#endif  // GSP_SELFPLAY_HPP_

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

// Tabular softmax policy over recall states and a REINFORCE learner with a
// moving-average baseline.

#ifndef GSP_LEARNER_HPP_
#define GSP_LEARNER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsp/csv.hpp"
#include "gsp/rirrps.hpp"
#include "gsp/rng.hpp"

namespace gsp {

using ActionProbs = std::array<double, kNumActions>;

class TabularSoftmaxPolicy {
 public:
  // All-zero logits: uniform play everywhere.
  explicit TabularSoftmaxPolicy(std::size_t num_states = NumRecallStates(3))
      : logits_(num_states * kNumActions, 0.0) {}

  std::size_t num_states() const { return logits_.size() / kNumActions; }

  double logit(std::size_t state, int action) const {
    return logits_[state * kNumActions + static_cast<std::size_t>(action)];
  }
  double& logit(std::size_t state, int action) {
    return logits_[state * kNumActions + static_cast<std::size_t>(action)];
  }

  ActionProbs Probs(std::size_t state) const {
    CheckState(state);
    ActionProbs p{};
    double hi = logit(state, 0);
    for (int a = 1; a < kNumActions; ++a) hi = std::max(hi, logit(state, a));
    double z = 0.0;
    for (int a = 0; a < kNumActions; ++a) z += p[a] = std::exp(logit(state, a) - hi);
    for (double& v : p) v /= z;
    return p;
  }

  Action Act(std::size_t state, Rng& rng) const {
    ActionProbs p = Probs(state);
    double r = rng.Uniform();
    for (int a = 0; a < kNumActions - 1; ++a) {
      if (r < p[a]) return static_cast<Action>(a);
      r -= p[a];
    }
    return static_cast<Action>(kNumActions - 1);
  }

  void CheckState(std::size_t state) const {
    if (state >= num_states())
      throw std::out_of_range("state " + std::to_string(state) + " outside policy table");
  }

  bool operator==(const TabularSoftmaxPolicy&) const = default;

 private:
  std::vector<double> logits_;
};

struct LearnerConfig {
  double learning_rate = 0.05;
  double discount = 0.99;
  double baseline_decay = 0.9;

  void Validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (!(discount >= 0.0 && discount <= 1.0)) throw std::invalid_argument("discount outside [0,1]");
    if (!(baseline_decay >= 0.0 && baseline_decay < 1.0))
      throw std::invalid_argument("baseline_decay outside [0,1)");
  }
};

struct Transition {
  std::size_t state = 0;
  Action action = Action::kRock;
  double reward = 0.0;
};

inline std::vector<Transition> SeatTransitions(const EpisodeResult& episode, int seat) {
  std::vector<Transition> out;
  out.reserve(episode.rounds.size());
  for (const auto& r : episode.rounds)
    out.push_back({r.state[seat], r.action[seat], static_cast<double>(r.reward[seat])});
  return out;
}

inline std::vector<double> DiscountedReturns(const std::vector<Transition>& trajectory,
                                             double discount) {
  std::vector<double> g(trajectory.size(), 0.0);
  double acc = 0.0;
  for (std::size_t t = trajectory.size(); t-- > 0;) {
    acc = trajectory[t].reward + discount * acc;
    g[t] = acc;
  }
  return g;
}

// Sum over t of weights[t] * d/d(logits) log pi(a_t | s_t), evaluated at the
// current logits. Returned as a dense table shaped like the policy.
inline std::vector<double> ScoreFunctionGradient(const TabularSoftmaxPolicy& policy,
                                                 const std::vector<Transition>& trajectory,
                                                 const std::vector<double>& weights) {
  if (weights.size() != trajectory.size())
    throw std::invalid_argument("one weight per transition required");
  std::vector<double> grad(policy.num_states() * kNumActions, 0.0);
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const auto& tr = trajectory[t];
    ActionProbs p = policy.Probs(tr.state);
    for (int a = 0; a < kNumActions; ++a) {
      const double indicator = a == static_cast<int>(tr.action) ? 1.0 : 0.0;
      grad[tr.state * kNumActions + static_cast<std::size_t>(a)] += weights[t] * (indicator - p[a]);
    }
  }
  return grad;
}

// REINFORCE with a per-round moving-average baseline: the advantage of
// round t is G_t - b_t, and b_t tracks G_t across episodes. All gradients
// are taken at the pre-update logits.
class ReinforceLearner {
 public:
  explicit ReinforceLearner(LearnerConfig config = {}) : config_(config) { config_.Validate(); }

  void Update(TabularSoftmaxPolicy& policy, const std::vector<Transition>& trajectory) {
    std::vector<double> returns = DiscountedReturns(trajectory, config_.discount);
    if (baseline_.size() < returns.size()) baseline_.resize(returns.size(), 0.0);
    std::vector<double> advantages(returns.size());
    for (std::size_t t = 0; t < returns.size(); ++t) advantages[t] = returns[t] - baseline_[t];
    for (const auto& tr : trajectory) policy.CheckState(tr.state);
    std::vector<double> grad = ScoreFunctionGradient(policy, trajectory, advantages);
    for (std::size_t s = 0; s < policy.num_states(); ++s)
      for (int a = 0; a < kNumActions; ++a)
        policy.logit(s, a) += config_.learning_rate * grad[s * kNumActions + static_cast<std::size_t>(a)];
    for (std::size_t t = 0; t < returns.size(); ++t)
      baseline_[t] = config_.baseline_decay * baseline_[t] + (1.0 - config_.baseline_decay) * returns[t];
  }

  const std::vector<double>& baseline() const { return baseline_; }
  const LearnerConfig& config() const { return config_; }

 private:
  LearnerConfig config_;
  std::vector<double> baseline_;
};

// --- snapshot files -------------------------------------------------------
//
// Header lines start with '#'. "# stamp N" carries the menagerie insertion
// stamp when there is one. Then one line per state: index and three logits
// printed with 17 significant digits, which round-trips exactly.

inline std::string SerializePolicy(const TabularSoftmaxPolicy& policy,
                                   std::optional<std::int64_t> stamp = std::nullopt) {
  std::string out = "# gsp tabular softmax policy\n";
  if (stamp) out += "# stamp " + std::to_string(*stamp) + "\n";
  for (std::size_t s = 0; s < policy.num_states(); ++s) {
    out += std::to_string(s);
    for (int a = 0; a < kNumActions; ++a) {
      out += ' ';
      out += ExactDouble(policy.logit(s, a));
    }
    out += '\n';
  }
  return out;
}

struct LoadedPolicy {
  TabularSoftmaxPolicy policy;
  std::optional<std::int64_t> stamp;
};

inline LoadedPolicy ParsePolicy(std::string_view text) {
  std::vector<std::array<double, kNumActions>> rows;
  std::optional<std::int64_t> stamp;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kStamp = "# stamp ";
      if (line.substr(0, kStamp.size()) == kStamp) stamp = ParseInt(line.substr(kStamp.size()));
      continue;
    }
    std::vector<std::string> cells;
    std::size_t p = 0;
    while (p < line.size()) {
      std::size_t q = line.find(' ', p);
      if (q == std::string_view::npos) q = line.size();
      if (q > p) cells.emplace_back(line.substr(p, q - p));
      p = q + 1;
    }
    if (cells.size() != 1 + kNumActions) throw IoError("policy line needs 4 fields");
    if (ParseInt(cells[0]) != static_cast<long long>(rows.size()))
      throw IoError("policy states must be listed in order");
    std::array<double, kNumActions> r{};
    for (int a = 0; a < kNumActions; ++a) r[a] = ParseDouble(cells[1 + a]);
    rows.push_back(r);
  }
  if (rows.empty()) throw IoError("policy file has no states");
  LoadedPolicy out{TabularSoftmaxPolicy(rows.size()), stamp};
  for (std::size_t s = 0; s < rows.size(); ++s)
    for (int a = 0; a < kNumActions; ++a) out.policy.logit(s, a) = rows[s][a];
  return out;
}

}  // namespace gsp

#endif  // GSP_LEARNER_HPP_

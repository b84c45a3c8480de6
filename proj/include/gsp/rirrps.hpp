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

// Repeated imperfect-recall Rock-Paper-Scissors.
//
// Two players play `repetitions` simultaneous RPS rounds. Each round pays
// +1 / -1 / 0. Both players observe the last `recall` joint actions; the
// observation is expressed from the observer's seat (own action first) so a
// single policy can play either seat. The player with the higher cumulative
// reward wins; ties are broken by a fair coin.

#ifndef GSP_RIRRPS_HPP_
#define GSP_RIRRPS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gsp/rng.hpp"

namespace gsp {

enum class Action : std::uint8_t { kRock = 0, kPaper = 1, kScissors = 2 };
inline constexpr int kNumActions = 3;
inline constexpr int kNumJointActions = kNumActions * kNumActions;

// +1 if `a` beats `b`, -1 if it loses, 0 on a draw.
inline constexpr int RoundPayoff(Action a, Action b) {
  const int d = (static_cast<int>(a) - static_cast<int>(b) + 3) % 3;
  return d == 0 ? 0 : (d == 1 ? 1 : -1);
}

inline constexpr char ActionChar(Action a) { return "RPS"[static_cast<int>(a)]; }

struct JointAction {
  Action first;
  Action second;
  // 0..8, first player's action as the high digit.
  int Index() const { return 3 * static_cast<int>(first) + static_cast<int>(second); }
  JointAction Swapped() const { return {second, first}; }
  bool operator==(const JointAction&) const = default;
};

class EnvError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RirRpsConfig {
  int repetitions = 10;
  int recall = 3;

  void Validate() const {
    if (repetitions < 1) throw EnvError("repetitions must be at least 1");
    if (recall < 0) throw EnvError("recall must be nonnegative");
    if (recall > 6) throw EnvError("recall above 6 is not supported (state table too large)");
  }
};

// Number of distinct recall windows: 1 + 9 + ... + 9^recall.
inline std::size_t NumRecallStates(int recall) {
  std::size_t total = 0, power = 1;
  for (int l = 0; l <= recall; ++l, power *= kNumJointActions) total += power;
  return total;
}

class RecallState {
 public:
  explicit RecallState(int recall = 3) : recall_(recall) {}

  void Push(JointAction ja) {
    if (recall_ == 0) return;
    window_.push_back(ja);
    if (static_cast<int>(window_.size()) > recall_) window_.pop_front();
  }

  const std::deque<JointAction>& window() const { return window_; }
  int recall() const { return recall_; }

  // Dense index in [0, NumRecallStates(recall)). Windows of length L occupy
  // a contiguous block after all shorter windows; within a block the oldest
  // joint action is the most significant base-9 digit.
  std::size_t Index(int seat) const {
    std::size_t offset = 0, power = 1;
    for (std::size_t l = 0; l < window_.size(); ++l, power *= kNumJointActions) offset += power;
    std::size_t code = 0;
    for (const JointAction& ja : window_)
      code = code * kNumJointActions + static_cast<std::size_t>((seat == 0 ? ja : ja.Swapped()).Index());
    return offset + code;
  }

 private:
  int recall_;
  std::deque<JointAction> window_;
};

struct StepResult {
  int reward[2] = {0, 0};
  bool done = false;
};

class RirRpsGame {
 public:
  explicit RirRpsGame(RirRpsConfig config = {}) : config_(config), state_(config.recall) {
    config_.Validate();
  }

  void Reset() {
    state_ = RecallState(config_.recall);
    round_ = 0;
    cumulative_ = {0, 0};
  }

  StepResult Step(Action a1, Action a2) {
    if (Done()) throw EnvError("step after the last repetition");
    StepResult r;
    r.reward[0] = RoundPayoff(a1, a2);
    r.reward[1] = -r.reward[0];
    cumulative_[0] += r.reward[0];
    cumulative_[1] += r.reward[1];
    state_.Push({a1, a2});
    ++round_;
    r.done = Done();
    return r;
  }

  bool Done() const { return round_ >= config_.repetitions; }
  std::size_t Observation(int seat) const { return state_.Index(seat); }
  const RecallState& state() const { return state_; }
  std::array<int, 2> cumulative() const { return cumulative_; }
  const RirRpsConfig& config() const { return config_; }
  std::size_t num_states() const { return NumRecallStates(config_.recall); }

 private:
  RirRpsConfig config_;
  RecallState state_;
  int round_ = 0;
  std::array<int, 2> cumulative_{0, 0};
};

// Higher cumulative reward wins; equal totals go to a fair coin.
inline int DecideWinner(std::array<int, 2> cumulative, Rng& rng) {
  if (cumulative[0] != cumulative[1]) return cumulative[0] > cumulative[1] ? 0 : 1;
  return rng.Coin() ? 0 : 1;
}

enum class FixedKind { kRock, kPaper, kScissors, kRandom };

inline std::string_view FixedKindName(FixedKind k) {
  switch (k) {
    case FixedKind::kRock: return "rock";
    case FixedKind::kPaper: return "paper";
    case FixedKind::kScissors: return "scissors";
    case FixedKind::kRandom: return "random";
  }
  return "?";
}

inline FixedKind ParseFixedKind(std::string_view name) {
  if (name == "rock") return FixedKind::kRock;
  if (name == "paper") return FixedKind::kPaper;
  if (name == "scissors") return FixedKind::kScissors;
  if (name == "random") return FixedKind::kRandom;
  throw EnvError("unknown fixed agent: " + std::string(name));
}

// The reference agents: constant actions, or uniform random play. The state
// is ignored.
struct FixedAgent {
  FixedKind kind = FixedKind::kRandom;

  Action Act(std::size_t /*state*/, Rng& rng) const {
    switch (kind) {
      case FixedKind::kRock: return Action::kRock;
      case FixedKind::kPaper: return Action::kPaper;
      case FixedKind::kScissors: return Action::kScissors;
      case FixedKind::kRandom: return static_cast<Action>(rng.UniformInt(kNumActions));
    }
    return Action::kRock;
  }
};

struct RoundRecord {
  std::array<std::size_t, 2> state{};  // each seat's own observation
  std::array<Action, 2> action{};
  std::array<int, 2> reward{};
};

struct EpisodeResult {
  std::vector<RoundRecord> rounds;
  std::array<int, 2> cumulative{0, 0};
  int winner = 0;

  std::vector<int> JointActionIndices() const {
    std::vector<int> out;
    out.reserve(rounds.size());
    for (const auto& r : rounds) out.push_back(JointAction{r.action[0], r.action[1]}.Index());
    return out;
  }
};

// Plays one full episode. Any type with `Action Act(std::size_t, Rng&)`
// can sit in either seat. All randomness (both seats, tie break) comes from
// `rng` in a fixed order.
template <typename First, typename Second>
EpisodeResult PlayEpisode(const First& first, const Second& second, const RirRpsConfig& config,
                          Rng& rng) {
  RirRpsGame game(config);
  EpisodeResult result;
  result.rounds.reserve(static_cast<std::size_t>(config.repetitions));
  while (!game.Done()) {
    RoundRecord rec;
    rec.state = {game.Observation(0), game.Observation(1)};
    rec.action[0] = first.Act(rec.state[0], rng);
    rec.action[1] = second.Act(rec.state[1], rng);
    StepResult step = game.Step(rec.action[0], rec.action[1]);
    rec.reward = {step.reward[0], step.reward[1]};
    result.rounds.push_back(rec);
  }
  result.cumulative = game.cumulative();
  result.winner = DecideWinner(result.cumulative, rng);
  return result;
}

// One trajectory log line: episode id then the joint-action indices.
inline std::string TrajectoryLine(std::uint64_t episode, const EpisodeResult& result) {
  std::string line = std::to_string(episode);
  for (int idx : result.JointActionIndices()) {
    line += ' ';
    line += std::to_string(idx);
  }
  line += '\n';
  return line;
}

}  // namespace gsp

#endif  // GSP_RIRRPS_HPP_

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

#include "gsp/learner.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "gsp/agent.hpp"

namespace gsp {
namespace {

double LogProb(const TabularSoftmaxPolicy& p, std::size_t s, Action a) {
  return std::log(p.Probs(s)[static_cast<int>(a)]);
}

// Surrogate whose gradient the learner follows: sum_t w_t log pi(a_t|s_t).
double Surrogate(const TabularSoftmaxPolicy& p, const std::vector<Transition>& traj,
                 const std::vector<double>& w) {
  double f = 0.0;
  for (std::size_t t = 0; t < traj.size(); ++t) f += w[t] * LogProb(p, traj[t].state, traj[t].action);
  return f;
}

TabularSoftmaxPolicy RandomTable(std::size_t states, Rng& rng) {
  TabularSoftmaxPolicy p(states);
  for (std::size_t s = 0; s < states; ++s)
    for (int a = 0; a < kNumActions; ++a) p.logit(s, a) = 4.0 * rng.Uniform() - 2.0;
  return p;
}

std::vector<Transition> RandomTrajectory(std::size_t states, std::size_t len, Rng& rng) {
  std::vector<Transition> traj;
  for (std::size_t t = 0; t < len; ++t)
    traj.push_back({rng.UniformInt(states), static_cast<Action>(rng.UniformInt(3)),
                    static_cast<double>(static_cast<int>(rng.UniformInt(3)) - 1)});
  return traj;
}

TEST(Act, ZeroLogitsAreUniform) {
  TabularSoftmaxPolicy p;
  Rng rng(1);
  const int draws = 100000;
  std::array<int, 3> counts{};
  for (int i = 0; i < draws; ++i) ++counts[static_cast<int>(p.Act(0, rng))];
  const double sigma = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (int c : counts) EXPECT_NEAR(c, draws / 3.0, 3 * sigma);
}

TEST(Act, PeakedLogits) {
  TabularSoftmaxPolicy p;
  p.logit(7, 0) = 10.0;
  p.logit(7, 1) = -10.0;
  p.logit(7, 2) = -10.0;
  EXPECT_NEAR(p.Probs(7)[0], 1.0 / (1.0 + 2.0 * std::exp(-20.0)), 1e-15);
  Rng rng(2);
  int rock = 0;
  for (int i = 0; i < 100000; ++i) rock += p.Act(7, rng) == Action::kRock;
  EXPECT_GT(rock / 100000.0, 0.999);
}

TEST(Act, DeterministicGivenSeed) {
  Rng init(3);
  auto p = RandomTable(20, init);
  Rng a(11), b(11);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(p.Act(i % 20, a), p.Act(i % 20, b));
}

TEST(Update, ZeroRewardZeroBaselineLeavesLogitsUnchanged) {
  Rng rng(4);
  auto p = RandomTable(30, rng);
  auto before = p;
  auto traj = RandomTrajectory(30, 10, rng);
  for (auto& t : traj) t.reward = 0.0;
  ReinforceLearner learner;
  learner.Update(p, traj);
  EXPECT_EQ(p, before);
}

TEST(Update, RewardedActionGainsProbability) {
  TabularSoftmaxPolicy p;
  ReinforceLearner learner;
  const double before = p.Probs(0)[1];
  learner.Update(p, {{0, Action::kPaper, 1.0}});
  EXPECT_GT(p.Probs(0)[1], before);
  EXPECT_LT(p.Probs(0)[0], 1.0 / 3);
}

TEST(Update, ScoreFunctionMatchesCentralDifferences) {
  Rng rng(5);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t states = 1 + rng.UniformInt(6);
    auto p = RandomTable(states, rng);
    auto traj = RandomTrajectory(states, 1 + rng.UniformInt(10), rng);
    std::vector<double> w(traj.size());
    for (double& x : w) x = 4.0 * rng.Uniform() - 2.0;
    auto grad = ScoreFunctionGradient(p, traj, w);
    for (std::size_t s = 0; s < states; ++s)
      for (int a = 0; a < kNumActions; ++a) {
        auto plus = p, minus = p;
        plus.logit(s, a) += h;
        minus.logit(s, a) -= h;
        const double fd = (Surrogate(plus, traj, w) - Surrogate(minus, traj, w)) / (2 * h);
        EXPECT_NEAR(grad[s * 3 + a], fd, 1e-6);
      }
  }
}

TEST(Update, StepIsLearningRateTimesAdvantageWeightedScore) {
  Rng rng(6);
  LearnerConfig cfg{0.05, 0.99, 0.9};
  ReinforceLearner learner(cfg);
  auto p = RandomTable(8, rng);
  auto warmup = RandomTrajectory(8, 10, rng);
  learner.Update(p, warmup);  // make the baseline nonzero
  auto baseline = learner.baseline();
  auto traj = RandomTrajectory(8, 10, rng);
  auto returns = DiscountedReturns(traj, cfg.discount);
  std::vector<double> adv(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) adv[t] = returns[t] - baseline[t];
  auto before = p;
  learner.Update(p, traj);
  const double h = 1e-5;
  for (std::size_t s = 0; s < 8; ++s)
    for (int a = 0; a < 3; ++a) {
      auto plus = before, minus = before;
      plus.logit(s, a) += h;
      minus.logit(s, a) -= h;
      const double fd = (Surrogate(plus, traj, adv) - Surrogate(minus, traj, adv)) / (2 * h);
      EXPECT_NEAR((p.logit(s, a) - before.logit(s, a)) / cfg.learning_rate, fd, 1e-6);
    }
  for (std::size_t t = 0; t < traj.size(); ++t)
    EXPECT_NEAR(learner.baseline()[t], 0.9 * baseline[t] + 0.1 * returns[t], 1e-12);
}

TEST(Update, DiscountedReturns) {
  std::vector<Transition> traj{{0, Action::kRock, 1.0}, {0, Action::kRock, 0.0}, {0, Action::kRock, -1.0}};
  auto g = DiscountedReturns(traj, 0.5);
  EXPECT_DOUBLE_EQ(g[2], -1.0);
  EXPECT_DOUBLE_EQ(g[1], -0.5);
  EXPECT_DOUBLE_EQ(g[0], 0.75);
}

TEST(Update, ProbabilitiesStayNormalized) {
  Rng rng(7);
  TabularSoftmaxPolicy p(40);
  ReinforceLearner learner(LearnerConfig{0.5, 0.99, 0.9});
  for (int i = 0; i < 200; ++i) {
    learner.Update(p, RandomTrajectory(40, 10, rng));
    for (std::size_t s = 0; s < 40; ++s) {
      auto pr = p.Probs(s);
      EXPECT_NEAR(pr[0] + pr[1] + pr[2], 1.0, 1e-9);
      for (double v : pr) EXPECT_GT(v, 0.0);
    }
  }
}

TEST(Update, RejectsStatesOutsideTable) {
  TabularSoftmaxPolicy p(5);
  ReinforceLearner learner;
  EXPECT_THROW(learner.Update(p, {{5, Action::kRock, 1.0}}), std::out_of_range);
}

TEST(Snapshot, DeepCopyAndRestore) {
  Rng rng(8);
  auto p = RandomTable(820, rng);
  FrozenPolicy snap = Freeze(p);
  p.logit(0, 0) += 1.0;
  EXPECT_NE(*snap, p);
  TabularSoftmaxPolicy restored = *snap;
  Rng a(1), b(1);
  for (int i = 0; i < 500; ++i) EXPECT_EQ(restored.Act(i % 820, a), snap->Act(i % 820, b));
}

TEST(Snapshot, FileRoundTripIsBitExact) {
  Rng rng(9);
  auto p = RandomTable(820, rng);
  p.logit(3, 1) = 1e-300;
  p.logit(4, 2) = -0.1;
  const std::string text = SerializePolicy(p, 42);
  auto loaded = ParsePolicy(text);
  EXPECT_EQ(loaded.policy, p);
  ASSERT_TRUE(loaded.stamp.has_value());
  EXPECT_EQ(*loaded.stamp, 42);
  EXPECT_EQ(SerializePolicy(loaded.policy, 42), text);
  EXPECT_THROW(ParsePolicy("0 1 2\n"), IoError);
  EXPECT_THROW(ParsePolicy("1 0 0 0\n"), IoError);
}

TEST(Learning, BeatsFixedRock) {
  TabularSoftmaxPolicy p;
  ReinforceLearner learner;
  FixedAgent rock{FixedKind::kRock};
  RirRpsConfig env;
  for (int e = 0; e < 2000; ++e) {
    Rng rng(DeriveSeed({1, static_cast<std::uint64_t>(e)}));
    auto ep = PlayEpisode(p, rock, env, rng);
    learner.Update(p, SeatTransitions(ep, 0));
  }
  Rng eval(12345);
  int wins = 0;
  for (int i = 0; i < 1000; ++i) wins += PlayEpisode(p, rock, env, eval).winner == 0;
  EXPECT_GE(wins / 1000.0, 0.95);
}

}  // namespace
}  // namespace gsp

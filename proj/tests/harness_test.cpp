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

#include "gsp/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>

namespace gsp {
namespace {

namespace fs = std::filesystem;

fs::path ScratchDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gsp_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<Agent> Rps() {
  return {MakeFixedAgent(FixedKind::kRock), MakeFixedAgent(FixedKind::kPaper),
          MakeFixedAgent(FixedKind::kScissors)};
}

ExperimentConfig Small(SelfPlayScheme scheme, const fs::path& out) {
  ExperimentConfig c;
  c.scheme = scheme;
  c.episodes = 100;
  c.checkpoints = 10;
  c.seed = 99;
  c.out = out.string();
  return c;
}

TEST(Config, ParsesKeysAndComments) {
  auto c = ParseConfig(
      "# comment\n"
      "scheme = psro   # trailing comment\n"
      "psro_w = 0.8\n"
      "psro_n_matches=30\n"
      "episodes = 500\n"
      "checkpoints = 5\n"
      "seed = 18446744073709551615\n"
      "learning_rate = 0.1\n"
      "threads = 4\n"
      "\n");
  EXPECT_EQ(c.scheme.kind, SchemeKind::kPsro);
  EXPECT_EQ(c.scheme.w, 0.8);
  EXPECT_EQ(c.scheme.n_matches, 30);
  EXPECT_EQ(c.episodes, 500);
  EXPECT_EQ(c.checkpoints, 5);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(c.learner.learning_rate, 0.1);
  EXPECT_EQ(c.threads, 4u);
  EXPECT_EQ(c.sims_per_entry, 30);
  EXPECT_EQ(c.env.repetitions, 10);
  EXPECT_EQ(c.env.recall, 3);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(ParseConfig("colour = blue\n"), ConfigError);
  EXPECT_THROW(ParseConfig("episodes = many\n"), ConfigError);
  EXPECT_THROW(ParseConfig("episodes\n"), ConfigError);
  EXPECT_THROW(ParseConfig("scheme = league\n"), ConfigError);
  EXPECT_THROW(ParseConfig("seed = -1\n"), ConfigError);
  auto c = ParseConfig("episodes = 5\ncheckpoints = 6\n");
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(Config, HashIgnoresOutputLocationAndThreads) {
  ExperimentConfig a, b;
  b.out = "elsewhere";
  b.threads = 8;
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  b.seed = 1;
  EXPECT_NE(ConfigHash(a), ConfigHash(b));
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Train, CheckpointsAreEvenlySpaced) {
  EXPECT_EQ(CheckpointEpisodes(100, 10), (std::vector<int>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100}));
  EXPECT_EQ(CheckpointEpisodes(10, 3), (std::vector<int>{3, 6, 10}));
  EXPECT_EQ(SnapshotFileName(7, 100), "007.policy");
  EXPECT_EQ(SnapshotFileName(7, 1000), "0007.policy");
}

TEST(Train, WritesSnapshotsManifestAndLogs) {
  auto dir = ScratchDir("train");
  auto r = Train(Small(SelfPlayScheme::DeltaUniform(0.0), dir));
  ASSERT_TRUE(r.ok());
  for (int k = 1; k <= 10; ++k) {
    auto loaded = ParsePolicy(ReadFile(dir / "snapshots" / SnapshotFileName(k, 10)));
    EXPECT_EQ(loaded.stamp, 10 * k);
    EXPECT_EQ(loaded.policy, r.snapshots[k - 1]);
  }
  auto manifest = nlohmann::json::parse(ReadFile(dir / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 99);
  EXPECT_EQ(manifest["scheme"]["name"], "delta_uniform");
  EXPECT_EQ(manifest["status"], "complete");
  EXPECT_EQ(manifest["menagerie_size"]["final"], 101);
  EXPECT_EQ(manifest["snapshots"].size(), 10u);
  auto log = ParseTrainingLog(ReadFile(dir / "training.log"));
  ASSERT_EQ(log.episodes.size(), 100u);
  for (const auto& e : log.episodes) {
    EXPECT_LT(e.opponent, e.episode);
    EXPECT_EQ(e.menagerie_size, static_cast<std::size_t>(e.episode + 1));
  }
  EXPECT_TRUE(log.insertions.empty());
  std::string traj = ReadFile(dir / "trajectories.log");
  EXPECT_EQ(std::count(traj.begin(), traj.end(), '\n'), 100);
  EXPECT_EQ(traj.rfind("1 ", 0), 0u);
  fs::remove_all(dir);
}

TEST(Train, NaiveMenagerieStaysSingleton) {
  auto dir = ScratchDir("naive");
  auto r = Train(Small(SelfPlayScheme::Naive(), dir));
  auto manifest = nlohmann::json::parse(ReadFile(dir / "manifest.json"));
  EXPECT_EQ(manifest["menagerie_size"]["min"], 1);
  EXPECT_EQ(manifest["menagerie_size"]["max"], 1);
  for (const auto& e : ParseTrainingLog(ReadFile(dir / "training.log")).episodes) {
    EXPECT_EQ(e.menagerie_size, 1u);
    EXPECT_EQ(e.opponent, e.episode - 1);
  }
  fs::remove_all(dir);
}

TEST(Train, SameSeedGivesIdenticalFiles) {
  auto a = ScratchDir("det_a"), b = ScratchDir("det_b");
  for (auto scheme : {SelfPlayScheme::DeltaLimitUniform(0.5), SelfPlayScheme::Psro(0.6, 10)}) {
    auto ca = Small(scheme, a), cb = Small(scheme, b);
    cb.threads = 8;
    Train(ca);
    Train(cb);
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
      if (!entry.is_regular_file()) continue;
      auto rel = fs::relative(entry.path(), a);
      EXPECT_EQ(ReadFile(entry.path()), ReadFile(b / rel)) << rel;
    }
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST(Train, PsroLogSatisfiesGate) {
  auto dir = ScratchDir("psro");
  auto c = Small(SelfPlayScheme::Psro(0.6, 20), dir);
  c.episodes = 1500;
  auto r = Train(c);
  ASSERT_TRUE(r.ok());
  auto log = ParseTrainingLog(ReadFile(dir / "training.log"));
  ASSERT_GT(log.insertions.size(), 0u);
  EXPECT_EQ(r.insertions, log.insertions.size());
  std::vector<bool> window;
  std::size_t next = 0;
  for (const auto& e : log.episodes) {
    window.push_back(e.win);
    if (next < log.insertions.size() && log.insertions[next].episode == e.episode) {
      ASSERT_GE(window.size(), 20u);
      const int wins = static_cast<int>(std::count(window.end() - 20, window.end(), true));
      EXPECT_EQ(wins, log.insertions[next].wins);
      EXPECT_GE(wins / 20.0, 0.6);
      window.clear();
      ++next;
    }
  }
  EXPECT_EQ(next, log.insertions.size());
  fs::remove_all(dir);
}

TEST(Matrix, FixedAgentsCycle) {
  for (int sims : {1, 30}) {
    auto w = EstimateWinrateMatrix(Rps(), sims, 5);
    EXPECT_EQ(w.values(), (DenseMatrix{{0.5, 0.0, 1.0}, {1.0, 0.5, 0.0}, {0.0, 1.0, 0.5}}));
    EXPECT_EQ(w.labels(), (std::vector<std::string>{"rock", "paper", "scissors"}));
  }
  auto one = EstimateWinrateMatrix({MakeFixedAgent(FixedKind::kRandom)}, 30, 5);
  EXPECT_EQ(one.values(), DenseMatrix{{0.5}});
}

TEST(Matrix, IndependentOfWorkerCount) {
  Rng rng(3);
  std::vector<Agent> pop;
  for (int k = 0; k < 6; ++k) {
    TabularSoftmaxPolicy p;
    for (std::size_t s = 0; s < p.num_states(); ++s)
      for (int a = 0; a < 3; ++a) p.logit(s, a) = rng.Uniform() * 2 - 1;
    pop.emplace_back(Freeze(p), "p" + std::to_string(k));
  }
  pop.push_back(MakeFixedAgent(FixedKind::kRandom));
  auto serial = EstimateWinrateMatrix(pop, 30, 11, {}, 1);
  auto parallel = EstimateWinrateMatrix(pop, 30, 11, {}, 8);
  EXPECT_EQ(ToCsv(serial), ToCsv(parallel));
  auto cs = EstimateCrossWinrateMatrix(pop, Rps(), 30, 11, {}, 1);
  auto cp = EstimateCrossWinrateMatrix(pop, Rps(), 30, 11, {}, 8);
  EXPECT_EQ(ToCsv(cs), ToCsv(cp));
}

TEST(Analyze, RpsArtifacts) {
  auto dir = ScratchDir("analyze");
  auto w = EstimateWinrateMatrix(Rps(), 30, 1);
  auto report = Analyze(w, dir, {true, {}});
  for (const auto& s : report) EXPECT_TRUE(s.ok) << s.artifact << ": " << s.message;
  EXPECT_EQ(ReadFile(dir / "nash_support.csv"),
            "index,label,probability\n1,rock,0.333333\n2,paper,0.333333\n3,scissors,0.333333\n");
  EXPECT_EQ(ReadFile(dir / "evaluation.csv"), ToCsv(WinrateToEvaluation(w)));
  std::string series = ReadFile(dir / "nash_support_series.csv");
  EXPECT_EQ(series.substr(0, series.find('\n')), "k,rock,paper,scissors");
  std::string svg = ReadFile(dir / "heatmap.svg");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n'), 1 + 9 + 3 + 2);
  fs::remove_all(dir);
}

TEST(Analyze, HeatmapColormap) {
  EXPECT_EQ(HexColor(HeatmapColor(0.5)), "#ffffff");
  EXPECT_EQ(HexColor(HeatmapColor(1.0)), "#2166ac");
  EXPECT_EQ(HexColor(HeatmapColor(0.0)), "#b2182b");
  auto c = HeatmapColor(0.75);
  EXPECT_EQ(c, (std::array<int, 3>{144, 179, 214}));  // midpoint of white and blue, rounded
  auto lo = HeatmapColor(0.49), hi = HeatmapColor(0.51);
  EXPECT_GT(lo[0], lo[2]);
  EXPECT_GT(hi[2], hi[0]);
}

TEST(Analyze, SelfRppIsZero) {
  auto dir = ScratchDir("rpp");
  auto pop = Rps();
  pop.push_back(MakeFixedAgent(FixedKind::kRandom));
  auto w = EstimateCrossWinrateMatrix(pop, pop, 30, 2);
  // Cross estimates of the same population are independent draws, so make
  // the mirror image exact before checking the zero-sum identity.
  DenseMatrix m = w.values();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = i == j ? 0.5 : (i < j ? m(i, j) : 1.0 - m(j, i));
  const double v = AnalyzeRpp(CrossWinrateMatrix(m, 30, w.row_labels(), w.col_labels()), dir);
  EXPECT_NEAR(v, 0.0, 1e-9);
  EXPECT_EQ(ReadFile(dir / "rpp_evolution.csv"),
            "index,value\n1,0.000000\n2,0.000000\n3,0.000000\n4,0.000000\n");
  fs::remove_all(dir);
}

TEST(Sweep, UnreachableGateAndTimerPartition) {
  ExperimentConfig base;
  base.episodes = 600;
  base.seed = 4;
  auto rows = PsroSweep(ParseSweepGrid("1.01:5, 0.6:20"), base);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].menagerie_size, 1u);
  EXPECT_EQ(rows[0].meta_pct, 0.0);
  EXPECT_EQ(rows[0].matrix_pct, 0.0);
  for (const auto& r : rows) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_GE(r.meta_pct, 0.0);
    EXPECT_GE(r.matrix_pct, 0.0);
    EXPECT_LE(r.meta_pct + r.matrix_pct, 100.0);
    EXPECT_GE(r.menagerie_size, 1u);
  }
  std::string csv = SweepReportCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "w,n_matches,meta_pct,matrix_pct,total_seconds,menagerie_size,status");
  EXPECT_NE(csv.find("\n1.010000,5,0.000000,0.000000,"), std::string::npos);
  EXPECT_THROW(ParseSweepGrid(""), ConfigError);
  EXPECT_THROW(ParseSweepGrid("0.7"), ConfigError);
}

}  // namespace
}  // namespace gsp

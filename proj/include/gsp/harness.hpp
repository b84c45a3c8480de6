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

// Experiment orchestration: configuration, the self-play training loop,
// checkpointing, winrate-matrix estimation, analysis artifacts and the PSRO
// timing sweep.
//
// Seeds: training episode e uses hash(seed, kTrainTag, e); a matrix entry's
// s-th simulation uses hash(seed, tag, i, j, s). Results therefore do not
// depend on the number of worker threads.

#ifndef GSP_HARNESS_HPP_
#define GSP_HARNESS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gsp/agent.hpp"
#include "gsp/csv.hpp"
#include "gsp/learner.hpp"
#include "gsp/metagame.hpp"
#include "gsp/nash.hpp"
#include "gsp/parallel.hpp"
#include "gsp/population_metrics.hpp"
#include "gsp/rirrps.hpp"
#include "gsp/rng.hpp"
#include "gsp/selfplay.hpp"

namespace gsp {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kTrainTag = 1;
inline constexpr std::uint64_t kMatchTag = 2;
inline constexpr std::uint64_t kCrossMatchTag = 3;
inline constexpr std::uint64_t kPsroMatchTag = 4;

struct ExperimentConfig {
  SelfPlayScheme scheme = SelfPlayScheme::DeltaUniform(0.0);
  int episodes = 12800;
  int checkpoints = 100;
  int sims_per_entry = 30;
  std::uint64_t seed = 0;
  RirRpsConfig env{};
  LearnerConfig learner{};
  bool log_trajectories = true;
  bool save_menagerie = false;
  // Not part of the experiment's identity: neither affects any result.
  std::string out = "run";
  unsigned threads = 1;

  void Validate() const {
    scheme.Validate();
    env.Validate();
    learner.Validate();
    if (episodes < 1) throw ConfigError("episodes must be positive");
    if (checkpoints < 1) throw ConfigError("checkpoints must be positive");
    if (checkpoints > episodes) throw ConfigError("checkpoints may not exceed episodes");
    if (sims_per_entry < 1) throw ConfigError("sims_per_entry must be positive");
    if (threads < 1) throw ConfigError("threads must be positive");
  }
};

namespace detail {

inline std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline bool ParseBool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true or false, got " + v);
}

}  // namespace detail

inline void SetConfigValue(ExperimentConfig& c, const std::string& key, const std::string& value) {
  auto integer = [&] {
    try {
      return ParseInt(value);
    } catch (const IoError&) {
      throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
  };
  auto real = [&] {
    try {
      return ParseDouble(value);
    } catch (const IoError&) {
      throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
  };
  if (key == "scheme") {
    try {
      c.scheme.kind = ParseSchemeKind(value);
    } catch (const SelfPlayError& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "delta") c.scheme.delta = real();
  else if (key == "psro_w") c.scheme.w = real();
  else if (key == "psro_n_matches") c.scheme.n_matches = static_cast<int>(integer());
  else if (key == "episodes") c.episodes = static_cast<int>(integer());
  else if (key == "checkpoints") c.checkpoints = static_cast<int>(integer());
  else if (key == "sims_per_entry") c.sims_per_entry = static_cast<int>(integer());
  else if (key == "seed") {
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigError("seed must be a nonnegative integer");
    c.seed = std::stoull(value);
  } else if (key == "repetitions") c.env.repetitions = static_cast<int>(integer());
  else if (key == "recall") c.env.recall = static_cast<int>(integer());
  else if (key == "learning_rate") c.learner.learning_rate = real();
  else if (key == "discount") c.learner.discount = real();
  else if (key == "baseline_decay") c.learner.baseline_decay = real();
  else if (key == "log_trajectories") c.log_trajectories = detail::ParseBool(value);
  else if (key == "save_menagerie") c.save_menagerie = detail::ParseBool(value);
  else if (key == "out") c.out = value;
  else if (key == "threads") c.threads = static_cast<unsigned>(std::max<long long>(0, integer()));
  else throw ConfigError("unknown config key: " + key);
}

// "key = value" lines; '#' starts a comment. Later keys override earlier.
inline ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string t = detail::Trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    SetConfigValue(c, detail::Trim(t.substr(0, eq)), detail::Trim(t.substr(eq + 1)));
  }
  return c;
}

// Canonical text of everything that determines results.
inline std::string CanonicalConfig(const ExperimentConfig& c) {
  std::string s;
  auto kv = [&](const char* k, const std::string& v) { s += std::string(k) + " = " + v + "\n"; };
  kv("scheme", c.scheme.Name());
  kv("delta", ExactDouble(c.scheme.delta));
  kv("psro_w", ExactDouble(c.scheme.w));
  kv("psro_n_matches", std::to_string(c.scheme.n_matches));
  kv("episodes", std::to_string(c.episodes));
  kv("checkpoints", std::to_string(c.checkpoints));
  kv("sims_per_entry", std::to_string(c.sims_per_entry));
  kv("seed", std::to_string(c.seed));
  kv("repetitions", std::to_string(c.env.repetitions));
  kv("recall", std::to_string(c.env.recall));
  kv("learning_rate", ExactDouble(c.learner.learning_rate));
  kv("discount", ExactDouble(c.learner.discount));
  kv("baseline_decay", ExactDouble(c.learner.baseline_decay));
  return s;
}

inline std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string ConfigHash(const ExperimentConfig& c) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(CanonicalConfig(c))));
  return buf;
}

// Episodes after which the live policy is frozen: floor(k E / C), k = 1..C.
inline std::vector<int> CheckpointEpisodes(int episodes, int checkpoints) {
  std::vector<int> out;
  for (int k = 1; k <= checkpoints; ++k)
    out.push_back(static_cast<int>(static_cast<long long>(k) * episodes / checkpoints));
  return out;
}

inline std::string SnapshotFileName(int index, int total) {
  const std::size_t width = std::max<std::size_t>(3, std::to_string(total).size());
  std::string digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits + ".policy";
}

// Plays `sims` episodes, `row` in the first seat, and returns its win
// fraction. Simulation s is seeded with hash(seed, tag, i, j, s).
template <typename Row, typename Col>
double WinFraction(const Row& row, const Col& col, const RirRpsConfig& env, int sims,
                   std::uint64_t seed, std::uint64_t tag, std::size_t i, std::size_t j) {
  int wins = 0;
  for (int s = 0; s < sims; ++s) {
    Rng rng(DeriveSeed({seed, tag, i, j, static_cast<std::uint64_t>(s)}));
    wins += PlayEpisode(row, col, env, rng).winner == 0;
  }
  return static_cast<double>(wins) / sims;
}

// --- training ---------------------------------------------------------------

struct EpisodeLogLine {
  int episode = 0;
  std::int64_t opponent = 0;  // stamp of the sampled menagerie entry
  bool win = false;
  std::size_t menagerie_size = 0;  // after curation
};

struct InsertLogLine {
  int episode = 0;
  int wins = 0;
  int count = 0;
};

struct TrainingLog {
  std::vector<EpisodeLogLine> episodes;
  std::vector<InsertLogLine> insertions;
};

inline std::string FormatEpisodeLine(const EpisodeLogLine& l) {
  return "episode " + std::to_string(l.episode) + " opponent " + std::to_string(l.opponent) +
         " win " + (l.win ? "1" : "0") + " size " + std::to_string(l.menagerie_size) + "\n";
}

inline std::string FormatInsertLine(const InsertLogLine& l) {
  return "insert " + std::to_string(l.episode) + " wins " + std::to_string(l.wins) + " of " +
         std::to_string(l.count) + "\n";
}

inline TrainingLog ParseTrainingLog(std::string_view text) {
  TrainingLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag, k1, k2, k3;
    if (line.rfind("episode ", 0) == 0) {
      EpisodeLogLine e;
      int win = 0;
      ls >> tag >> e.episode >> k1 >> e.opponent >> k2 >> win >> k3 >> e.menagerie_size;
      if (!ls || k1 != "opponent" || k2 != "win" || k3 != "size") throw IoError("bad log line: " + line);
      e.win = win != 0;
      log.episodes.push_back(e);
    } else if (line.rfind("insert ", 0) == 0) {
      InsertLogLine e;
      ls >> tag >> e.episode >> k1 >> e.wins >> k2 >> e.count;
      if (!ls || k1 != "wins" || k2 != "of") throw IoError("bad log line: " + line);
      log.insertions.push_back(e);
    } else {
      throw IoError("bad log line: " + line);
    }
  }
  return log;
}

struct TrainResult {
  std::string status = "complete";  // or "aborted"
  std::string error;
  std::vector<int> checkpoint_episodes;
  std::vector<TabularSoftmaxPolicy> snapshots;
  std::size_t min_menagerie = 0, max_menagerie = 0, final_menagerie = 0;
  std::size_t insertions = 0;  // PSRO gate firings
  double meta_seconds = 0.0;
  double matrix_seconds = 0.0;
  double total_seconds = 0.0;
  std::string training_log;
  std::string trajectories_log;

  bool ok() const { return status == "complete"; }
};

struct TrainOptions {
  bool write_files = true;
};

inline std::string ManifestJson(const ExperimentConfig& c, const TrainResult& r) {
  nlohmann::ordered_json m;
  m["seed"] = c.seed;
  m["scheme"] = {{"name", c.scheme.Name()}, {"delta", c.scheme.delta}, {"w", c.scheme.w},
                 {"n_matches", c.scheme.n_matches}};
  m["config_hash"] = "fnv1a64:" + ConfigHash(c);
  m["config"] = CanonicalConfig(c);
  m["episodes"] = c.episodes;
  m["checkpoints"] = c.checkpoints;
  m["checkpoint_episodes"] = r.checkpoint_episodes;
  auto& files = m["snapshots"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.snapshots.size(); ++k)
    files.push_back("snapshots/" + SnapshotFileName(static_cast<int>(k + 1), c.checkpoints));
  m["menagerie_size"] = {{"min", r.min_menagerie}, {"max", r.max_menagerie}, {"final", r.final_menagerie}};
  m["psro_insertions"] = r.insertions;
  m["status"] = r.status;
  m["error"] = r.error;
  return m.dump(2) + "\n";
}

// Runs the self-play loop: sample an opponent, play one episode with the
// live policy in the first seat, update, curate. Snapshots of the live
// policy (not the menagerie) are taken at the checkpoint episodes.
inline TrainResult Train(const ExperimentConfig& config, const TrainOptions& options = {}) {
  config.Validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const std::filesystem::path out(config.out);

  TrainResult r;
  r.checkpoint_episodes = CheckpointEpisodes(config.episodes, config.checkpoints);
  TabularSoftmaxPolicy live(NumRecallStates(config.env.recall));
  ReinforceLearner learner(config.learner);
  SelfPlay sp(config.scheme, live, SelfPlayOptions{config.sims_per_entry, config.threads, {}});
  MatchRunner runner = [&](const TabularSoftmaxPolicy& a, const TabularSoftmaxPolicy& b,
                           std::size_t i, std::size_t j) {
    return WinFraction(a, b, config.env, config.sims_per_entry, config.seed, kPsroMatchTag, i, j);
  };
  r.min_menagerie = r.max_menagerie = sp.menagerie().size();
  r.training_log = "# episode <e> opponent <stamp> win <0|1> size <menagerie size>\n";
  if (config.scheme.kind == SchemeKind::kPsro)
    r.training_log += "# insert <e> wins <w> of <n_matches>\n";
  const bool psro = config.scheme.kind == SchemeKind::kPsro;

  try {
    std::size_t next_checkpoint = 0;
    for (int e = 1; e <= config.episodes; ++e) {
      Rng rng(DeriveSeed({config.seed, kTrainTag, static_cast<std::uint64_t>(e)}));
      Opponent opp = sp.SampleOpponent(live, rng);
      EpisodeResult ep = PlayEpisode(live, *opp.policy, config.env, rng);
      learner.Update(live, SeatTransitions(ep, 0));
      const bool won = ep.winner == 0;
      CurateResult cur = sp.Curate(live, e, won, runner);
      const std::size_t size = sp.menagerie().size();
      r.min_menagerie = std::min(r.min_menagerie, size);
      r.max_menagerie = std::max(r.max_menagerie, size);
      r.training_log += FormatEpisodeLine({e, opp.stamp, won, size});
      if (psro && cur.inserted) {
        ++r.insertions;
        r.training_log += FormatInsertLine({e, cur.trailing_wins, cur.trailing_count});
      }
      if (config.log_trajectories) r.trajectories_log += TrajectoryLine(static_cast<std::uint64_t>(e), ep);
      while (next_checkpoint < r.checkpoint_episodes.size() && r.checkpoint_episodes[next_checkpoint] == e) {
        r.snapshots.push_back(live);
        if (options.write_files)
          WriteFileAtomic(out / "snapshots" / SnapshotFileName(static_cast<int>(next_checkpoint + 1), config.checkpoints),
                          SerializePolicy(live, e));
        ++next_checkpoint;
      }
    }
  } catch (const NashError& e) {
    r.status = "aborted";
    r.error = e.what();
  }
  r.final_menagerie = sp.menagerie().size();
  r.meta_seconds = sp.psro().meta_seconds;
  r.matrix_seconds = sp.psro().matrix_seconds;
  if (options.write_files) {
    WriteFileAtomic(out / "training.log", r.training_log);
    if (config.log_trajectories) WriteFileAtomic(out / "trajectories.log", r.trajectories_log);
    if (config.save_menagerie) SaveMenagerie(out / "menagerie", sp.menagerie(), sp.scheme());
    WriteFileAtomic(out / "manifest.json", ManifestJson(config, r));
  }
  r.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

// --- matrix estimation ------------------------------------------------------

// Unordered pairs only: w_ij is estimated for i < j and w_ji = 1 - w_ij.
inline WinrateMatrix EstimateWinrateMatrix(const std::vector<Agent>& population, int sims,
                                           std::uint64_t seed, const RirRpsConfig& env = {},
                                           unsigned threads = 1) {
  const std::size_t n = population.size();
  if (n == 0) throw MetagameError("population is empty");
  if (sims < 1) throw MetagameError("sims must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<double> values(pairs.size());
  ParallelFor(pairs.size(), threads, [&](std::size_t k) {
    auto [i, j] = pairs[k];
    values[k] = WinFraction(population[i], population[j], env, sims, seed, kMatchTag, i, j);
  });
  std::vector<std::string> labels;
  for (const auto& a : population) labels.push_back(a.label());
  DenseMatrix upper(n, n, 0.0);
  for (std::size_t k = 0; k < pairs.size(); ++k) upper(pairs[k].first, pairs[k].second) = values[k];
  return WinrateMatrix::FromUpperTriangle(
      n, sims, [&](std::size_t i, std::size_t j) { return upper(i, j); }, std::move(labels));
}

inline CrossWinrateMatrix EstimateCrossWinrateMatrix(const std::vector<Agent>& rows,
                                                     const std::vector<Agent>& cols, int sims,
                                                     std::uint64_t seed, const RirRpsConfig& env = {},
                                                     unsigned threads = 1) {
  if (rows.empty() || cols.empty()) throw MetagameError("population is empty");
  if (sims < 1) throw MetagameError("sims must be positive");
  DenseMatrix w(rows.size(), cols.size());
  ParallelFor(rows.size() * cols.size(), threads, [&](std::size_t k) {
    const std::size_t i = k / cols.size(), j = k % cols.size();
    w(i, j) = WinFraction(rows[i], cols[j], env, sims, seed, kCrossMatchTag, i, j);
  });
  std::vector<std::string> rl, cl;
  for (const auto& a : rows) rl.push_back(a.label());
  for (const auto& a : cols) cl.push_back(a.label());
  return CrossWinrateMatrix(std::move(w), sims, std::move(rl), std::move(cl));
}

// --- analysis -----------------------------------------------------------------

// Diverging map: red at 0, white exactly at 0.5, blue at 1.
inline std::array<int, 3> HeatmapColor(double w) {
  constexpr std::array<int, 3> kBlue{33, 102, 172}, kRed{178, 24, 43};
  const double t = std::clamp(2.0 * w - 1.0, -1.0, 1.0);
  const auto& end = t >= 0.0 ? kBlue : kRed;
  const double s = std::abs(t);
  std::array<int, 3> c{};
  for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(255.0 + s * (end[k] - 255.0)));
  return c;
}

inline std::string HexColor(std::array<int, 3> c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

inline std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Winrate heatmap (row i's winrate against column j) with an optional bar
// to the right shading each policy by its Nash support.
inline std::string HeatmapSvg(const WinrateMatrix& w, const MixedStrategy* nash = nullptr) {
  const std::size_t n = w.size();
  const int cell = static_cast<int>(std::clamp<std::size_t>(600 / n, 4, 40));
  const int grid = cell * static_cast<int>(n);
  const int bar_x = grid + cell;
  const int width = nash ? bar_x + cell : grid;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
                    "\" height=\"" + std::to_string(grid) + "\" viewBox=\"0 0 " + std::to_string(width) +
                    " " + std::to_string(grid) + "\" shape-rendering=\"crispEdges\">\n";
  auto rect = [&](int x, int y, const std::string& fill) {
    svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
           std::to_string(cell) + "\" height=\"" + std::to_string(cell) + "\" fill=\"" + fill + "\"/>\n";
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rect(static_cast<int>(j) * cell, static_cast<int>(i) * cell, HexColor(HeatmapColor(w(i, j))));
  if (nash) {
    double top = 0.0;
    for (double p : nash->probs()) top = std::max(top, p);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = (*nash)[i] < kSupportThreshold ? 0.0 : (*nash)[i];
      const int g = static_cast<int>(std::lround(255.0 * (1.0 - p / top)));
      rect(bar_x, static_cast<int>(i) * cell, HexColor({g, g, g}));
    }
  }
  svg += "<title>" + XmlEscape("winrate matrix, " + std::to_string(n) + " policies") + "</title>\n";
  svg += "</svg>\n";
  return svg;
}

inline std::string NashSupportCsv(const MixedStrategy& s, const std::vector<std::string>& labels) {
  std::string out = "index,label,probability\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += std::to_string(i + 1) + "," + labels[i] + "," + Fixed6(s[i] < kSupportThreshold ? 0.0 : s[i]) + "\n";
  return out;
}

// Row k: Nash support of the leading k x k subgame, zero-padded.
inline std::string NashSeriesCsv(const std::vector<MixedStrategy>& series,
                                 const std::vector<std::string>& labels) {
  std::string out = "k";
  for (const auto& l : labels) out += "," + l;
  out += "\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    out += std::to_string(k + 1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double p = i < series[k].size() ? series[k][i] : 0.0;
      out += "," + Fixed6(p < kSupportThreshold ? 0.0 : p);
    }
    out += "\n";
  }
  return out;
}

struct ArtifactStatus {
  std::string artifact;
  bool ok = true;
  std::string message;
};

struct AnalyzeOptions {
  bool support_series = false;
  NashOptions nash{};
};

// Writes evaluation.csv, nash_support.csv, heatmap.svg and optionally
// nash_support_series.csv. A solver failure is reported for the affected
// artifact and the remaining artifacts are still produced.
inline std::vector<ArtifactStatus> Analyze(const WinrateMatrix& w, const std::filesystem::path& out,
                                           const AnalyzeOptions& options = {}) {
  std::vector<ArtifactStatus> report;
  const EvaluationMatrix a = WinrateToEvaluation(w);
  WriteFileAtomic(out / "evaluation.csv", ToCsv(a));
  report.push_back({"evaluation.csv", true, ""});
  std::optional<MixedStrategy> nash;
  try {
    NashSolution sol = MaxentNash(a, options.nash);
    nash = sol.strategy;
    WriteFileAtomic(out / "nash_support.csv", NashSupportCsv(sol.strategy, w.labels()));
    report.push_back({"nash_support.csv", true, ""});
  } catch (const NashError& e) {
    report.push_back({"nash_support.csv", false, e.what()});
  }
  if (options.support_series) {
    try {
      WriteFileAtomic(out / "nash_support_series.csv",
                      NashSeriesCsv(NashSupportSeries(a, options.nash), w.labels()));
      report.push_back({"nash_support_series.csv", true, ""});
    } catch (const NashError& e) {
      report.push_back({"nash_support_series.csv", false, e.what()});
    }
  }
  WriteFileAtomic(out / "heatmap.svg", HeatmapSvg(w, nash ? &*nash : nullptr));
  report.push_back({"heatmap.svg", true, nash ? "" : "drawn without Nash bar"});
  return report;
}

// Writes rpp_evolution.csv and returns the full-population value.
inline double AnalyzeRpp(const CrossWinrateMatrix& w, const std::filesystem::path& out) {
  const CrossEvaluationMatrix a = WinrateToEvaluation(w);
  std::vector<double> evo = RppEvolution(a);
  WriteFileAtomic(out / "rpp_evolution.csv", RppEvolutionCsv(evo));
  return evo.back();
}

// --- PSRO sweep -------------------------------------------------------------

struct SweepCell {
  double w = 0.72;
  int n_matches = 50;
};

struct SweepRow {
  SweepCell cell;
  double meta_pct = 0.0;
  double matrix_pct = 0.0;
  double total_seconds = 0.0;
  std::size_t menagerie_size = 1;
  std::string status = "ok";
};

inline std::vector<SweepCell> ParseSweepGrid(const std::string& spec) {
  std::vector<SweepCell> grid;
  std::size_t p = 0;
  while (p <= spec.size()) {
    std::size_t q = spec.find(',', p);
    if (q == std::string::npos) q = spec.size();
    std::string item = detail::Trim(std::string_view(spec).substr(p, q - p));
    p = q + 1;
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("sweep cell must be w:n_matches, got " + item);
    try {
      grid.push_back({ParseDouble(item.substr(0, colon)), static_cast<int>(ParseInt(item.substr(colon + 1)))});
    } catch (const IoError&) {
      throw ConfigError("bad sweep cell " + item);
    }
  }
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  return grid;
}

// One in-memory PSRO run per cell. Failures are recorded, not thrown.
inline std::vector<SweepRow> PsroSweep(const std::vector<SweepCell>& grid, ExperimentConfig base) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  std::vector<SweepRow> rows;
  for (const SweepCell& cell : grid) {
    SweepRow row;
    row.cell = cell;
    ExperimentConfig c = base;
    c.scheme = SelfPlayScheme::Psro(cell.w, cell.n_matches);
    c.checkpoints = 1;
    c.log_trajectories = false;
    c.save_menagerie = false;
    try {
      TrainResult r = Train(c, TrainOptions{false});
      row.total_seconds = r.total_seconds;
      if (r.total_seconds > 0.0) {
        row.meta_pct = 100.0 * r.meta_seconds / r.total_seconds;
        row.matrix_pct = 100.0 * r.matrix_seconds / r.total_seconds;
      }
      row.menagerie_size = r.final_menagerie;
      if (!r.ok()) row.status = "aborted: " + r.error;
    } catch (const std::exception& e) {
      row.status = std::string("failed: ") + e.what();
    }
    for (char& ch : row.status)
      if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    rows.push_back(row);
  }
  return rows;
}

inline std::string SweepReportCsv(const std::vector<SweepRow>& rows) {
  std::string out = "w,n_matches,meta_pct,matrix_pct,total_seconds,menagerie_size,status\n";
  for (const auto& r : rows)
    out += Fixed6(r.cell.w) + "," + std::to_string(r.cell.n_matches) + "," + Fixed6(r.meta_pct) + "," +
           Fixed6(r.matrix_pct) + "," + Fixed6(r.total_seconds) + "," + std::to_string(r.menagerie_size) +
           "," + r.status + "\n";
  return out;
}

}  // namespace gsp

#endif  // GSP_HARNESS_HPP_

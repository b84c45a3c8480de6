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

// gsp: train self-play populations and analyze them.
//
//   gsp train   --config run.cfg [--seed N] [--out DIR] [--threads T]
//   gsp matrix  --population DIR... [--vs DIR...] [--sims 30] [--seed N] --out DIR
//   gsp analyze --matrix winrate.csv --out DIR [--series]
//   gsp rpp     --matrix cross_winrate.csv --out DIR
//   gsp sweep   --grid 0.72:50,0.99:50 [--episodes N] [--seed N] --out DIR

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gsp/harness.hpp"

namespace {

using namespace gsp;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "key = value experiment config file");
    app->add_option("--seed", seed, "override the config seed");
    app->add_option("--out", out, "output directory");
    app->add_option("--threads", threads, "worker threads for match simulation");
  }

  ExperimentConfig Load() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : ParseConfig(ReadFile(config_path));
    if (seed) c.seed = *seed;
    if (out) c.out = *out;
    if (threads) c.threads = *threads;
    return c;
  }
};

int RunTrain(const Common& common) {
  ExperimentConfig c = common.Load();
  TrainResult r = Train(c);
  std::printf("%s: %d episodes, %zu snapshots, menagerie size %zu, status %s\n", c.out.c_str(),
              c.episodes, r.snapshots.size(), r.final_menagerie, r.status.c_str());
  if (!r.ok()) {
    std::fprintf(stderr, "training aborted: %s\n", r.error.c_str());
    return 1;
  }
  return 0;
}

int RunMatrix(const Common& common, const std::vector<std::string>& population,
              const std::vector<std::string>& vs, std::optional<int> sims) {
  ExperimentConfig c = common.Load();
  if (sims) c.sims_per_entry = *sims;
  const std::filesystem::path out(c.out);
  if (vs.empty()) {
    auto w = EstimateWinrateMatrix(LoadPopulation(population), c.sims_per_entry, c.seed, c.env, c.threads);
    WriteFileAtomic(out / "winrate.csv", ToCsv(w));
    std::printf("wrote %s (%zu policies)\n", (out / "winrate.csv").c_str(), w.size());
  } else {
    auto w = EstimateCrossWinrateMatrix(LoadPopulation(population), LoadPopulation(vs), c.sims_per_entry,
                                        c.seed, c.env, c.threads);
    WriteFileAtomic(out / "cross_winrate.csv", ToCsv(w));
    std::printf("wrote %s (%zu x %zu)\n", (out / "cross_winrate.csv").c_str(), w.rows(), w.cols());
  }
  return 0;
}

int RunAnalyze(const std::string& matrix, const std::string& out, bool series) {
  auto report = Analyze(WinrateFromCsv(ReadFile(matrix)), out, {series, {}});
  int failures = 0;
  for (const auto& s : report) {
    std::printf("%-26s %s%s%s\n", s.artifact.c_str(), s.ok ? "ok" : "FAILED",
                s.message.empty() ? "" : ": ", s.message.c_str());
    failures += !s.ok;
  }
  return failures ? 2 : 0;
}

int RunRpp(const std::string& matrix, const std::string& out) {
  const double v = AnalyzeRpp(CrossWinrateFromCsv(ReadFile(matrix)), out);
  std::printf("relative population performance %s\n", Fixed6(v).c_str());
  return 0;
}

int RunSweep(const Common& common, const std::string& grid, std::optional<int> episodes) {
  ExperimentConfig c = common.Load();
  if (episodes) c.episodes = *episodes;
  auto rows = PsroSweep(ParseSweepGrid(grid), c);
  const std::filesystem::path out(c.out);
  WriteFileAtomic(out / "sweep_report.csv", SweepReportCsv(rows));
  for (const auto& r : rows)
    std::printf("w=%.2f n=%d  M %.2f%%  W %.2f%%  %.2fs  |menagerie| %zu  %s\n", r.cell.w, r.cell.n_matches,
                r.meta_pct, r.matrix_pct, r.total_seconds, r.menagerie_size, r.status.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized self-play training and evaluation"};
  app.require_subcommand(1);

  Common train_opts, matrix_opts, sweep_opts;
  auto* train = app.add_subcommand("train", "run self-play and write checkpoints");
  train_opts.Register(train);

  auto* matrix = app.add_subcommand("matrix", "estimate a winrate matrix between checkpoints");
  matrix_opts.Register(matrix);
  std::vector<std::string> population, vs;
  std::optional<int> sims;
  matrix->add_option("--population", population, "run dirs, snapshot dirs, policy files or fixed:<kind>")
      ->required();
  matrix->add_option("--vs", vs, "second population; writes a cross matrix");
  matrix->add_option("--sims", sims, "simulations per entry");

  auto* analyze = app.add_subcommand("analyze", "evaluation matrix, maxent Nash and heatmap");
  std::string analyze_matrix, analyze_out = ".";
  bool series = false;
  analyze->add_option("--matrix", analyze_matrix, "winrate.csv")->required();
  analyze->add_option("--out", analyze_out, "output directory");
  analyze->add_flag("--series", series, "also write the Nash support of every leading subgame");

  auto* rpp = app.add_subcommand("rpp", "relative population performance evolution");
  std::string rpp_matrix, rpp_out = ".";
  rpp->add_option("--matrix", rpp_matrix, "cross_winrate.csv")->required();
  rpp->add_option("--out", rpp_out, "output directory");

  auto* sweep = app.add_subcommand("sweep", "PSRO (w, n_matches) timing sweep");
  sweep_opts.Register(sweep);
  std::string grid;
  std::optional<int> episodes;
  sweep->add_option("--grid", grid, "comma separated w:n_matches cells")->required();
  sweep->add_option("--episodes", episodes, "episodes per cell");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*train) return RunTrain(train_opts);
    if (*matrix) return RunMatrix(matrix_opts, population, vs, sims);
    if (*analyze) return RunAnalyze(analyze_matrix, analyze_out, series);
    if (*rpp) return RunRpp(rpp_matrix, rpp_out);
    if (*sweep) return RunSweep(sweep_opts, grid, episodes);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

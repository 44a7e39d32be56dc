// Copyright 2026 The splitleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// splitleak: train split-learning runs and audit their cut-layer gradients.
//
//   splitleak run --dataset spambase --path data/spambase.data --method all
//   splitleak select-delta --dataset spambase --path data/spambase.data
//   splitleak sigma-sweep --sigmas 0.01,0.25,1 ...
//   splitleak multiclient --split 19,19,19 ...
//   splitleak report --dir out/
//
// Failures print {"error": kind, "message": ...} on stderr and exit 2.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "splitleak/errors.h"
#include "splitleak/experiment.h"

namespace {

namespace ex = splitleak::experiment;

constexpr const char* kOutEnv = "SPLITLEAK_OUT";

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> sets;
  std::string dataset, path, method, seeds, outdir, split;
  std::string workers, epochs, delta, sigma, clients;
};

void AddCommon(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("-c,--config", a.config_file, "key = value config file");
  cmd->add_option("--set", a.sets, "override, key=value (repeatable)");
  cmd->add_option("--dataset", a.dataset, "spambase | credit | imdb | synthetic");
  cmd->add_option("--path", a.path, "dataset file");
  cmd->add_option("--method", a.method, "comma list or 'all'");
  cmd->add_option("--seeds", a.seeds, "e.g. 0-9 or 0,2,4");
  cmd->add_option("--outdir", a.outdir,
                  std::string("output directory (default $") + kOutEnv +
                      " or ./splitleak-out)");
  cmd->add_option("--split", a.split, "features per client, e.g. 19,19,19");
  cmd->add_option("--workers", a.workers, "parallel runs");
  cmd->add_option("--epochs", a.epochs, "training epochs");
  cmd->add_option("--delta", a.delta, "randomized-response half width");
  cmd->add_option("--sigma", a.sigma, "critic label noise sd");
  cmd->add_option("--clients", a.clients, "passive parties");
}

ex::ExperimentConfig BuildConfig(const CommonArgs& a) {
  ex::ExperimentConfig c;
  if (const char* root = std::getenv(kOutEnv); root && *root) c.outdir = root;
  if (!a.config_file.empty()) ex::ApplyConfigFile(c, a.config_file);
  const std::pair<const char*, const std::string*> flags[] = {
      {"dataset", &a.dataset}, {"path", &a.path},       {"method", &a.method},
      {"seeds", &a.seeds},     {"outdir", &a.outdir},   {"clients", &a.clients},
      {"split", &a.split},     {"workers", &a.workers}, {"epochs", &a.epochs},
      {"delta", &a.delta},     {"sigma", &a.sigma},
  };
  for (const auto& [key, value] : flags) {
    if (!value->empty()) ex::ApplyOption(c, key, *value);
  }
  for (const auto& kv : a.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw splitleak::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    ex::ApplyOption(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  c.Validate();
  return c;
}

std::vector<double> ParseList(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = std::min(text.find(',', start), text.size());
    const std::string part = text.substr(start, pos - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw splitleak::ConfigError("bad number '" + part + "' in list");
    }
    start = pos + 1;
  }
  return out;
}

void PrintRuns(const std::vector<ex::RunOutput>& runs) {
  std::vector<ex::RunRow> rows;
  for (const auto& r : runs) rows.push_back(r.row);
  std::cout << ex::SummaryMarkdown(rows);
}

int Fail(const std::string& kind, const std::string& message) {
  const nlohmann::json j = {{"error", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-learning label-leakage experiments"};
  app.require_subcommand(1);

  CommonArgs run_args, sel_args, sweep_args, multi_args;
  auto* run = app.add_subcommand("run", "train a method x seed grid");
  AddCommon(run, run_args);

  auto* sel = app.add_subcommand("select-delta",
                                 "pick delta on a small labelled subsample");
  AddCommon(sel, sel_args);
  std::string grid = "0.05,0.1,0.2,0.3,0.5";
  double fraction = 0.1, tau = 0.6;
  std::size_t reps = 5;
  std::uint64_t sel_seed = 0;
  sel->add_option("--grid", grid, "candidate deltas");
  sel->add_option("--fraction", fraction, "subsample fraction");
  sel->add_option("--reps", reps, "runs per delta");
  sel->add_option("--tau", tau, "minimum mean train AUC");
  sel->add_option("--selection-seed", sel_seed, "subsample seed");

  auto* sweep = app.add_subcommand("sigma-sweep", "GAFM over several sigmas");
  AddCommon(sweep, sweep_args);
  std::string sigmas = "0.01,0.25,1";
  sweep->add_option("--sigmas", sigmas, "comma list");

  auto* multi = app.add_subcommand("multiclient",
                                   "several passive parties, averaged cut");
  AddCommon(multi, multi_args);

  auto* report = app.add_subcommand("report", "rebuild summary.md");
  std::string report_dir;
  report->add_option("--dir", report_dir, "directory with results.csv")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) {
      const auto cfg = BuildConfig(run_args);
      const auto runs = ex::RunTable(cfg);
      ex::EmitReports(runs, cfg.outdir);
      PrintRuns(runs);
    } else if (sel->parsed()) {
      auto cfg = BuildConfig(sel_args);
      ex::DeltaSelectionSpec spec;
      spec.grid = ParseList(grid);
      spec.subsample_fraction = fraction;
      spec.reps = reps;
      spec.tau = tau;
      spec.seed = sel_seed;
      const auto source = ex::LoadSource(cfg);
      const auto result = ex::SelectDelta(cfg, source, spec);
      const std::string json = ex::DeltaSelectionJson(result);
      ex::WriteTextFile(cfg.outdir / "delta_selection.json", json);
      std::cout << json;
    } else if (sweep->parsed()) {
      const auto cfg = BuildConfig(sweep_args);
      const auto source = ex::LoadSource(cfg);
      for (const auto& point : ex::SigmaSweep(cfg, source, ParseList(sigmas))) {
        ex::EmitReports(point.runs,
                        cfg.outdir / fmt::format("sigma_{}", point.sigma));
        std::cout << fmt::format("sigma = {}\n", point.sigma);
        PrintRuns(point.runs);
      }
    } else if (multi->parsed()) {
      const auto cfg = BuildConfig(multi_args);
      const auto runs = ex::RunMulticlient(cfg, ex::LoadSource(cfg));
      ex::EmitReports(runs, cfg.outdir);
      PrintRuns(runs);
    } else if (report->parsed()) {
      const auto rows = ex::RebuildSummary(report_dir);
      std::cout << ex::SummaryMarkdown(rows);
    }
  } catch (const splitleak::Error& e) {
    return Fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return Fail("internal", e.what());
  }
  return 0;
}

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

// Seeded experiment grids over datasets and methods, plus the report files.

#ifndef SPLITLEAK_EXPERIMENT_H_
#define SPLITLEAK_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitleak/data.h"
#include "splitleak/gafm.h"
#include "splitleak/method.h"
#include "splitleak/metrics.h"

namespace splitleak::experiment {

struct ExperimentConfig {
  std::string dataset = "spambase";  // spambase | credit | imdb | synthetic
  std::filesystem::path path;        // data file; unused for synthetic
  std::vector<Method> methods{Method::kGafm};
  gafm::TrainConfig train;           // seed is overwritten per run
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::size_t clients = 1;
  std::vector<std::size_t> split;    // features per client; empty = even
  std::filesystem::path outdir = "splitleak-out";
  std::size_t workers = 1;
  data::Scaling scaling = data::Scaling::kMinMax;
  // Unset: 0.5 for imdb, 0.7 otherwise.
  std::optional<double> train_fraction;
  std::size_t synthetic_rows = 2000;
  std::size_t synthetic_dim = 10;
  double synthetic_separation = 2.0;
  double synthetic_positive_fraction = 0.4;

  double EffectiveTrainFraction() const;
  // Throws ConfigError.
  void Validate() const;
};

// Sets one documented key. Throws ConfigError on unknown keys or bad values.
void ApplyOption(ExperimentConfig& config, std::string_view key,
                 std::string_view value);

// Flat `key = value` lines; '#' starts a comment. Later lines win.
void ApplyConfigText(ExperimentConfig& config, std::string_view text);
void ApplyConfigFile(ExperimentConfig& config,
                     const std::filesystem::path& file);

// Loaded once per grid and shared read-only by all runs.
struct DataSource {
  std::string name;
  std::optional<data::Dataset> table;
  std::optional<data::ImdbCorpus> imdb;

  std::size_t rows() const;
};

DataSource LoadSource(const ExperimentConfig& config);

// Seeded split followed by scaling fitted on the train side.
data::TrainTest PrepareSplit(const DataSource& source, double train_fraction,
                             std::uint64_t seed, data::Scaling scaling);

// Client partition: config.split if given, otherwise as even as possible
// with the remainder on the first clients.
data::FeaturePartition ClientPartition(std::size_t dim,
                                       const ExperimentConfig& config);

struct RunRow {
  Method method = Method::kGafm;
  std::string dataset;
  std::uint64_t seed = 0;
  double train_auc = 0.0;
  double test_auc = 0.0;
  double leak_norm = 0.0;
  double leak_mean = 0.0;
  double leak_median = 0.0;
  double tvd = 0.0;
};

struct RunOutput {
  RunRow row;
  double raw_test_auc = 0.0;  // before orientation
  bool flipped = false;
  gafm::TrainResult training;
  metrics::LeakReport leak;
};

// One method on one split; the split is assumed already scaled.
RunOutput RunOne(Method method, const std::string& dataset_name,
                 const data::TrainTest& split, const ExperimentConfig& config,
                 std::uint64_t seed);

// Every (method, seed) pair of the config on a fresh split per seed. Rows
// come back in method-major, seed-minor order whatever the worker count.
std::vector<RunOutput> RunTable(const ExperimentConfig& config);
std::vector<RunOutput> RunTable(const ExperimentConfig& config,
                                const DataSource& source);

struct DeltaSelectionSpec {
  std::vector<double> grid{0.05, 0.1, 0.2, 0.3, 0.5};
  double subsample_fraction = 0.1;
  std::size_t reps = 5;
  double tau = 0.6;
  std::uint64_t seed = 0;  // picks the subsample and the rep seeds
};

struct DeltaSelection {
  DeltaSelectionSpec spec;
  std::vector<double> ratio;       // per grid entry
  std::vector<double> train_auc;   // per grid entry, mean over reps
  std::vector<bool> feasible;      // train_auc >= tau
  double chosen = 0.0;
  std::size_t subsample_rows = 0;
};

// Ratios are per-rep, per-attack leak AUC / train AUC averaged jointly.
// Throws NoFeasibleDelta when no grid entry reaches tau.
DeltaSelection SelectDelta(const ExperimentConfig& config,
                           const DataSource& source,
                           const DeltaSelectionSpec& spec);

struct SigmaPoint {
  double sigma = 0.0;
  std::vector<RunOutput> runs;
};

std::vector<SigmaPoint> SigmaSweep(const ExperimentConfig& config,
                                   const DataSource& source,
                                   const std::vector<double>& sigmas);

// RunTable with config.clients parties (3 if the config says 1) under the
// averaging aggregator.
std::vector<RunOutput> RunMulticlient(const ExperimentConfig& config,
                                      const DataSource& source);

// mean and sample standard deviation (NaN for fewer than two values).
struct CellStats {
  double mean = 0.0;
  double sd = 0.0;
};
CellStats Summarize(const std::vector<double>& values);

// "0.94±0.01"; the sd part is dropped when it is NaN.
std::string FormatCell(const CellStats& cell);

inline constexpr std::string_view kResultsHeader =
    "method,dataset,seed,train_auc,test_auc,leak_norm,leak_mean,leak_median,"
    "tvd";

std::string ResultsCsv(const std::vector<RunRow>& rows);
std::vector<RunRow> ParseResultsCsv(std::string_view text);
std::string SummaryMarkdown(const std::vector<RunRow>& rows);
std::string CutRecordsTsv(const std::vector<CutRecord>& records);
std::string MetricsCsv(const std::vector<gafm::EpochMetrics>& epochs);
std::string LeakReportJson(const RunOutput& run);
std::string DeltaSelectionJson(const DeltaSelection& selection);

// results.csv, summary.md and leak_report.json in `outdir`, plus one
// <method>_seed<k>/ directory per run with cut_records.tsv, metrics.csv and
// leak_report.json. Throws IoError with the failing path.
void EmitReports(const std::vector<RunOutput>& runs,
                 const std::filesystem::path& outdir);

// Reads outdir/results.csv and rewrites outdir/summary.md.
std::vector<RunRow> RebuildSummary(const std::filesystem::path& outdir);

void WriteTextFile(const std::filesystem::path& file, std::string_view text);
std::string ReadTextFile(const std::filesystem::path& file);

}  // namespace splitleak::experiment

#endif  // SPLITLEAK_EXPERIMENT_H_

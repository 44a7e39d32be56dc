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

#include "splitleak/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"
#include "splitleak/baselines.h"
#include "splitleak/errors.h"
#include "splitleak/protocol.h"
#include "splitleak/random.h"

namespace splitleak::experiment {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitOn(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(Trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  throw ConfigError(fmt::format("bad value '{}' for key '{}'", value, key));
}

double ParseDouble(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end || value.empty()) {
    BadValue(key, value);
  }
  return out;
}

std::uint64_t ParseUnsigned(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end || value.empty()) {
    BadValue(key, value);
  }
  return out;
}

std::vector<std::size_t> ParseSizes(std::string_view key,
                                    std::string_view value) {
  std::vector<std::size_t> out;
  if (Trim(value).empty()) return out;
  for (auto part : SplitOn(value, ',')) out.push_back(ParseUnsigned(key, part));
  return out;
}

// "0-9", "0,3,5" or a mix such as "0-2,7".
std::vector<std::uint64_t> ParseSeeds(std::string_view key,
                                      std::string_view value) {
  std::vector<std::uint64_t> seeds;
  for (auto part : SplitOn(value, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      seeds.push_back(ParseUnsigned(key, part));
      continue;
    }
    const auto lo = ParseUnsigned(key, Trim(part.substr(0, dash)));
    const auto hi = ParseUnsigned(key, Trim(part.substr(dash + 1)));
    if (hi < lo) BadValue(key, value);
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  BadValue(key, value);
}

// Runs job(i) for i in [0, count) on up to `workers` threads. The first
// exception (by job index) is rethrown after all threads finish.
void ParallelFor(std::size_t count, std::size_t workers,
                 const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(workers, count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

struct Trained {
  protocol::SplitSession session;
  gafm::ActiveState active;
  gafm::TrainResult result;
  gafm::TrainConfig train;
};

Trained TrainOn(Method method, const data::Dataset& train,
                const ExperimentConfig& config, std::uint64_t seed) {
  gafm::TrainConfig cfg = config.train;
  cfg.seed = seed;
  cfg.on_epoch = nullptr;
  if (method == Method::kGanOnly) cfg.gamma = 0.0;
  const auto partition = ClientPartition(train.dim(), config);
  auto session = protocol::MakeSession(train.features, partition,
                                       cfg.arch.local_hidden, seed,
                                       cfg.arch.leaky_slope);
  auto active = gafm::ActiveState::Create(train.labels, cfg);
  auto result = baselines::RunBaseline(method, session, active, cfg);
  return {std::move(session), std::move(active), std::move(result), cfg};
}

// Re-throws a library error with the run it came from.
[[noreturn]] void RethrowWithContext(const Error& e, Method method,
                                     std::uint64_t seed) {
  throw Error(e.kind(), fmt::format("{} seed {}: {}", MethodName(method), seed,
                                    e.what()));
}

}  // namespace

double ExperimentConfig::EffectiveTrainFraction() const {
  if (train_fraction) return *train_fraction;
  return dataset == "imdb" ? 0.5 : 0.7;
}

void ExperimentConfig::Validate() const {
  if (dataset != "spambase" && dataset != "credit" && dataset != "imdb" &&
      dataset != "synthetic") {
    throw ConfigError("unknown dataset '" + dataset + "'");
  }
  if (dataset != "synthetic" && path.empty()) {
    throw ConfigError("dataset '" + dataset + "' needs a path");
  }
  if (methods.empty()) throw ConfigError("method list is empty");
  if (seeds.empty()) throw ConfigError("seed list is empty");
  if (clients == 0) throw ConfigError("clients must be >= 1");
  if (!split.empty() && split.size() != clients) {
    throw ConfigError(fmt::format("split has {} entries for {} clients",
                                  split.size(), clients));
  }
  if (workers == 0) throw ConfigError("workers must be >= 1");
  const double f = EffectiveTrainFraction();
  if (!(f > 0.0 && f < 1.0)) throw ConfigError("train_fraction must be in (0, 1)");
  train.Validate();
}

void ApplyOption(ExperimentConfig& c, std::string_view key,
                 std::string_view value) {
  key = Trim(key);
  value = Trim(value);
  if (key == "dataset") {
    c.dataset = std::string(value);
  } else if (key == "path") {
    c.path = std::filesystem::path(std::string(value));
  } else if (key == "method" || key == "methods") {
    c.methods.clear();
    if (value == "all") {
      c.methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
    } else {
      for (auto part : SplitOn(value, ',')) c.methods.push_back(ParseMethod(part));
    }
  } else if (key == "delta") {
    c.train.delta = ParseDouble(key, value);
  } else if (key == "sigma") {
    c.train.sigma = ParseDouble(key, value);
  } else if (key == "gamma") {
    c.train.gamma = ParseDouble(key, value);
  } else if (key == "clip") {
    c.train.clip = ParseDouble(key, value);
  } else if (key == "epochs") {
    c.train.epochs = ParseUnsigned(key, value);
  } else if (key == "batch") {
    c.train.batch_size = ParseUnsigned(key, value);
  } else if (key == "lr_d") {
    c.train.lr_d = ParseDouble(key, value);
  } else if (key == "lr_g") {
    c.train.lr_g = ParseDouble(key, value);
  } else if (key == "lr_l") {
    c.train.lr_l = ParseDouble(key, value);
  } else if (key == "lr") {
    c.train.lr_d = c.train.lr_g = c.train.lr_l = ParseDouble(key, value);
  } else if (key == "seeds") {
    c.seeds = ParseSeeds(key, value);
  } else if (key == "clients") {
    c.clients = ParseUnsigned(key, value);
  } else if (key == "split") {
    c.split = ParseSizes(key, value);
    if (!c.split.empty()) c.clients = c.split.size();
  } else if (key == "outdir") {
    c.outdir = std::filesystem::path(std::string(value));
  } else if (key == "workers") {
    c.workers = ParseUnsigned(key, value);
  } else if (key == "scaling") {
    if (value == "minmax") {
      c.scaling = data::Scaling::kMinMax;
    } else if (value == "zscore") {
      c.scaling = data::Scaling::kZScore;
    } else {
      BadValue(key, value);
    }
  } else if (key == "train_fraction") {
    c.train_fraction = ParseDouble(key, value);
  } else if (key == "redraw") {
    if (value == "batch") {
      c.train.redraw = gafm::ResponseRedraw::kPerBatch;
    } else if (value == "epoch") {
      c.train.redraw = gafm::ResponseRedraw::kPerEpoch;
    } else {
      BadValue(key, value);
    }
  } else if (key == "vanilla_head") {
    c.train.vanilla_head = ParseBool(key, value);
  } else if (key == "max_norm_noise_scale") {
    c.train.max_norm_noise_scale = ParseDouble(key, value);
  } else if (key == "leaky_slope") {
    c.train.arch.leaky_slope = ParseDouble(key, value);
  } else if (key == "local_hidden") {
    c.train.arch.local_hidden = ParseSizes(key, value);
  } else if (key == "generator_hidden") {
    c.train.arch.generator_hidden = ParseSizes(key, value);
  } else if (key == "discriminator_hidden") {
    c.train.arch.discriminator_hidden = ParseSizes(key, value);
  } else if (key == "synthetic_rows") {
    c.synthetic_rows = ParseUnsigned(key, value);
  } else if (key == "synthetic_dim") {
    c.synthetic_dim = ParseUnsigned(key, value);
  } else if (key == "synthetic_separation") {
    c.synthetic_separation = ParseDouble(key, value);
  } else if (key == "synthetic_positive_fraction") {
    c.synthetic_positive_fraction = ParseDouble(key, value);
  } else {
    throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
}

void ApplyConfigText(ExperimentConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  for (auto line : SplitOn(text, '\n')) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = Trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected key = value", line_no));
    }
    ApplyOption(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void ApplyConfigFile(ExperimentConfig& config,
                     const std::filesystem::path& file) {
  ApplyConfigText(config, ReadTextFile(file));
}

std::size_t DataSource::rows() const {
  if (table) return table->size();
  if (imdb) return imdb->labels.size();
  return 0;
}

DataSource LoadSource(const ExperimentConfig& config) {
  DataSource src;
  src.name = config.dataset;
  if (config.dataset == "spambase") {
    src.table = data::LoadSpambase(config.path);
  } else if (config.dataset == "credit") {
    src.table = data::LoadCredit(config.path);
  } else if (config.dataset == "imdb") {
    src.imdb = data::ReadImdbExport(config.path);
  } else if (config.dataset == "synthetic") {
    // A fixed draw; the run seeds only change the split and the models.
    src.table = data::SyntheticGaussian(
        config.synthetic_rows, config.synthetic_dim,
        config.synthetic_separation, config.synthetic_positive_fraction, 0);
  } else {
    throw ConfigError("unknown dataset '" + config.dataset + "'");
  }
  return src;
}

data::TrainTest PrepareSplit(const DataSource& source, double train_fraction,
                             std::uint64_t seed, data::Scaling scaling) {
  const data::SplitSpec spec{train_fraction, seed};
  data::TrainTest tt;
  if (source.imdb) {
    tt = data::ImdbTrainTest(*source.imdb, spec);
  } else if (source.table) {
    tt = data::TrainTestSplit(*source.table, spec);
  } else {
    throw DataError("empty data source");
  }
  data::Standardize(tt, scaling);
  return tt;
}

data::FeaturePartition ClientPartition(std::size_t dim,
                                       const ExperimentConfig& config) {
  if (!config.split.empty()) return data::PartitionFeatures(dim, config.split);
  const std::size_t p = config.clients;
  if (p == 0 || p > dim) {
    throw ConfigError(fmt::format("cannot split {} features over {} clients",
                                  dim, p));
  }
  std::vector<std::size_t> counts(p, dim / p);
  for (std::size_t i = 0; i < dim % p; ++i) ++counts[i];
  return data::PartitionFeatures(dim, counts);
}

RunOutput RunOne(Method method, const std::string& dataset_name,
                 const data::TrainTest& split, const ExperimentConfig& config,
                 std::uint64_t seed) {
  try {
    Trained t = TrainOn(method, split.train, config, seed);
    RunOutput out;
    out.training = std::move(t.result);
    out.flipped = t.active.flip_scores;
    out.leak = metrics::ComputeLeakReport(out.training.records);
    RunRow& row = out.row;
    row.method = method;
    row.dataset = dataset_name;
    row.seed = seed;
    row.train_auc = out.training.epochs.back().train_auc;
    row.test_auc = kNaN;
    out.raw_test_auc = kNaN;
    if (split.test.size() > 0) {
      const auto scores = baselines::PredictScores(
          method, t.session, t.active, split.test.features, t.train);
      try {
        row.test_auc = metrics::Auc(scores, split.test.labels.values());
        out.raw_test_auc = out.flipped ? 1.0 - row.test_auc : row.test_auc;
      } catch (const MetricError&) {
        // one-class test side: leave NaN
      }
    }
    row.leak_norm = out.leak.leak_norm;
    row.leak_mean = out.leak.leak_mean;
    row.leak_median = out.leak.leak_median;
    row.tvd = out.leak.tvd;
    return out;
  } catch (const Error& e) {
    RethrowWithContext(e, method, seed);
  }
}

std::vector<RunOutput> RunTable(const ExperimentConfig& config) {
  config.Validate();
  return RunTable(config, LoadSource(config));
}

std::vector<RunOutput> RunTable(const ExperimentConfig& config,
                                const DataSource& source) {
  config.Validate();
  const double fraction = config.EffectiveTrainFraction();
  // Splits depend only on the seed; build each once and share it.
  std::vector<data::TrainTest> splits(config.seeds.size());
  ParallelFor(splits.size(), config.workers, [&](std::size_t i) {
    splits[i] = PrepareSplit(source, fraction, config.seeds[i], config.scaling);
  });
  const std::size_t per_method = config.seeds.size();
  std::vector<RunOutput> runs(config.methods.size() * per_method);
  ParallelFor(runs.size(), config.workers, [&](std::size_t i) {
    const Method m = config.methods[i / per_method];
    const std::size_t s = i % per_method;
    runs[i] = RunOne(m, source.name, splits[s], config, config.seeds[s]);
  });
  return runs;
}

DeltaSelection SelectDelta(const ExperimentConfig& config,
                           const DataSource& source,
                           const DeltaSelectionSpec& spec) {
  if (spec.grid.empty()) throw ConfigError("delta grid is empty");
  for (double d : spec.grid) {
    if (!(d >= 0.0 && d <= 0.5)) {
      throw ConfigError(fmt::format("delta {} outside [0, 0.5]", d));
    }
  }
  if (spec.reps == 0) throw ConfigError("reps must be >= 1");
  if (!(spec.subsample_fraction > 0.0 && spec.subsample_fraction <= 1.0)) {
    throw ConfigError("subsample fraction must be in (0, 1]");
  }
  const std::size_t n = source.rows();
  const auto m = static_cast<std::size_t>(
      std::llround(spec.subsample_fraction * static_cast<double>(n)));
  if (m < 2) throw DataError("subsample has fewer than two rows");

  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0);
  Rng rng = StreamFor(spec.seed, "subsample");
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(m);
  std::sort(rows.begin(), rows.end());

  data::Dataset sub;
  if (source.imdb) {
    sub = data::EncodeImdb(*source.imdb, rows, data::TopWords(*source.imdb, rows));
  } else if (source.table) {
    sub = source.table->Select(rows);
  } else {
    throw DataError("empty data source");
  }
  data::ApplyScaling(sub.features, data::FitScaling(sub.features, config.scaling));

  DeltaSelection sel;
  sel.spec = spec;
  sel.subsample_rows = m;
  const std::size_t k = spec.grid.size();
  std::vector<double> ratio_sum(k * spec.reps);
  std::vector<double> auc(k * spec.reps);
  ParallelFor(k * spec.reps, config.workers, [&](std::size_t i) {
    ExperimentConfig c = config;
    c.train.delta = spec.grid[i / spec.reps];
    const std::uint64_t seed = spec.seed * 1000 + i % spec.reps;
    try {
      Trained t = TrainOn(Method::kGafm, sub, c, seed);
      const auto leak = metrics::ComputeLeakReport(t.result.records);
      auc[i] = t.result.epochs.back().train_auc;
      ratio_sum[i] = (leak.leak_norm + leak.leak_mean + leak.leak_median) / auc[i];
    } catch (const Error& e) {
      RethrowWithContext(e, Method::kGafm, seed);
    }
  });

  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < k; ++j) {
    double r = 0.0;
    double a = 0.0;
    for (std::size_t rep = 0; rep < spec.reps; ++rep) {
      r += ratio_sum[j * spec.reps + rep];
      a += auc[j * spec.reps + rep];
    }
    sel.ratio.push_back(r / static_cast<double>(3 * spec.reps));
    sel.train_auc.push_back(a / static_cast<double>(spec.reps));
    sel.feasible.push_back(sel.train_auc.back() >= spec.tau);
    if (!sel.feasible.back()) continue;
    if (!best || sel.ratio[j] < sel.ratio[*best] ||
        (sel.ratio[j] == sel.ratio[*best] && spec.grid[j] < spec.grid[*best])) {
      best = j;
    }
  }
  if (!best) {
    throw NoFeasibleDelta(fmt::format(
        "no delta reaches mean train AUC {} (best {:.3f})", spec.tau,
        *std::max_element(sel.train_auc.begin(), sel.train_auc.end())));
  }
  sel.chosen = spec.grid[*best];
  return sel;
}

std::vector<SigmaPoint> SigmaSweep(const ExperimentConfig& config,
                                   const DataSource& source,
                                   const std::vector<double>& sigmas) {
  if (sigmas.empty()) throw ConfigError("sigma list is empty");
  std::vector<SigmaPoint> out;
  for (double s : sigmas) {
    ExperimentConfig c = config;
    c.train.sigma = s;
    out.push_back({s, RunTable(c, source)});
  }
  return out;
}

std::vector<RunOutput> RunMulticlient(const ExperimentConfig& config,
                                      const DataSource& source) {
  ExperimentConfig c = config;
  if (c.clients == 1 && c.split.size() <= 1) {
    c.clients = 3;
    c.split.clear();
  }
  return RunTable(c, source);
}

CellStats Summarize(const std::vector<double>& values) {
  CellStats c{kNaN, kNaN};
  if (values.empty()) return c;
  const double n = static_cast<double>(values.size());
  c.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return c;
  double ss = 0.0;
  for (double v : values) ss += (v - c.mean) * (v - c.mean);
  c.sd = std::sqrt(ss / (n - 1.0));
  return c;
}

std::string FormatCell(const CellStats& cell) {
  if (std::isnan(cell.mean)) return "nan";
  if (std::isnan(cell.sd)) return fmt::format("{:.2f}", cell.mean);
  return fmt::format("{:.2f}±{:.2f}", cell.mean, cell.sd);
}

std::string ResultsCsv(const std::vector<RunRow>& rows) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", MethodName(r.method),
                       r.dataset, r.seed, Num(r.train_auc), Num(r.test_auc),
                       Num(r.leak_norm), Num(r.leak_mean), Num(r.leak_median),
                       Num(r.tvd));
  }
  return out;
}

std::vector<RunRow> ParseResultsCsv(std::string_view text) {
  std::vector<RunRow> rows;
  auto lines = SplitOn(text, '\n');
  if (lines.empty() || lines.front() != kResultsHeader) {
    throw DataError("results.csv: unexpected header");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = SplitOn(lines[i], ',');
    if (f.size() != 9) {
      throw DataError(fmt::format("results.csv line {}: {} fields", i + 1,
                                  f.size()));
    }
    auto num = [&](std::size_t j) {
      if (f[j] == "nan") return kNaN;
      try {
        return ParseDouble("results.csv", f[j]);
      } catch (const ConfigError&) {
        throw DataError(fmt::format("results.csv line {}: bad number '{}'",
                                    i + 1, f[j]));
      }
    };
    RunRow r;
    try {
      r.method = ParseMethod(f[0]);
      r.seed = ParseUnsigned("seed", f[2]);
    } catch (const ConfigError& e) {
      throw DataError(fmt::format("results.csv line {}: {}", i + 1, e.what()));
    }
    r.dataset = std::string(f[1]);
    r.train_auc = num(3);
    r.test_auc = num(4);
    r.leak_norm = num(5);
    r.leak_mean = num(6);
    r.leak_median = num(7);
    r.tvd = num(8);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string SummaryMarkdown(const std::vector<RunRow>& rows) {
  std::string out =
      "| Dataset | Method | Runs | Train | Test | Norm Attack | Mean Attack | "
      "Median Attack | TVD |\n"
      "|---|---|---|---|---|---|---|---|---|\n";
  std::vector<std::pair<std::string, Method>> groups;
  for (const auto& r : rows) {
    const std::pair key{r.dataset, r.method};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) {
      groups.push_back(key);
    }
  }
  for (const auto& [dataset, method] : groups) {
    std::vector<double> cols[6];
    for (const auto& r : rows) {
      if (r.dataset != dataset || r.method != method) continue;
      cols[0].push_back(r.train_auc);
      cols[1].push_back(r.test_auc);
      cols[2].push_back(r.leak_norm);
      cols[3].push_back(r.leak_mean);
      cols[4].push_back(r.leak_median);
      cols[5].push_back(r.tvd);
    }
    out += fmt::format("| {} | {} | {} |", dataset, MethodName(method),
                       cols[0].size());
    for (const auto& c : cols) out += " " + FormatCell(Summarize(c)) + " |";
    out += '\n';
  }
  return out;
}

std::string CutRecordsTsv(const std::vector<CutRecord>& records) {
  std::string out =
      "index\tlabel\ty_tilde\ty_hat\tgrad_total\tgrad_gan\tgrad_penalty\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? Num(*v) : std::string("NA");
  };
  for (const auto& r : records) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.index, r.label,
                       Num(r.y_tilde), Num(r.y_hat), Num(r.grad_total),
                       opt(r.grad_gan), opt(r.grad_penalty));
  }
  return out;
}

std::string MetricsCsv(const std::vector<gafm::EpochMetrics>& epochs) {
  std::string out = "epoch,train_auc,gan_loss,penalty_loss,raw_train_auc\n";
  for (const auto& e : epochs) {
    out += fmt::format("{},{},{},{},{}\n", e.epoch, Num(e.train_auc),
                       Num(e.gan_loss), Num(e.penalty_loss),
                       Num(e.raw_train_auc));
  }
  return out;
}

namespace {

nlohmann::json JsonNum(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json LeakJson(const RunOutput& run) {
  const auto& l = run.leak;
  const auto& d = l.direction;
  nlohmann::json direction = {{"applicable", d.applicable}};
  if (d.applicable) {
    direction["gan_diff"] = JsonNum(d.gan_diff);
    direction["penalty_diff"] = JsonNum(d.penalty_diff);
    direction["total_diff"] = JsonNum(d.total_diff);
    direction["opposite"] = d.opposite;
  }
  return {
      {"method", std::string(MethodName(run.row.method))},
      {"dataset", run.row.dataset},
      {"seed", run.row.seed},
      {"train_auc", JsonNum(run.row.train_auc)},
      {"test_auc", JsonNum(run.row.test_auc)},
      {"raw_test_auc", JsonNum(run.raw_test_auc)},
      {"scores_flipped", run.flipped},
      {"leak_auc",
       {{"norm", JsonNum(l.leak_norm)},
        {"mean", JsonNum(l.leak_mean)},
        {"median", JsonNum(l.leak_median)}}},
      {"tvd", JsonNum(l.tvd)},
      {"sym_kl", JsonNum(l.sym_kl)},
      {"bound", JsonNum(l.bound)},
      {"direction", direction},
  };
}

std::string RunDirName(const RunRow& r) {
  return fmt::format("{}_seed{}", MethodName(r.method), r.seed);
}

}  // namespace

std::string LeakReportJson(const RunOutput& run) {
  return LeakJson(run).dump(2) + "\n";
}

std::string DeltaSelectionJson(const DeltaSelection& s) {
  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t j = 0; j < s.spec.grid.size(); ++j) {
    grid.push_back({{"delta", s.spec.grid[j]},
                    {"ratio", JsonNum(s.ratio[j])},
                    {"train_auc", JsonNum(s.train_auc[j])},
                    {"feasible", static_cast<bool>(s.feasible[j])}});
  }
  const nlohmann::json j = {
      {"chosen_delta", s.chosen},
      {"tau", s.spec.tau},
      {"reps", s.spec.reps},
      {"subsample_fraction", s.spec.subsample_fraction},
      {"subsample_rows", s.subsample_rows},
      {"seed", s.spec.seed},
      {"grid", grid},
  };
  return j.dump(2) + "\n";
}

void EmitReports(const std::vector<RunOutput>& runs,
                 const std::filesystem::path& outdir) {
  std::vector<RunRow> rows;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& run : runs) {
    rows.push_back(run.row);
    all.push_back(LeakJson(run));
    const auto dir = outdir / RunDirName(run.row);
    WriteTextFile(dir / "cut_records.tsv", CutRecordsTsv(run.training.records));
    WriteTextFile(dir / "metrics.csv", MetricsCsv(run.training.epochs));
    WriteTextFile(dir / "leak_report.json", LeakReportJson(run));
  }
  WriteTextFile(outdir / "results.csv", ResultsCsv(rows));
  WriteTextFile(outdir / "summary.md", SummaryMarkdown(rows));
  WriteTextFile(outdir / "leak_report.json", all.dump(2) + "\n");
}

std::vector<RunRow> RebuildSummary(const std::filesystem::path& outdir) {
  auto rows = ParseResultsCsv(ReadTextFile(outdir / "results.csv"));
  WriteTextFile(outdir / "summary.md", SummaryMarkdown(rows));
  return rows;
}

void WriteTextFile(const std::filesystem::path& file, std::string_view text) {
  std::error_code ec;
  if (file.has_parent_path()) {
    std::filesystem::create_directories(file.parent_path(), ec);
    if (ec) {
      throw IoError(fmt::format("cannot create {}: {}",
                                file.parent_path().string(), ec.message()));
    }
  }
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + file.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + file.string());
}

std::string ReadTextFile(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace splitleak::experiment

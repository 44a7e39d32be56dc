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

#include "splitleak/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "splitleak/errors.h"
#include "splitleak/random.h"

namespace splitleak::data {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '"' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCells(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    cells.push_back(Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool IsMissing(std::string_view cell) {
  return cell.empty() || cell == "?" || cell == "NA" || cell == "na" ||
         cell == "NaN" || cell == "nan";
}

std::optional<double> ParseDouble(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

int ParseLabel(std::string_view cell, const std::string& where) {
  const auto v = ParseDouble(cell);
  if (!v || (*v != 0.0 && *v != 1.0)) {
    throw DataError(where + ": label '" + std::string(cell) + "' is not 0/1");
  }
  return static_cast<int>(*v);
}

}  // namespace

Labels::Labels(std::vector<int> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0 && values_[i] != 1) {
      throw DataError("label at " + std::to_string(i) + " is " +
                      std::to_string(values_[i]) + ", expected 0 or 1");
    }
  }
}

std::size_t Labels::positives() const {
  return static_cast<std::size_t>(std::ranges::count(values_, 1));
}

Labels Labels::Select(std::span<const std::size_t> indices) const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= values_.size()) throw ShapeError("label index out of range");
    out.push_back(values_[i]);
  }
  return Labels(std::move(out));
}

double Dataset::positive_fraction() const {
  if (labels.size() == 0) return 0.0;
  return static_cast<double>(labels.positives()) /
         static_cast<double>(labels.size());
}

void Dataset::Validate() const {
  if (features.rows() != labels.size()) {
    throw DataError(name + ": " + std::to_string(features.rows()) +
                    " feature rows but " + std::to_string(labels.size()) +
                    " labels");
  }
  if (!features.AllFinite()) throw DataError(name + ": non-finite feature");
}

Dataset Dataset::Select(std::span<const std::size_t> indices) const {
  return {name, features.SelectRows(indices), labels.Select(indices)};
}

Dataset LoadSpambase(const std::filesystem::path& path) {
  constexpr std::size_t kColumns = 57;
  const auto lines = ReadLines(path);
  std::vector<double> values;
  std::vector<int> labels;
  values.reserve(lines.size() * kColumns);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string where = path.string() + ":" + std::to_string(li + 1);
    const auto cells = SplitCells(lines[li], ',');
    if (cells.size() != kColumns + 1) {
      throw DataError(where + ": expected " + std::to_string(kColumns + 1) +
                      " columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < kColumns; ++c) {
      if (IsMissing(cells[c])) {
        values.push_back(0.0);
        continue;
      }
      const auto v = ParseDouble(cells[c]);
      if (!v) {
        throw DataError(where + ": non-numeric cell '" + std::string(cells[c]) +
                        "' in column " + std::to_string(c + 1));
      }
      values.push_back(*v);
    }
    labels.push_back(ParseLabel(cells[kColumns], where));
  }
  Dataset ds{"spambase", Matrix(labels.size(), kColumns, std::move(values)),
             Labels(std::move(labels))};
  ds.Validate();
  return ds;
}

Dataset LoadCredit(const std::filesystem::path& path) {
  const auto lines = ReadLines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty file");
  const auto header = SplitCells(lines[0], ',');
  if (header.size() < 2) throw DataError(path.string() + ": missing header");
  for (std::string_view h : header) {
    if (h.empty() || ParseDouble(h)) {
      throw DataError(path.string() + ": first row is not a header");
    }
  }

  std::optional<std::size_t> id_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string upper(header[c]);
    std::ranges::transform(upper, upper.begin(),
                           [](unsigned char ch) { return std::toupper(ch); });
    if (upper == "ID") id_col = c;
  }
  const std::size_t label_col = header.size() - 1;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < label_col; ++c) {
    if (c != id_col) feature_cols.push_back(c);
  }

  std::vector<std::vector<std::string_view>> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    auto cells = SplitCells(lines[li], ',');
    if (cells.size() != header.size()) {
      throw DataError(path.string() + ":" + std::to_string(li + 1) +
                      ": expected " + std::to_string(header.size()) +
                      " columns, found " + std::to_string(cells.size()));
    }
    rows.push_back(std::move(cells));
  }

  const std::size_t n = rows.size();
  Matrix features(n, feature_cols.size());
  for (std::size_t j = 0; j < feature_cols.size(); ++j) {
    const std::size_t c = feature_cols[j];
    bool numeric = true;
    for (const auto& r : rows) {
      if (!IsMissing(r[c]) && !ParseDouble(r[c])) {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      for (std::size_t i = 0; i < n; ++i) {
        features(i, j) = IsMissing(rows[i][c]) ? 0.0 : *ParseDouble(rows[i][c]);
      }
      continue;
    }
    // Missing categorical cells all map to one extra category.
    std::map<std::string_view, double> codes;
    std::optional<double> missing_code;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string_view cell = rows[i][c];
      if (IsMissing(cell)) {
        if (!missing_code) {
          missing_code = static_cast<double>(codes.size());
          codes.emplace(std::string_view{}, *missing_code);
        }
        features(i, j) = *missing_code;
        continue;
      }
      auto it = codes.find(cell);
      if (it == codes.end()) {
        it = codes.emplace(cell, static_cast<double>(codes.size())).first;
      }
      features(i, j) = it->second;
    }
  }

  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(ParseLabel(rows[i][label_col],
                                path.string() + ":" + std::to_string(i + 2)));
  }
  Dataset ds{"credit", std::move(features), Labels(std::move(labels))};
  ds.Validate();
  return ds;
}

ImdbCorpus ReadImdbExport(const std::filesystem::path& path) {
  const auto lines = ReadLines(path);
  ImdbCorpus corpus;
  std::vector<int> labels;
  labels.reserve(lines.size());
  corpus.reviews.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string where = path.string() + ":" + std::to_string(li + 1);
    const std::string_view line = lines[li];
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw DataError(where + ": expected `label<TAB>indices`");
    }
    labels.push_back(ParseLabel(Trim(line.substr(0, tab)), where));
    std::vector<std::int64_t> words;
    std::istringstream in{std::string(line.substr(tab + 1))};
    std::string tok;
    while (in >> tok) {
      std::int64_t w = 0;
      const auto [ptr, ec] =
          std::from_chars(tok.data(), tok.data() + tok.size(), w);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || w < 0) {
        throw DataError(where + ": bad word index '" + tok + "'");
      }
      words.push_back(w);
    }
    corpus.reviews.push_back(std::move(words));
  }
  corpus.labels = Labels(std::move(labels));
  return corpus;
}

std::vector<std::int64_t> TopWords(const ImdbCorpus& corpus,
                                   std::span<const std::size_t> rows,
                                   std::size_t count) {
  std::unordered_map<std::int64_t, std::size_t> freq;
  for (std::size_t r : rows) {
    for (std::int64_t w : corpus.reviews.at(r)) ++freq[w];
  }
  std::vector<std::pair<std::int64_t, std::size_t>> ranked(freq.begin(),
                                                           freq.end());
  std::ranges::sort(ranked, [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::int64_t> top;
  for (std::size_t i = 0; i < ranked.size() && i < count; ++i) {
    top.push_back(ranked[i].first);
  }
  return top;
}

Dataset EncodeImdb(const ImdbCorpus& corpus, std::span<const std::size_t> rows,
                   std::span<const std::int64_t> vocabulary) {
  std::unordered_map<std::int64_t, std::size_t> column;
  for (std::size_t j = 0; j < vocabulary.size(); ++j) column[vocabulary[j]] = j;
  Matrix features(rows.size(), vocabulary.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::int64_t w : corpus.reviews.at(rows[i])) {
      if (auto it = column.find(w); it != column.end()) features(i, it->second) = 1.0;
    }
  }
  Dataset ds{"imdb", std::move(features), corpus.labels.Select(rows)};
  ds.Validate();
  return ds;
}

Dataset LoadImdb(const std::filesystem::path& path) {
  const ImdbCorpus corpus = ReadImdbExport(path);
  std::vector<std::size_t> all(corpus.reviews.size());
  std::iota(all.begin(), all.end(), 0);
  const auto vocab = TopWords(corpus, all);
  return EncodeImdb(corpus, all, vocab);
}

SplitIndices SplitRows(std::size_t n, const SplitSpec& spec) {
  if (n < 2) throw DataError("train/test split needs at least 2 rows");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw DataError("train fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = StreamFor(spec.seed, "split");
  std::shuffle(order.begin(), order.end(), rng);
  auto n_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + static_cast<long>(n_train));
  out.test.assign(order.begin() + static_cast<long>(n_train), order.end());
  return out;
}

TrainTest TrainTestSplit(const Dataset& ds, const SplitSpec& spec) {
  SplitIndices idx = SplitRows(ds.size(), spec);
  TrainTest out{ds.Select(idx.train), ds.Select(idx.test), std::move(idx)};
  return out;
}

TrainTest ImdbTrainTest(const ImdbCorpus& corpus, const SplitSpec& spec) {
  SplitIndices idx = SplitRows(corpus.reviews.size(), spec);
  const auto vocab = TopWords(corpus, idx.train);
  TrainTest out{EncodeImdb(corpus, idx.train, vocab),
                EncodeImdb(corpus, idx.test, vocab), std::move(idx)};
  return out;
}

ColumnStats FitScaling(const Matrix& train, Scaling scaling) {
  if (train.rows() == 0) throw DataError("cannot fit scaling on empty data");
  const std::size_t n = train.rows();
  const std::size_t d = train.cols();
  ColumnStats stats{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t j = 0; j < d; ++j) {
    if (scaling == Scaling::kZScore) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += train(i, j);
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dv = train(i, j) - mean;
        var += dv * dv;
      }
      var /= static_cast<double>(n);
      stats.center[j] = mean;
      stats.scale[j] = std::sqrt(var);
    } else {
      double lo = train(0, j);
      double hi = train(0, j);
      for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, train(i, j));
        hi = std::max(hi, train(i, j));
      }
      stats.center[j] = lo;
      stats.scale[j] = hi - lo;
    }
  }
  return stats;
}

void ApplyScaling(Matrix& m, const ColumnStats& stats) {
  if (m.cols() != stats.center.size()) {
    throw ShapeError("scaling statistics do not match column count");
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double s = stats.scale[j];
      m(i, j) = s > 0.0 ? (m(i, j) - stats.center[j]) / s : 0.0;
    }
  }
}

std::pair<Matrix, Matrix> NormalizeFeatures(const Matrix& train,
                                            const Matrix& test,
                                            Scaling scaling) {
  const ColumnStats stats = FitScaling(train, scaling);
  std::pair<Matrix, Matrix> out{train, test};
  ApplyScaling(out.first, stats);
  if (out.second.rows() > 0) ApplyScaling(out.second, stats);
  return out;
}

void Standardize(TrainTest& split, Scaling scaling) {
  auto [train, test] =
      NormalizeFeatures(split.train.features, split.test.features, scaling);
  split.train.features = std::move(train);
  split.test.features = std::move(test);
}

FeaturePartition PartitionFeatures(std::size_t dim,
                                   std::span<const std::size_t> counts) {
  if (counts.empty()) throw DataError("feature partition needs >= 1 party");
  std::size_t total = 0;
  for (std::size_t c : counts) {
    if (c == 0) throw DataError("every party needs at least one column");
    total += c;
  }
  if (total != dim) {
    throw DataError("feature counts sum to " + std::to_string(total) +
                    " but the data has " + std::to_string(dim) + " columns");
  }
  FeaturePartition p;
  std::size_t next = 0;
  for (std::size_t c : counts) {
    std::vector<std::size_t> cols(c);
    std::iota(cols.begin(), cols.end(), next);
    next += c;
    p.columns.push_back(std::move(cols));
  }
  return p;
}

Dataset SyntheticGaussian(std::size_t n, std::size_t dim, double separation,
                          double positive_fraction, std::uint64_t seed) {
  if (n < 2 || dim < 1) throw DataError("synthetic data needs n >= 2, d >= 1");
  if (!(positive_fraction > 0.0 && positive_fraction < 1.0)) {
    throw DataError("positive fraction must lie in (0, 1)");
  }
  Rng rng = StreamFor(seed, "synthetic");
  const auto n_pos = static_cast<std::size_t>(
      std::llround(positive_fraction * static_cast<double>(n)));
  std::vector<int> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<long>(n_pos), 1);
  std::shuffle(labels.begin(), labels.end(), rng);

  const double shift = separation / std::sqrt(static_cast<double>(dim));
  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix features(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      features(i, j) = noise(rng) + (labels[i] == 1 ? shift : 0.0);
    }
  }
  return {"synthetic", std::move(features), Labels(std::move(labels))};
}

}  // namespace splitleak::data

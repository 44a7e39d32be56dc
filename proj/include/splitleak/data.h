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

#ifndef SPLITLEAK_DATA_H_
#define SPLITLEAK_DATA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splitleak/matrix.h"

namespace splitleak::data {

// Binary labels. Wrapped so that label data has a type of its own which the
// passive side of the protocol never names.
class Labels {
 public:
  Labels() = default;
  // Throws DataError on any value other than 0 or 1.
  explicit Labels(std::vector<int> values);

  std::size_t size() const { return values_.size(); }
  int operator[](std::size_t i) const { return values_[i]; }
  std::span<const int> values() const { return values_; }
  std::size_t positives() const;
  Labels Select(std::span<const std::size_t> indices) const;

  friend bool operator==(const Labels&, const Labels&) = default;

 private:
  std::vector<int> values_;
};

struct Dataset {
  std::string name;
  Matrix features;  // n x d
  Labels labels;    // n

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
  double positive_fraction() const;
  // Throws DataError if rows and labels disagree or features are non-finite.
  void Validate() const;
  Dataset Select(std::span<const std::size_t> indices) const;
};

// Loaders replace missing values by 0 (and missing categorical cells by a
// dedicated code) but do not standardize; standardization needs the train
// split's statistics, see Standardize().

// UCI Spambase: 57 numeric columns then a 0/1 label, no header. Empty cells
// and "?" / "NA" count as missing.
Dataset LoadSpambase(const std::filesystem::path& path);

// Default-of-credit-card-clients export: header row, an "ID" column that is
// dropped, label in the last column. Columns whose non-missing cells are not
// all numeric are categorical and get integer codes in first-seen order;
// their missing cells share one extra code.
Dataset LoadCredit(const std::filesystem::path& path);

// IMDB export: one review per line, `label<TAB>idx idx ...`.
struct ImdbCorpus {
  std::vector<std::vector<std::int64_t>> reviews;
  Labels labels;
};
ImdbCorpus ReadImdbExport(const std::filesystem::path& path);

inline constexpr std::size_t kImdbVocabulary = 500;

// Most frequent word indices among `rows` (total occurrences, ties to the
// smaller index), most frequent first.
std::vector<std::int64_t> TopWords(const ImdbCorpus& corpus,
                                   std::span<const std::size_t> rows,
                                   std::size_t count = kImdbVocabulary);

// Binary presence matrix over `vocabulary` for the selected reviews.
Dataset EncodeImdb(const ImdbCorpus& corpus, std::span<const std::size_t> rows,
                   std::span<const std::int64_t> vocabulary);

// Whole export encoded with a vocabulary counted over every review.
Dataset LoadImdb(const std::filesystem::path& path);

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Seeded shuffle, first round(train_fraction * n) go to train. Throws
// DataError when n < 2 or the fraction is outside (0, 1). Both sides get at
// least one row.
SplitIndices SplitRows(std::size_t n, const SplitSpec& spec);

struct TrainTest {
  Dataset train;
  Dataset test;
  SplitIndices indices;
};

TrainTest TrainTestSplit(const Dataset& ds, const SplitSpec& spec);

// The IMDB split counts the vocabulary on the train reviews only.
TrainTest ImdbTrainTest(const ImdbCorpus& corpus, const SplitSpec& spec);

enum class Scaling { kZScore, kMinMax };

struct ColumnStats {
  std::vector<double> center;
  std::vector<double> scale;  // 0 marks a constant column
};

// Per-column statistics of `train`: mean/population-sd for z-score,
// min/range for min-max.
ColumnStats FitScaling(const Matrix& train, Scaling scaling = Scaling::kZScore);
// (x - center) / scale; constant columns become 0.
void ApplyScaling(Matrix& m, const ColumnStats& stats);

// Standardizes train and test with the train statistics.
std::pair<Matrix, Matrix> NormalizeFeatures(const Matrix& train,
                                            const Matrix& test,
                                            Scaling scaling = Scaling::kZScore);

// In-place version for a split.
void Standardize(TrainTest& split, Scaling scaling = Scaling::kZScore);

// Per-party column lists, contiguous blocks in order.
struct FeaturePartition {
  std::vector<std::vector<std::size_t>> columns;

  std::size_t parties() const { return columns.size(); }
};

// Throws DataError unless counts are positive and sum to `dim`.
FeaturePartition PartitionFeatures(std::size_t dim,
                                   std::span<const std::size_t> counts);

// Two unit-covariance Gaussians in `dim` dimensions; class 1 is shifted by
// `separation` along the unit all-ones direction. Exactly
// round(positive_fraction * n) rows are positive, in shuffled order.
Dataset SyntheticGaussian(std::size_t n, std::size_t dim, double separation,
                          double positive_fraction, std::uint64_t seed);

}  // namespace splitleak::data

#endif  // SPLITLEAK_DATA_H_

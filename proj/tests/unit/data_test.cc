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

// Loaders on handwritten files, splits, scaling and partitions.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "splitleak/data.h"
#include "splitleak/errors.h"

namespace splitleak::data {
namespace {

namespace fs = std::filesystem;

class TempFile {
 public:
  explicit TempFile(const std::string& text) {
    path_ = fs::temp_directory_path() /
            ("splitleak_data_" + std::to_string(counter_++) + "_" +
             std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    std::ofstream(path_) << text;
  }
  ~TempFile() { fs::remove(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string SpamRow(double first, const std::string& label,
                    const std::string& hole = "") {
  std::string row = std::to_string(first);
  for (int c = 1; c < 57; ++c) {
    row += ",";
    row += (c == 5 && !hole.empty()) ? hole : std::to_string(c * 0.5);
  }
  return row + "," + label + "\n";
}

TEST(Spambase, ParsesRowsAndMissingCells) {
  TempFile f(SpamRow(1.5, "1") + "\n" + SpamRow(-2.0, "0", "?") +
             SpamRow(0.0, "1", "NA"));
  const Dataset ds = LoadSpambase(f.path());
  EXPECT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.dim(), 57u);
  EXPECT_DOUBLE_EQ(ds.features(0, 0), 1.5);
  EXPECT_DOUBLE_EQ(ds.features(0, 5), 2.5);
  EXPECT_DOUBLE_EQ(ds.features(1, 5), 0.0);
  EXPECT_DOUBLE_EQ(ds.features(2, 5), 0.0);
  EXPECT_EQ(ds.labels[0], 1);
  EXPECT_EQ(ds.labels[1], 0);
  EXPECT_NEAR(ds.positive_fraction(), 2.0 / 3.0, 1e-15);
}

TEST(Spambase, RejectsBadRows) {
  TempFile short_row("1,2,3,1\n");
  EXPECT_THROW(LoadSpambase(short_row.path()), DataError);
  TempFile bad_label(SpamRow(1.0, "2"));
  EXPECT_THROW(LoadSpambase(bad_label.path()), DataError);
  TempFile text(SpamRow(1.0, "1", "abc"));
  EXPECT_THROW(LoadSpambase(text.path()), DataError);
  EXPECT_THROW(LoadSpambase("/nonexistent/spambase.data"), DataError);
}

TEST(Credit, DropsIdAndCodesCategoricals) {
  TempFile f(
      "ID,LIMIT_BAL,SEX,EDU,default\n"
      "1,20000,male,,1\n"
      "2,120000,female,grad,0\n"
      "3,?,male,uni,0\n"
      "4,50000,female,grad,1\n");
  const Dataset ds = LoadCredit(f.path());
  ASSERT_EQ(ds.size(), 4u);
  ASSERT_EQ(ds.dim(), 3u);
  EXPECT_DOUBLE_EQ(ds.features(0, 0), 20000);
  EXPECT_DOUBLE_EQ(ds.features(2, 0), 0.0);  // numeric missing
  EXPECT_DOUBLE_EQ(ds.features(0, 1), 0.0);  // male
  EXPECT_DOUBLE_EQ(ds.features(1, 1), 1.0);  // female
  EXPECT_DOUBLE_EQ(ds.features(2, 1), 0.0);
  // EDU: missing first -> 0, grad -> 1, uni -> 2.
  EXPECT_DOUBLE_EQ(ds.features(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(ds.features(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(ds.features(2, 2), 2.0);
  EXPECT_DOUBLE_EQ(ds.features(3, 2), 1.0);
  EXPECT_EQ(std::vector<int>(ds.labels.values().begin(),
                             ds.labels.values().end()),
            (std::vector<int>{1, 0, 0, 1}));
}

TEST(Credit, NeedsHeaderAndRectangularRows) {
  TempFile no_header("1,2,3\n4,5,0\n");
  EXPECT_THROW(LoadCredit(no_header.path()), DataError);
  TempFile ragged("a,b,y\n1,2,0\n1,1\n");
  EXPECT_THROW(LoadCredit(ragged.path()), DataError);
}

TEST(Imdb, ExportVocabularyAndEncoding) {
  TempFile f(
      "1\t5 7 7 9\n"
      "0\t7 3\n"
      "1\t9 5 5\n"
      "0\t\n");
  const ImdbCorpus corpus = ReadImdbExport(f.path());
  ASSERT_EQ(corpus.reviews.size(), 4u);
  EXPECT_TRUE(corpus.reviews[3].empty());
  const std::vector<std::size_t> all{0, 1, 2, 3};
  // counts: 7 -> 3, 5 -> 3, 9 -> 2, 3 -> 1; ties to the smaller index.
  EXPECT_EQ(TopWords(corpus, all, 3), (std::vector<std::int64_t>{5, 7, 9}));
  const std::vector<std::size_t> first_two{0, 1};
  EXPECT_EQ(TopWords(corpus, first_two, 10),
            (std::vector<std::int64_t>{7, 3, 5, 9}));
  const std::vector<std::int64_t> vocab{5, 7, 9};
  const Dataset ds = EncodeImdb(corpus, all, vocab);
  EXPECT_EQ(ds.features.row(0)[0], 1.0);
  EXPECT_EQ(ds.features.row(1)[0], 0.0);
  EXPECT_EQ(ds.features.row(1)[1], 1.0);
  EXPECT_EQ(ds.features.row(3)[2], 0.0);
  EXPECT_EQ(LoadImdb(f.path()).dim(), 4u);

  TempFile bad("1 5 7\n");
  EXPECT_THROW(ReadImdbExport(bad.path()), DataError);
  TempFile neg("1\t-3\n");
  EXPECT_THROW(ReadImdbExport(neg.path()), DataError);
}

TEST(Imdb, SplitCountsVocabularyOnTrainOnly) {
  std::string text;
  for (int i = 0; i < 20; ++i) text += (i % 2 ? "1\t" : "0\t") + std::to_string(i) + " 100\n";
  TempFile f(text);
  const ImdbCorpus corpus = ReadImdbExport(f.path());
  const TrainTest tt = ImdbTrainTest(corpus, {0.5, 4});
  // 100 plus the 10 train-only words.
  EXPECT_EQ(tt.train.dim(), 11u);
  EXPECT_EQ(tt.test.dim(), 11u);
  for (std::size_t i = 0; i < tt.test.size(); ++i) {
    double present = 0.0;
    for (double v : tt.test.features.row(i)) present += v;
    EXPECT_EQ(present, 1.0);  // only word 100 is known
  }
}

TEST(Labels, RejectNonBinary) {
  EXPECT_THROW(Labels(std::vector<int>{0, 1, 2}), DataError);
  const Labels l(std::vector<int>{1, 0, 1});
  EXPECT_EQ(l.positives(), 2u);
  const std::vector<std::size_t> pick{2, 1};
  EXPECT_EQ(l.Select(pick), Labels(std::vector<int>{1, 0}));
}

TEST(Split, SizesCoverAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SplitIndices a = SplitRows(4597, {0.7, seed});
    EXPECT_EQ(a.train.size(), 3218u);
    EXPECT_EQ(a.test.size(), 1379u);
    std::vector<std::size_t> all = a.train;
    all.insert(all.end(), a.test.begin(), a.test.end());
    std::ranges::sort(all);
    std::vector<std::size_t> expect(4597);
    std::iota(expect.begin(), expect.end(), 0);
    EXPECT_EQ(all, expect);
    const SplitIndices b = SplitRows(4597, {0.7, seed});
    EXPECT_EQ(a.train, b.train);
  }
  EXPECT_NE(SplitRows(100, {0.7, 0}).train, SplitRows(100, {0.7, 1}).train);
  EXPECT_EQ(SplitRows(2, {0.99, 0}).test.size(), 1u);
  EXPECT_THROW(SplitRows(1, {0.7, 0}), DataError);
  EXPECT_THROW(SplitRows(10, {1.0, 0}), DataError);
}

TEST(Scaling, UsesTrainStatisticsOnly) {
  const Matrix train(3, 2, std::vector<double>{1, 5, 2, 5, 3, 5});
  const Matrix test(2, 2, std::vector<double>{4, 9, 0, 1});
  auto [zt, zs] = NormalizeFeatures(train, test, Scaling::kZScore);
  const double sd = std::sqrt(2.0 / 3.0);
  EXPECT_NEAR(zt(0, 0), -1.0 / sd, 1e-12);
  EXPECT_NEAR(zs(0, 0), 2.0 / sd, 1e-12);
  EXPECT_EQ(zt(1, 1), 0.0);  // constant column
  EXPECT_EQ(zs(0, 1), 0.0);
  auto [mt, ms] = NormalizeFeatures(train, test, Scaling::kMinMax);
  EXPECT_EQ(mt(0, 0), 0.0);
  EXPECT_EQ(mt(2, 0), 1.0);
  EXPECT_EQ(ms(0, 0), 1.5);  // test values may leave [0, 1]
  EXPECT_EQ(ms(1, 0), -0.5);
  EXPECT_THROW(FitScaling(Matrix(0, 2)), DataError);
}

TEST(Partition, ContiguousBlocks) {
  const std::size_t counts[] = {19, 19, 19};
  const FeaturePartition p = PartitionFeatures(57, counts);
  ASSERT_EQ(p.parties(), 3u);
  EXPECT_EQ(p.columns[1].front(), 19u);
  EXPECT_EQ(p.columns[2].back(), 56u);
  const std::size_t bad_sum[] = {10, 10};
  EXPECT_THROW(PartitionFeatures(57, bad_sum), DataError);
  const std::size_t zero[] = {57, 0};
  EXPECT_THROW(PartitionFeatures(57, zero), DataError);
}

TEST(Synthetic, ExactPositivesAndShift) {
  const Dataset ds = SyntheticGaussian(1000, 4, 2.0, 0.4, 7);
  EXPECT_EQ(ds.labels.positives(), 400u);
  double m1 = 0.0, m0 = 0.0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double s = 0.0;
    for (double v : ds.features.row(i)) s += v;
    (ds.labels[i] ? m1 : m0) += s;
  }
  m1 /= 400.0;
  m0 /= 600.0;
  // Shift along the unit all-ones direction: sum grows by 2 * sqrt(4).
  EXPECT_NEAR(m1 - m0, 4.0, 0.4);
  const Dataset again = SyntheticGaussian(1000, 4, 2.0, 0.4, 7);
  EXPECT_EQ(ds.features, again.features);
}

}  // namespace
}  // namespace splitleak::data

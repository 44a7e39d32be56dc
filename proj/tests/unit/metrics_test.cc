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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "splitleak/errors.h"
#include "splitleak/metrics.h"
#include "splitleak/random.h"
#include "splitleak/records.h"

namespace splitleak::metrics {
namespace {

// Pairwise count: 2 per correctly ordered pair, 1 per tie.
double BruteAuc(const std::vector<double>& s, const std::vector<int>& y) {
  double twice = 0.0, n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    (y[i] == 1 ? n1 : n0) += 1.0;
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      twice += s[i] > s[j] ? 2.0 : (s[i] == s[j] ? 1.0 : 0.0);
    }
  }
  return twice / (2.0 * n0 * n1);
}

struct Sample {
  std::vector<double> scores;
  std::vector<int> labels;
};

Sample RandomSample(std::uint64_t seed, std::size_t n, bool coarse) {
  Rng rng = StreamFor(seed, "auc");
  std::bernoulli_distribution coin(0.4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, 5);
  Sample s;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = coin(rng) ? 1 : 0;
    s.labels.push_back(y);
    s.scores.push_back(coarse ? level(rng) + y : gauss(rng) + 0.7 * y);
  }
  s.labels[0] = 0;
  s.labels[1] = 1;
  return s;
}

TEST(Auc, EqualsPairwiseOracleExactly) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t n = 2 + seed * 3;  // up to 179
    for (bool coarse : {false, true}) {
      const Sample s = RandomSample(seed, n, coarse);
      EXPECT_EQ(Auc(s.scores, s.labels), BruteAuc(s.scores, s.labels))
          << "seed " << seed << " coarse " << coarse;
    }
  }
  const Sample big = RandomSample(99, 200, true);
  EXPECT_EQ(Auc(big.scores, big.labels), BruteAuc(big.scores, big.labels));
}

TEST(Auc, HandCases) {
  EXPECT_EQ(Auc(std::vector<double>{0.1, 0.9}, std::vector<int>{0, 1}), 1.0);
  EXPECT_EQ(Auc(std::vector<double>{0.9, 0.1}, std::vector<int>{0, 1}), 0.0);
  EXPECT_EQ(Auc(std::vector<double>{0.5, 0.5}, std::vector<int>{0, 1}), 0.5);
  // positives {2, 3}, negatives {1, 3}: 1 + 0 + 1 + 0.5 of 4 pairs.
  EXPECT_EQ(Auc(std::vector<double>{2, 3, 1, 3}, std::vector<int>{1, 1, 0, 0}),
            0.625);
}

TEST(Auc, OneClassOrBadInputThrows) {
  EXPECT_THROW(Auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}),
               MetricError);
  EXPECT_THROW(Auc(std::vector<double>{1}, std::vector<int>{1, 0}),
               MetricError);
  EXPECT_THROW(Auc(std::vector<double>{NAN, 1}, std::vector<int>{1, 0}),
               MetricError);
}

TEST(LeakAuc, AtLeastHalfAndFlipSymmetric) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Sample s = RandomSample(seed, 80, seed % 2 == 0);
    const double a = Auc(s.scores, s.labels);
    const double leak = LeakAuc(s.scores, s.labels);
    EXPECT_GE(leak, 0.5);
    EXPECT_EQ(leak, std::max(a, 1.0 - a));
    std::vector<double> neg = s.scores;
    for (double& v : neg) v = -v;
    EXPECT_NEAR(Auc(neg, s.labels), 1.0 - a, 1e-15);
    EXPECT_NEAR(LeakAuc(neg, s.labels), leak, 1e-15);
  }
}

TEST(Attacks, NormIsAbsoluteValue) {
  EXPECT_EQ(NormAttack(std::vector<double>{-2.0, 0.0, 3.5}),
            (std::vector<double>{2.0, 0.0, 3.5}));
}

TEST(Attacks, MeanAndMedianMargins) {
  const std::vector<double> g{0.0, 1.0, 2.0, 10.0, 11.0, 30.0};
  const std::vector<int> y{0, 0, 0, 1, 1, 1};
  const auto audit = GradientAudit::Build(g, y);
  EXPECT_DOUBLE_EQ(audit.mean0, 1.0);
  EXPECT_DOUBLE_EQ(audit.mean1, 17.0);
  EXPECT_DOUBLE_EQ(audit.median0, 1.0);
  EXPECT_DOUBLE_EQ(audit.median1, 11.0);
  const auto mean = MeanAttack(audit);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_DOUBLE_EQ(mean[i], std::abs(g[i] - 1.0) - std::abs(g[i] - 17.0));
  }
  const auto median = MedianAttack(audit);
  EXPECT_DOUBLE_EQ(median[3], 9.0 - 1.0);
  EXPECT_EQ(MeanAttackAssign(audit), (std::vector<int>{0, 0, 0, 1, 1, 1}));
  // Centers 0.5 and 1.5: both 1.0 rows sit on the midpoint and go to 1.
  const auto tie = GradientAudit::Build(std::vector<double>{0, 2, 1, 1},
                                        std::vector<int>{0, 1, 0, 1});
  EXPECT_EQ(MeanAttackAssign(tie), (std::vector<int>{0, 1, 1, 1}));
  const auto even = GradientAudit::Build(std::vector<double>{0, 2, 4},
                                         std::vector<int>{0, 1, 1});
  EXPECT_DOUBLE_EQ(even.median1, 3.0);
  EXPECT_EQ(MedianAttackAssign(even), (std::vector<int>{0, 1, 1}));
}

TEST(Attacks, AuditNeedsBothClasses) {
  EXPECT_THROW(GradientAudit::Build(std::vector<double>{1, 2},
                                    std::vector<int>{0, 0}),
               MetricError);
}

// Independent histogram for the distance oracles.
std::vector<double> Hist(const std::vector<double>& x, double lo, double hi,
                         int bins) {
  std::vector<double> h(bins, 0.0);
  for (double v : x) {
    int k = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    k = std::clamp(k, 0, bins - 1);
    h[k] += 1.0 / static_cast<double>(x.size());
  }
  return h;
}

TEST(Tvd, IdenticalZeroDisjointOneAndRange) {
  const std::vector<double> a{0.1, 0.2, 0.3, 0.3};
  EXPECT_EQ(TvdHist(a, a), 0.0);
  EXPECT_EQ(TvdHist(std::vector<double>{0, 0.1, 0.2},
                    std::vector<double>{5, 6}),
            1.0);
  Rng rng = StreamFor(2, "tvd");
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> x(100), z(70);
    for (double& v : x) v = gauss(rng);
    for (double& v : z) v = gauss(rng) + 0.1 * t;
    const double tvd = TvdHist(x, z);
    EXPECT_GE(tvd, 0.0);
    EXPECT_LE(tvd, 1.0);
    double lo = x[0], hi = x[0];
    for (const auto* s : {&x, &z}) {
      for (double v : *s) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const auto p = Hist(x, lo, hi, 50);
    const auto q = Hist(z, lo, hi, 50);
    double oracle = 0.0;
    for (int k = 0; k < 50; ++k) oracle += 0.5 * std::abs(p[k] - q[k]);
    EXPECT_NEAR(tvd, oracle, 1e-12);
  }
}

TEST(Tvd, ConstantPooledSampleIsZero) {
  EXPECT_EQ(TvdHist(std::vector<double>{2, 2}, std::vector<double>{2}), 0.0);
  EXPECT_THROW(TvdHist(std::vector<double>{}, std::vector<double>{1}),
               MetricError);
}

TEST(SymKl, HandComputedOnTwoBins) {
  // Bins over [0, 1]: a -> (1, 0), b -> (1/2, 1/2).
  const std::vector<double> a{0.0, 0.1};
  const std::vector<double> b{0.0, 1.0};
  const double eps = 1e-6;
  const double total = 1.0 + 2 * eps;
  const double p0 = (1.0 + eps) / total, p1 = eps / total;
  const double q0 = (0.5 + eps) / total, q1 = (0.5 + eps) / total;
  const double expected =
      (p0 - q0) * std::log(p0 / q0) + (p1 - q1) * std::log(p1 / q1);
  EXPECT_NEAR(SymKlHist(a, b, 2, eps), expected, 1e-12);
  EXPECT_EQ(SymKlHist(a, a), 0.0);
}

TEST(AucBound, AnchorsAndMonotone) {
  EXPECT_EQ(AucBound(0.0), 0.5);
  EXPECT_EQ(AucBound(1.0), 0.875);
  double prev = AucBound(0.0);
  for (int k = 1; k < 100; ++k) {
    const double eps = 4.0 * k / 100.0;
    const double b = AucBound(eps);
    EXPECT_GT(b, prev) << eps;
    EXPECT_LE(b, 1.0);
    prev = b;
  }
  EXPECT_THROW(AucBound(-0.1), MetricError);
  EXPECT_THROW(AucBound(4.0), MetricError);
  EXPECT_EQ(AucBoundOrOne(4.0), 1.0);
  EXPECT_EQ(AucBoundOrOne(1.0), 0.875);
}

std::vector<CutRecord> Records(const std::vector<double>& gan,
                               const std::vector<double>& pen,
                               const std::vector<int>& y) {
  std::vector<CutRecord> out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    CutRecord r;
    r.index = i;
    r.label = y[i];
    r.grad_gan = gan[i];
    r.grad_penalty = pen[i];
    r.grad_total = gan[i] + pen[i];
    out.push_back(r);
  }
  return out;
}

TEST(Direction, OppositeSignsDetected) {
  auto recs = Records({1.0, 3.0, -1.0, -3.0}, {-1.0, -2.0, 2.0, 5.0},
                      {1, 1, 0, 0});
  const auto d = ComputeDirectionReport(recs);
  ASSERT_TRUE(d.applicable);
  EXPECT_DOUBLE_EQ(d.gan_diff, 2.0 - (-2.0));
  EXPECT_DOUBLE_EQ(d.penalty_diff, -1.5 - 3.5);
  EXPECT_DOUBLE_EQ(d.total_diff, 0.5 - 1.5);
  EXPECT_TRUE(d.opposite);

  auto same = Records({1.0, -1.0}, {1.0, -1.0}, {1, 0});
  EXPECT_FALSE(ComputeDirectionReport(same).opposite);

  recs[2].grad_penalty.reset();
  EXPECT_FALSE(ComputeDirectionReport(recs).applicable);
}

TEST(LeakReport, SeparatedGradientsLeakFully) {
  std::vector<CutRecord> recs;
  for (std::size_t i = 0; i < 40; ++i) {
    CutRecord r;
    r.index = i;
    r.label = i % 2;
    r.grad_total = r.label == 1 ? -1.0 - 0.01 * i : 0.2 + 0.001 * i;
    recs.push_back(r);
  }
  const auto rep = ComputeLeakReport(recs);
  EXPECT_EQ(rep.leak_norm, 1.0);
  EXPECT_EQ(rep.leak_mean, 1.0);
  EXPECT_EQ(rep.leak_median, 1.0);
  EXPECT_EQ(rep.tvd, 1.0);
  EXPECT_EQ(rep.bound, 1.0);
  EXPECT_FALSE(rep.direction.applicable);
}

}  // namespace
}  // namespace splitleak::metrics

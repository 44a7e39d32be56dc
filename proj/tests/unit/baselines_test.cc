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

#include "splitleak/baselines.h"
#include "splitleak/data.h"
#include "splitleak/errors.h"
#include "splitleak/gafm.h"
#include "splitleak/method.h"
#include "splitleak/metrics.h"
#include "splitleak/protocol.h"
#include "splitleak/random.h"

namespace splitleak::baselines {
namespace {

double Bce(const std::vector<double>& y, const std::vector<int>& t) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    s += t[i] ? std::log(y[i]) : std::log(1 - y[i]);
  }
  return -s / static_cast<double>(y.size());
}

TEST(Vanilla, GradientIsBceDerivative) {
  const std::vector<double> y{0.1, 0.7, 0.45, 0.99};
  const std::vector<int> t{0, 1, 1, 0};
  const auto g = VanillaCutGradient(y, t);
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto up = y, down = y;
    up[i] += 1e-7;
    down[i] -= 1e-7;
    const double num = (Bce(up, t) - Bce(down, t)) / 2e-7;
    EXPECT_NEAR(g[i] / num, 1.0, 1e-5);
  }
  // Label-1 gradients are negative, label-0 positive.
  EXPECT_GT(g[0], 0.0);
  EXPECT_LT(g[1], 0.0);
  EXPECT_THROW(VanillaCutGradient(y, std::vector<int>{1}), ShapeError);
}

TEST(MaxNorm, SigmaHandExample) {
  const auto s = MaxNormSigmas(std::vector<double>{3.0, -4.0, 0.0});
  EXPECT_DOUBLE_EQ(s[0], std::sqrt(7.0) / 3.0);
  EXPECT_EQ(s[1], 0.0);
  EXPECT_EQ(s[2], 0.0);
}

TEST(MaxNorm, ExpectedSquaredNormMatchesLargest) {
  const std::vector<double> g{0.75, -1.0, 0.1, -0.02, 0.5};
  const double gmax_sq = 1.0;
  Rng rng = StreamFor(9, "maxnorm-test");
  const int draws = 100000;
  // Per coordinate E[g^2 (1 + zeta)^2] = g^2 (1 + sigma^2) = gmax^2.
  std::vector<double> sum(g.size(), 0.0), sum_sq(g.size(), 0.0);
  double tot = 0.0, tot_sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const auto p = MaxNormPerturb(g, rng);
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double v = p[j] * p[j];
      sum[j] += v;
      sum_sq[j] += v * v;
      norm_sq += v;
    }
    tot += norm_sq;
    tot_sq += norm_sq * norm_sq;
  }
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double mean = sum[j] / draws;
    const double var = sum_sq[j] / draws - mean * mean;
    const double se = std::sqrt(var / draws);
    EXPECT_LE(std::abs(mean - gmax_sq), 3 * se + 1e-12) << "coordinate " << j;
  }
  const double mean = tot / draws;
  const double se = std::sqrt((tot_sq / draws - mean * mean) / draws);
  EXPECT_LE(std::abs(mean - g.size() * gmax_sq), 3 * se);
}

TEST(MaxNorm, LargestPassesUnchangedAndScaleZeroIsIdentity) {
  const std::vector<double> g{0.3, -0.9, 0.0};
  Rng rng = StreamFor(1, "mn");
  const auto p = MaxNormPerturb(g, rng);
  EXPECT_EQ(p[1], -0.9);
  EXPECT_EQ(p[2], 0.0);
  EXPECT_EQ(MaxNormPerturb(g, rng, 0.0), g);
  EXPECT_THROW(MaxNormPerturb(std::vector<double>{}, rng), ShapeError);
}

TEST(Methods, NamesRoundTrip) {
  for (Method m : kAllMethods) EXPECT_EQ(ParseMethod(MethodName(m)), m);
  EXPECT_EQ(MethodName(Method::kPenaltyOnly), "penalty_only");
  EXPECT_THROW(ParseMethod("dp_sgd"), ConfigError);
  EXPECT_TRUE(UsesGenerator(Method::kGanOnly));
  EXPECT_FALSE(UsesGenerator(Method::kPenaltyOnly));
}

struct MethodRun {
  gafm::TrainResult result;
  double test_auc;
};

MethodRun TrainMethod(Method m, std::uint64_t seed = 0) {
  const data::Dataset ds = data::SyntheticGaussian(400, 6, 3.0, 0.4, 0);
  data::TrainTest split = data::TrainTestSplit(ds, {0.7, seed});
  data::Standardize(split, data::Scaling::kMinMax);
  gafm::TrainConfig cfg;
  cfg.seed = seed;
  cfg.epochs = 40;
  cfg.batch_size = 64;
  cfg.lr_d = cfg.lr_g = cfg.lr_l = 1e-3;
  if (m == Method::kGanOnly) cfg.gamma = 0.0;
  const std::size_t counts[] = {6};
  auto session = protocol::MakeSession(split.train.features,
                                       data::PartitionFeatures(6, counts),
                                       cfg.arch.local_hidden, seed);
  auto active = gafm::ActiveState::Create(split.train.labels, cfg);
  MethodRun r{RunBaseline(m, session, active, cfg), 0.0};
  const auto scores =
      PredictScores(m, session, active, split.test.features, cfg);
  r.test_auc = metrics::Auc(scores, split.test.labels.values());
  return r;
}

TEST(Baselines, VanillaLearnsAndLeaks) {
  const MethodRun r = TrainMethod(Method::kVanilla);
  EXPECT_GT(r.test_auc, 0.9);
  EXPECT_EQ(r.result.method, Method::kVanilla);
  for (const auto& rec : r.result.records) {
    EXPECT_FALSE(rec.grad_gan.has_value());
    EXPECT_FALSE(rec.grad_penalty.has_value());
    EXPECT_EQ(rec.y_hat, rec.y_tilde);
    EXPECT_EQ(rec.grad_total > 0, rec.label == 0);
  }
  const auto leak = metrics::ComputeLeakReport(r.result.records);
  EXPECT_EQ(leak.leak_mean, 1.0);
}

TEST(Baselines, AblationsCarryTheirComponents) {
  const MethodRun gan = TrainMethod(Method::kGanOnly);
  for (const auto& rec : gan.result.records) {
    ASSERT_TRUE(rec.grad_gan.has_value());
    EXPECT_EQ(rec.grad_total, *rec.grad_gan);
  }
  const MethodRun pen = TrainMethod(Method::kPenaltyOnly);
  for (const auto& rec : pen.result.records) {
    ASSERT_TRUE(rec.grad_penalty.has_value());
    EXPECT_FALSE(rec.grad_gan.has_value());
    EXPECT_EQ(rec.grad_total, *rec.grad_penalty);
  }
  EXPECT_GT(pen.test_auc, 0.5);
}

TEST(Baselines, MaxNormKeepsUtility) {
  const MethodRun mn = TrainMethod(Method::kMaxNorm);
  const MethodRun van = TrainMethod(Method::kVanilla);
  EXPECT_GT(mn.test_auc, van.test_auc - 0.05);
  EXPECT_NE(mn.result.records[0].grad_total, van.result.records[0].grad_total);
}

}  // namespace
}  // namespace splitleak::baselines

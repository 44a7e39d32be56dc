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

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <gtest/gtest.h>

#include "splitleak/data.h"
#include "splitleak/errors.h"
#include "splitleak/nn.h"
#include "splitleak/protocol.h"
#include "splitleak/random.h"

namespace splitleak::protocol {
namespace {

// Passive parties are built from features and a model; there is no way to
// hand them labels.
static_assert(!std::is_constructible_v<PassiveParty, std::size_t, Matrix,
                                       nn::MlpParams, data::Labels>);
static_assert(!std::is_constructible_v<PassiveParty, std::size_t,
                                       data::Dataset, nn::MlpParams>);

Matrix Features(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng = StreamFor(seed, "features");
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, d);
  for (double& v : m.values()) v = g(rng);
  return m;
}

TEST(Aggregate, IdentityAndAverage) {
  const CutMessageUp a{0, {3, 4}, {0.2, 0.6}};
  const CutMessageUp b{1, {3, 4}, {0.4, 0.2}};
  const CutMessageUp one[] = {a};
  EXPECT_EQ(Aggregate(one, Aggregator::For(1)), a.values);
  const CutMessageUp two[] = {a, b};
  const auto avg = Aggregate(two, Aggregator::For(2));
  EXPECT_DOUBLE_EQ(avg[0], 0.3);
  EXPECT_DOUBLE_EQ(avg[1], 0.4);
  EXPECT_EQ(Aggregate(one, Aggregator{AggregatorKind::kAverage}), a.values);
  EXPECT_THROW(Aggregate(two, Aggregator{AggregatorKind::kIdentity}),
               ProtocolError);
  const CutMessageUp c{1, {3, 5}, {0.4, 0.2}};
  const CutMessageUp mismatched[] = {a, c};
  EXPECT_THROW(Aggregate(mismatched, Aggregator::For(2)), ProtocolError);
}

TEST(Aggregate, DistributeIsChainRule) {
  const CutMessageDown down{{1, 2}, {0.3, -0.9}};
  const auto three = DistributeGrad(down, Aggregator::For(3), 3);
  ASSERT_EQ(three.size(), 3u);
  for (const auto& m : three) {
    EXPECT_EQ(m.indices, down.indices);
    EXPECT_DOUBLE_EQ(m.grad[0], 0.1);
    EXPECT_DOUBLE_EQ(m.grad[1], -0.3);
  }
  EXPECT_EQ(DistributeGrad(down, Aggregator::For(1), 1)[0].grad, down.grad);
}

TEST(PassiveParty, ForwardUpdateDiscipline) {
  Rng rng = StreamFor(0, "party");
  const nn::LayerSpec specs[] = {{4, nn::Activation::kLeakyRelu},
                                 {1, nn::Activation::kSigmoid}};
  PassiveParty party(0, Features(6, 3, 1), nn::MakeMlp(3, specs, rng));
  const std::vector<std::size_t> rows{1, 4};
  EXPECT_THROW(party.Update({rows, {0.1, 0.1}}, 0.01), ProtocolError);
  const CutMessageUp up = party.Forward(rows);
  for (double v : up.values) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_THROW(party.Update({{1, 5}, {0.1, 0.1}}, 0.01), ProtocolError);
  const nn::MlpParams before = party.model();
  party.Update({rows, {0.1, -0.2}}, 0.01);
  EXPECT_NE(party.model(), before);
  EXPECT_THROW(party.Update({rows, {0.1, -0.2}}, 0.01), ProtocolError);
  const std::vector<std::size_t> out_of_range{6};
  EXPECT_THROW(party.Forward(out_of_range), ProtocolError);

  Rng r2 = StreamFor(0, "party");
  const nn::LayerSpec linear[] = {{1, nn::Activation::kIdentity}};
  EXPECT_THROW(PassiveParty(0, Features(2, 3, 1), nn::MakeMlp(3, linear, r2)),
               ShapeError);
}

// The update a party applies equals a manual Adam step on the backward pass
// of the gradient it received.
TEST(Session, BackwardRoundUpdatesOnlyFromReceivedGradient) {
  const Matrix x = Features(8, 6, 2);
  const std::size_t counts[] = {4, 2};
  const auto part = data::PartitionFeatures(6, counts);
  const std::size_t hidden[] = {5};
  SplitSession session = MakeSession(x, part, hidden, 11);
  EXPECT_EQ(session.aggregator().kind, AggregatorKind::kAverage);

  std::vector<nn::MlpParams> expect;
  for (const auto& p : session.parties()) expect.push_back(p.model());

  const std::vector<std::size_t> rows{0, 3, 5};
  const auto cut = session.ForwardRound(rows);
  EXPECT_TRUE(session.round_open());
  EXPECT_THROW(session.ForwardRound(rows), ProtocolError);

  const CutMessageDown down{rows, {0.5, -1.0, 0.25}};
  for (std::size_t p = 0; p < 2; ++p) {
    const Matrix own = x.SelectCols(part.columns[p]).SelectRows(rows);
    const auto fwd = nn::Forward(expect[p], own);
    std::vector<double> half = down.grad;
    for (double& g : half) g /= 2.0;
    const auto back = nn::Backward(expect[p], fwd.cache, Matrix::Column(half));
    nn::AdamState st = nn::AdamState::For(expect[p]);
    nn::AdamStep(expect[p], back.param_grads, st, 0.05);
  }
  EXPECT_THROW(session.BackwardRound({{0, 3}, {0.5, -1.0}}, 0.05),
               ProtocolError);
  session.BackwardRound(down, 0.05);
  EXPECT_FALSE(session.round_open());
  for (std::size_t p = 0; p < 2; ++p) {
    EXPECT_EQ(session.parties()[p].model(), expect[p]) << "party " << p;
  }
  EXPECT_EQ(session.messages_up(), 2u);
  EXPECT_EQ(session.messages_down(), 2u);
  EXPECT_THROW(session.BackwardRound(down, 0.05), ProtocolError);

  // Aggregated value was the average of the two local outputs.
  const double avg = (nn::Predict(session.parties()[0].model(),
                     x.SelectCols(part.columns[0]))(0, 0) +
         nn::Predict(session.parties()[1].model(),
                     x.SelectCols(part.columns[1]))(0, 0)) /
        2.0;
  EXPECT_NEAR(session.CutValuesOwn()[0], avg, 1e-15);
  EXPECT_NEAR(session.CutValues(x)[0], avg, 1e-15);
  EXPECT_TRUE(std::isfinite(cut[0]));
}

TEST(Session, TraceHoldsOnlyCutValuesAndGradients) {
  const Matrix x = Features(4, 3, 3);
  const std::size_t counts[] = {3};
  const std::size_t hidden[] = {2};
  SplitSession session =
      MakeSession(x, data::PartitionFeatures(3, counts), hidden, 0);
  std::ostringstream out;
  RoundTrace trace(out);
  session.SetTrace(&trace);
  session.SetRoundTag(7, 2);
  const std::vector<std::size_t> rows{2, 0};
  session.ForwardRound(rows);
  session.BackwardRound({rows, {0.25, -0.5}}, 0.01);
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "epoch,batch,direction,party,index,value");
  EXPECT_EQ(lines[1].rfind("7,2,up,0,2,", 0), 0u);
  EXPECT_EQ(lines[3], "7,2,down,0,2,0.25");
  EXPECT_EQ(lines[4], "7,2,down,0,0,-0.5");
}

TEST(Session, RejectsInconsistentSetup) {
  const Matrix x = Features(4, 4, 4);
  const std::size_t counts[] = {2, 2};
  const auto part = data::PartitionFeatures(4, counts);
  const std::size_t hidden[] = {2};
  SplitSession good = MakeSession(x, part, hidden, 0);
  std::vector<PassiveParty> parties = good.parties();
  EXPECT_THROW(SplitSession(parties, Aggregator{AggregatorKind::kIdentity},
                            part),
               ProtocolError);
  const std::size_t one[] = {4};
  EXPECT_THROW(SplitSession(parties, Aggregator::For(2),
                            data::PartitionFeatures(4, one)),
               ProtocolError);
}

}  // namespace
}  // namespace splitleak::protocol

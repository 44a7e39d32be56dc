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

// Cut-layer message exchange between passive parties (features only) and the
// active party (labels). Passive parties see nothing but CutMessageDown.

#ifndef SPLITLEAK_PROTOCOL_H_
#define SPLITLEAK_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "splitleak/data.h"
#include "splitleak/matrix.h"
#include "splitleak/nn.h"

namespace splitleak::protocol {

// Passive -> active: one scalar cut value per example, in (0, 1).
struct CutMessageUp {
  std::size_t party = 0;
  std::vector<std::size_t> indices;
  std::vector<double> values;
};

// Active -> passive: d(loss)/d(cut value) per example.
struct CutMessageDown {
  std::vector<std::size_t> indices;
  std::vector<double> grad;
};

enum class AggregatorKind { kIdentity, kAverage };

struct Aggregator {
  AggregatorKind kind = AggregatorKind::kIdentity;

  // Identity for one party, Average otherwise.
  static Aggregator For(std::size_t parties);
  // Throws ProtocolError for Identity with parties != 1.
  void CheckParties(std::size_t parties) const;
};

// Identity: the single party's values. Average: elementwise mean. Throws
// ProtocolError when the messages cover different example indices.
std::vector<double> Aggregate(std::span<const CutMessageUp> ups,
                              const Aggregator& agg);

// Chain rule through the aggregator: Identity passes `down` through, Average
// divides by the party count.
std::vector<CutMessageDown> DistributeGrad(const CutMessageDown& down,
                                           const Aggregator& agg,
                                           std::size_t parties);

// A passive party: owns a slice of feature columns and a local model ending
// in a sigmoid scalar. It holds no labels.
class PassiveParty {
 public:
  PassiveParty(std::size_t id, Matrix features, nn::MlpParams local_model,
               nn::AdamConfig adam = {});

  std::size_t id() const { return id_; }
  std::size_t rows() const { return features_.rows(); }
  std::size_t feature_count() const { return features_.cols(); }
  const nn::MlpParams& model() const { return model_; }
  const nn::AdamState& optimizer() const { return adam_; }

  // Local model outputs for the given rows of the party's own data; the
  // forward cache is kept for the matching Update().
  CutMessageUp Forward(std::span<const std::size_t> rows);

  // One Adam step seeded by the received gradient. Throws ProtocolError if
  // no forward for exactly these indices is pending.
  void Update(const CutMessageDown& down, double lr);

  // Inference on the party's own training rows.
  std::vector<double> PredictOwn() const;
  // Inference on another matrix holding this party's columns.
  std::vector<double> Predict(const Matrix& own_columns) const;

 private:
  struct Pending {
    std::vector<std::size_t> indices;
    nn::ForwardCache cache;
  };

  std::size_t id_;
  Matrix features_;
  nn::MlpParams model_;
  nn::AdamState adam_;
  std::optional<Pending> pending_;
};

// CSV dump, one line per message element:
// epoch,batch,direction,party,index,value
class RoundTrace {
 public:
  explicit RoundTrace(std::ostream& out, bool write_header = true);
  void Record(std::size_t epoch, std::size_t batch, const char* direction,
              std::size_t party, std::span<const std::size_t> indices,
              std::span<const double> values);

 private:
  std::ostream* out_;
};

// Synchronous round orchestration: every party forwards, the active party
// computes, every party receives exactly one reply for the same indices.
class SplitSession {
 public:
  SplitSession(std::vector<PassiveParty> parties, Aggregator agg,
               data::FeaturePartition partition);

  std::size_t party_count() const { return parties_.size(); }
  const std::vector<PassiveParty>& parties() const { return parties_; }
  const Aggregator& aggregator() const { return agg_; }
  const data::FeaturePartition& partition() const { return partition_; }

  void SetTrace(RoundTrace* trace) { trace_ = trace; }
  void SetRoundTag(std::size_t epoch, std::size_t batch) {
    epoch_ = epoch;
    batch_ = batch;
  }

  // Opens a round: collects every party's CutMessageUp and returns the
  // aggregated cut values. Throws ProtocolError if a round is already open.
  std::vector<double> ForwardRound(std::span<const std::size_t> rows);

  // Closes the open round. Throws ProtocolError if no round is open or the
  // indices differ from the forwarded ones.
  void BackwardRound(const CutMessageDown& down, double lr);

  bool round_open() const { return open_.has_value(); }
  std::size_t messages_up() const { return messages_up_; }
  std::size_t messages_down() const { return messages_down_; }

  // Aggregated cut values for all training rows.
  std::vector<double> CutValuesOwn() const;
  // Aggregated cut values for another matrix with the full column set.
  std::vector<double> CutValues(const Matrix& features) const;

 private:
  std::vector<PassiveParty> parties_;
  Aggregator agg_;
  data::FeaturePartition partition_;
  RoundTrace* trace_ = nullptr;
  std::size_t epoch_ = 0;
  std::size_t batch_ = 0;
  std::optional<std::vector<std::size_t>> open_;
  std::size_t messages_up_ = 0;
  std::size_t messages_down_ = 0;
};

// Builds one party per partition block with its own columns of `features`
// and a freshly initialized local model.
SplitSession MakeSession(const Matrix& features,
                         const data::FeaturePartition& partition,
                         std::span<const std::size_t> hidden_widths,
                         std::uint64_t seed,
                         double leaky_slope = nn::kDefaultLeakySlope);

}  // namespace splitleak::protocol

#endif  // SPLITLEAK_PROTOCOL_H_

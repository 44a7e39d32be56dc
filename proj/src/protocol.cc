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

#include "splitleak/protocol.h"

#include <algorithm>
#include <string>

#include "splitleak/errors.h"
#include "splitleak/random.h"

namespace splitleak::protocol {

Aggregator Aggregator::For(std::size_t parties) {
  return {parties == 1 ? AggregatorKind::kIdentity : AggregatorKind::kAverage};
}

void Aggregator::CheckParties(std::size_t parties) const {
  if (parties == 0) throw ProtocolError("at least one passive party required");
  if (kind == AggregatorKind::kIdentity && parties != 1) {
    throw ProtocolError("identity aggregation needs exactly one party, got " +
                        std::to_string(parties));
  }
}

std::vector<double> Aggregate(std::span<const CutMessageUp> ups,
                              const Aggregator& agg) {
  agg.CheckParties(ups.size());
  const auto& first = ups.front();
  for (const auto& up : ups) {
    if (up.indices != first.indices) {
      throw ProtocolError("party " + std::to_string(up.party) +
                          " sent a different example set");
    }
    if (up.values.size() != up.indices.size()) {
      throw ProtocolError("party " + std::to_string(up.party) +
                          " sent values/indices of different lengths");
    }
  }
  if (agg.kind == AggregatorKind::kIdentity) return first.values;

  std::vector<double> out(first.values.size(), 0.0);
  for (const auto& up : ups) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += up.values[i];
  }
  const double p = static_cast<double>(ups.size());
  for (double& v : out) v /= p;
  return out;
}

std::vector<CutMessageDown> DistributeGrad(const CutMessageDown& down,
                                           const Aggregator& agg,
                                           std::size_t parties) {
  agg.CheckParties(parties);
  CutMessageDown each = down;
  if (agg.kind == AggregatorKind::kAverage) {
    const double p = static_cast<double>(parties);
    for (double& g : each.grad) g /= p;
  }
  return std::vector<CutMessageDown>(parties, each);
}

PassiveParty::PassiveParty(std::size_t id, Matrix features,
                           nn::MlpParams local_model, nn::AdamConfig adam)
    : id_(id),
      features_(std::move(features)),
      model_(std::move(local_model)),
      adam_(nn::AdamState::For(model_, adam)) {
  model_.Validate();
  if (model_.input_dim() != features_.cols()) {
    throw ShapeError("party " + std::to_string(id_) + " model expects " +
                     std::to_string(model_.input_dim()) + " inputs, owns " +
                     std::to_string(features_.cols()) + " columns");
  }
  if (model_.output_dim() != 1 ||
      model_.layers.back().activation != nn::Activation::kSigmoid) {
    throw ShapeError("local model must end in one sigmoid unit");
  }
}

CutMessageUp PassiveParty::Forward(std::span<const std::size_t> rows) {
  for (std::size_t r : rows) {
    if (r >= features_.rows()) {
      throw ProtocolError("party " + std::to_string(id_) + ": row " +
                          std::to_string(r) + " out of range");
    }
  }
  auto fwd = nn::Forward(model_, features_.SelectRows(rows));
  CutMessageUp up{id_, std::vector<std::size_t>(rows.begin(), rows.end()),
                  std::vector<double>(fwd.output.values().begin(),
                                      fwd.output.values().end())};
  pending_ = Pending{up.indices, std::move(fwd.cache)};
  return up;
}

void PassiveParty::Update(const CutMessageDown& down, double lr) {
  if (!pending_) {
    throw ProtocolError("party " + std::to_string(id_) +
                        ": gradient received without a pending forward");
  }
  if (pending_->indices != down.indices ||
      down.grad.size() != down.indices.size()) {
    throw ProtocolError("party " + std::to_string(id_) +
                        ": gradient does not match the pending batch");
  }
  const auto back =
      nn::Backward(model_, pending_->cache, Matrix::Column(down.grad));
  nn::AdamStep(model_, back.param_grads, adam_, lr);
  pending_.reset();
}

std::vector<double> PassiveParty::PredictOwn() const {
  return Predict(features_);
}

std::vector<double> PassiveParty::Predict(const Matrix& own_columns) const {
  const Matrix out = nn::Predict(model_, own_columns);
  return {out.values().begin(), out.values().end()};
}

RoundTrace::RoundTrace(std::ostream& out, bool write_header) : out_(&out) {
  if (write_header) *out_ << "epoch,batch,direction,party,index,value\n";
}

void RoundTrace::Record(std::size_t epoch, std::size_t batch,
                        const char* direction, std::size_t party,
                        std::span<const std::size_t> indices,
                        std::span<const double> values) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    *out_ << epoch << ',' << batch << ',' << direction << ',' << party << ','
          << indices[i] << ',' << values[i] << '\n';
  }
}

SplitSession::SplitSession(std::vector<PassiveParty> parties, Aggregator agg,
                           data::FeaturePartition partition)
    : parties_(std::move(parties)),
      agg_(agg),
      partition_(std::move(partition)) {
  agg_.CheckParties(parties_.size());
  if (partition_.parties() != parties_.size()) {
    throw ProtocolError("partition has " + std::to_string(partition_.parties()) +
                        " blocks for " + std::to_string(parties_.size()) +
                        " parties");
  }
  for (std::size_t p = 1; p < parties_.size(); ++p) {
    if (parties_[p].rows() != parties_[0].rows()) {
      throw ProtocolError("parties hold different row counts");
    }
  }
}

std::vector<double> SplitSession::ForwardRound(
    std::span<const std::size_t> rows) {
  if (open_) throw ProtocolError("previous round was never answered");
  std::vector<CutMessageUp> ups;
  ups.reserve(parties_.size());
  for (auto& party : parties_) {
    ups.push_back(party.Forward(rows));
    ++messages_up_;
    if (trace_) {
      trace_->Record(epoch_, batch_, "up", party.id(), ups.back().indices,
                     ups.back().values);
    }
  }
  open_ = std::vector<std::size_t>(rows.begin(), rows.end());
  return Aggregate(ups, agg_);
}

void SplitSession::BackwardRound(const CutMessageDown& down, double lr) {
  if (!open_) throw ProtocolError("no open round to answer");
  if (*open_ != down.indices) {
    throw ProtocolError("reply indices differ from the forwarded batch");
  }
  const auto per_party = DistributeGrad(down, agg_, parties_.size());
  for (std::size_t p = 0; p < parties_.size(); ++p) {
    if (trace_) {
      trace_->Record(epoch_, batch_, "down", parties_[p].id(),
                     per_party[p].indices, per_party[p].grad);
    }
    parties_[p].Update(per_party[p], lr);
    ++messages_down_;
  }
  open_.reset();
}

std::vector<double> SplitSession::CutValuesOwn() const {
  std::vector<CutMessageUp> ups;
  std::vector<std::size_t> all(parties_.front().rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for (const auto& party : parties_) {
    ups.push_back({party.id(), all, party.PredictOwn()});
  }
  return Aggregate(ups, agg_);
}

std::vector<double> SplitSession::CutValues(const Matrix& features) const {
  std::vector<CutMessageUp> ups;
  std::vector<std::size_t> all(features.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for (std::size_t p = 0; p < parties_.size(); ++p) {
    ups.push_back({parties_[p].id(), all,
                   parties_[p].Predict(
                       features.SelectCols(partition_.columns[p]))});
  }
  return Aggregate(ups, agg_);
}

SplitSession MakeSession(const Matrix& features,
                         const data::FeaturePartition& partition,
                         std::span<const std::size_t> hidden_widths,
                         std::uint64_t seed, double leaky_slope) {
  std::vector<PassiveParty> parties;
  for (std::size_t p = 0; p < partition.parties(); ++p) {
    std::vector<nn::LayerSpec> specs;
    for (std::size_t w : hidden_widths) {
      specs.push_back({w, nn::Activation::kLeakyRelu});
    }
    specs.push_back({1, nn::Activation::kSigmoid});
    Rng rng = StreamFor(seed, "local_model", p);
    nn::MlpParams model =
        nn::MakeMlp(partition.columns[p].size(), specs, rng, leaky_slope);
    parties.emplace_back(p, features.SelectCols(partition.columns[p]),
                         std::move(model));
  }
  const std::size_t count = parties.size();
  return SplitSession(std::move(parties), Aggregator::For(count), partition);
}

}  // namespace splitleak::protocol

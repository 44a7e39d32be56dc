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

#include "training_loop.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "splitleak/baselines.h"
#include "splitleak/errors.h"
#include "splitleak/metrics.h"
#include "splitleak/nn.h"

namespace splitleak::detail {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool AllFinite(std::span<const double> v) {
  return std::ranges::all_of(v, [](double x) { return std::isfinite(x); });
}

std::vector<double> Column(const Matrix& m) {
  return {m.values().begin(), m.values().end()};
}

bool UsesPenalty(Method m) {
  return m == Method::kGafm || m == Method::kPenaltyOnly;
}

bool UsesHead(Method m, const gafm::TrainConfig& config) {
  return config.vanilla_head &&
         (m == Method::kVanilla || m == Method::kMaxNorm);
}

// BCE through the optional head; updates the head and returns d/d(cut).
std::vector<double> HeadStep(gafm::ActiveState& active,
                             std::span<const double> y_tilde,
                             std::span<const int> labels, double lr) {
  auto fwd = nn::Forward(active.head, Matrix::Column(y_tilde));
  const auto upstream =
      baselines::VanillaCutGradient(fwd.output.values(), labels);
  auto back = nn::Backward(active.head, fwd.cache, Matrix::Column(upstream));
  nn::AdamStep(active.head, back.param_grads, active.head_opt, lr);
  return Column(back.input_grad);
}

}  // namespace

std::vector<double> ScoresFromCut(Method method,
                                  const gafm::ActiveState& active,
                                  std::span<const double> cut_values,
                                  const gafm::TrainConfig& config) {
  std::vector<double> scores;
  if (UsesGenerator(method)) {
    scores = gafm::Generate(active.generator, cut_values);
  } else if (UsesHead(method, config)) {
    scores = Column(nn::Predict(active.head, Matrix::Column(cut_values)));
  } else {
    scores.assign(cut_values.begin(), cut_values.end());
  }
  if (active.flip_scores) {
    for (double& s : scores) s = 1.0 - s;
  }
  return scores;
}

gafm::TrainResult RunSplitTraining(Method method,
                                   protocol::SplitSession& session,
                                   gafm::ActiveState& active,
                                   const gafm::TrainConfig& config) {
  config.Validate();
  const std::size_t n = active.labels.size();
  if (session.parties().front().rows() != n) {
    throw ProtocolError("session rows (" +
                        std::to_string(session.parties().front().rows()) +
                        ") != label count (" + std::to_string(n) + ")");
  }
  if (n == 0) throw ConfigError("no training rows");
  const bool adversarial = UsesGenerator(method);
  const bool penalty = UsesPenalty(method);
  const bool head = UsesHead(method, config);
  if (head && active.head.layers.empty()) {
    throw ConfigError("vanilla head enabled but the active state has none");
  }

  Rng shuffle_rng = StreamFor(config.seed, "shuffle");
  Rng init_rng = StreamFor(config.seed, "initial_cut");
  Rng response_rng = StreamFor(config.seed, "randomized_response");
  Rng label_noise_rng = StreamFor(config.seed, "label_noise");
  Rng max_norm_rng = StreamFor(config.seed, "max_norm");

  gafm::TrainResult result;
  result.method = method;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::span<const int> all_labels = active.labels.values();
  std::vector<double> epoch_response;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const bool last_epoch = epoch + 1 == config.epochs;
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    if (penalty && config.redraw == gafm::ResponseRedraw::kPerEpoch) {
      epoch_response =
          gafm::DrawRandomizedResponse(all_labels, config.delta, response_rng)
              .values;
    }
    double gan_sum = 0.0;
    double penalty_sum = 0.0;
    std::size_t batches = 0;

    for (std::size_t start = 0, batch = 0; start < n;
         start += config.batch_size, ++batch) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const std::span<const std::size_t> rows(order.data() + start,
                                              stop - start);
      const std::size_t m = rows.size();
      std::vector<int> labels(m);
      for (std::size_t i = 0; i < m; ++i) labels[i] = all_labels[rows[i]];

      session.SetRoundTag(epoch, batch);
      const std::vector<double> y_tilde = session.ForwardRound(rows);

      std::optional<std::vector<double>> gan_part;
      std::optional<std::vector<double>> penalty_part;
      std::vector<double> cut;
      try {
        if (adversarial) {
          std::vector<double> critic_input = y_tilde;
          if (epoch == 0 && batch == 0) {
            // Before any passive forward has informed the critic, it sees
            // standard-normal cut values.
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (double& v : critic_input) v = gauss(init_rng);
          }
          const double gan_loss = gafm::DiscriminatorStep(
              active, critic_input, labels, config, label_noise_rng);
          gafm::GeneratorStep(active, critic_input, config);
          if (!std::isfinite(gan_loss)) throw NumericError("GAN loss is not finite");
          gan_sum += gan_loss;
          gan_part = nn::L2Normalize(gafm::GanCutGradient(active, y_tilde));
        }
        if (penalty) {
          std::vector<double> y_dot;
          if (config.redraw == gafm::ResponseRedraw::kPerEpoch) {
            y_dot.resize(m);
            for (std::size_t i = 0; i < m; ++i) y_dot[i] = epoch_response[rows[i]];
          } else {
            y_dot = gafm::DrawRandomizedResponse(labels, config.delta,
                                                 response_rng)
                        .values;
          }
          const double pen_loss = gafm::PenaltyLoss(y_tilde, y_dot);
          if (!std::isfinite(pen_loss)) {
            throw NumericError("penalty loss is not finite");
          }
          penalty_sum += pen_loss;
          penalty_part = nn::L2Normalize(gafm::PenaltyGradient(y_tilde, y_dot));
        }

        switch (method) {
          case Method::kGafm:
            cut = *gan_part;
            for (std::size_t i = 0; i < m; ++i) {
              cut[i] += config.gamma * (*penalty_part)[i];
            }
            break;
          case Method::kGanOnly:
            cut = *gan_part;
            break;
          case Method::kPenaltyOnly:
            cut = *penalty_part;
            break;
          case Method::kVanilla:
          case Method::kMaxNorm:
            cut = head ? HeadStep(active, y_tilde, labels, config.lr_l)
                       : baselines::VanillaCutGradient(y_tilde, labels);
            if (method == Method::kMaxNorm) {
              cut = baselines::MaxNormPerturb(cut, max_norm_rng,
                                              config.max_norm_noise_scale);
            }
            break;
        }
        if (!AllFinite(cut)) throw NumericError("cut gradient is not finite");
        session.BackwardRound(protocol::CutMessageDown{
                                  {rows.begin(), rows.end()}, cut},
                              config.lr_l);
      } catch (const NumericError& e) {
        throw TrainingAborted(epoch, batch, e.what());
      }
      ++batches;

      if (last_epoch) {
        const std::vector<double> y_hat =
            ScoresFromCut(method, active, y_tilde, config);
        for (std::size_t i = 0; i < m; ++i) {
          CutRecord rec;
          rec.index = rows[i];
          rec.label = labels[i];
          rec.y_tilde = y_tilde[i];
          rec.y_hat = y_hat[i];
          rec.grad_total = cut[i];
          if (gan_part) rec.grad_gan = (*gan_part)[i];
          if (penalty_part) rec.grad_penalty = (*penalty_part)[i];
          result.records.push_back(rec);
        }
      }
    }

    gafm::EpochMetrics em;
    em.epoch = epoch;
    em.gan_loss = adversarial ? gan_sum / static_cast<double>(batches) : kNaN;
    em.penalty_loss =
        penalty ? penalty_sum / static_cast<double>(batches) : kNaN;
    try {
      active.flip_scores = false;
      em.raw_train_auc = metrics::Auc(
          ScoresFromCut(method, active, session.CutValuesOwn(), config),
          all_labels);
      active.flip_scores = em.raw_train_auc < 0.5;
      em.train_auc = active.flip_scores ? 1.0 - em.raw_train_auc
                                        : em.raw_train_auc;
    } catch (const MetricError&) {
      em.raw_train_auc = kNaN;
      em.train_auc = kNaN;
    }
    result.epochs.push_back(em);
    if (config.on_epoch) config.on_epoch(em);
  }
  std::ranges::sort(result.records, {}, &CutRecord::index);
  return result;
}

}  // namespace splitleak::detail

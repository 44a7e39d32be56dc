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

// Adversarial split training on the active party: a Wasserstein critic and a
// generator on top of the aggregated cut value, plus a cross-entropy penalty
// toward randomized-response targets. The cut-layer gradient sent to the
// passive parties is the sum of the two batch-normalized parts.

#ifndef SPLITLEAK_GAFM_H_
#define SPLITLEAK_GAFM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "splitleak/data.h"
#include "splitleak/matrix.h"
#include "splitleak/method.h"
#include "splitleak/nn.h"
#include "splitleak/protocol.h"
#include "splitleak/random.h"
#include "splitleak/records.h"

namespace splitleak::gafm {

struct Architecture {
  std::vector<std::size_t> local_hidden{32, 16};
  std::vector<std::size_t> generator_hidden{32, 16};
  std::vector<std::size_t> discriminator_hidden{64, 32, 16};
  double leaky_slope = nn::kDefaultLeakySlope;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_auc = 0.0;     // oriented scores; NaN if one-class labels
  double raw_train_auc = 0.0; // before orientation
  double gan_loss = 0.0;      // batch mean, NaN if the method has none
  double penalty_loss = 0.0;  // batch mean, NaN if the method has none
};

// When the randomized-response offsets u are redrawn.
enum class ResponseRedraw { kPerBatch, kPerEpoch };

// Shared by GAFM, its ablations and the baselines; fields a method does not
// use are ignored.
struct TrainConfig {
  double delta = 0.05;  // randomized-response half width, in [0, 0.5]
  double sigma = 0.01;  // sd of the noise added to real labels for the critic
  double gamma = 1.0;   // weight of the normalized penalty gradient
  double clip = 0.1;    // critic weight bound
  std::size_t epochs = 300;
  std::size_t batch_size = 1028;
  double lr_d = 1e-4;
  double lr_g = 1e-4;
  double lr_l = 1e-4;
  std::uint64_t seed = 0;
  ResponseRedraw redraw = ResponseRedraw::kPerBatch;
  Architecture arch;
  // Vanilla / Max Norm only: a sigmoid(w * y + b) head on the cut value.
  bool vanilla_head = false;
  // Max Norm only: multiplies the drawn noise; 0 reproduces Vanilla.
  double max_norm_noise_scale = 1.0;
  // Called after every epoch with that epoch's metrics; may be empty.
  std::function<void(const EpochMetrics&)> on_epoch;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
};
using GafmConfig = TrainConfig;

// Everything the label holder owns.
struct ActiveState {
  data::Labels labels;
  nn::MlpParams generator;      // 1 -> hidden -> 1, sigmoid output
  nn::MlpParams discriminator;  // 1 -> hidden -> 1, LeakyReLU then linear
  nn::AdamState generator_opt;
  nn::AdamState discriminator_opt;
  nn::MlpParams head;  // optional vanilla head, empty unless enabled
  nn::AdamState head_opt;
  // Set after every epoch from the training labels: scores are reported as
  // 1 - s when the raw scores rank the training classes backwards.
  bool flip_scores = false;

  static ActiveState Create(data::Labels labels, const TrainConfig& config);
};

struct RandomizedResponse {
  std::vector<double> values;
  double delta = 0.0;
};

// 0.5 + u for label 1, 0.5 - u for label 0, u ~ Uniform(0, delta) per example.
// Throws ConfigError if delta is outside [0, 0.5].
RandomizedResponse DrawRandomizedResponse(std::span<const int> labels,
                                          double delta, Rng& rng);

// mean(d_real) - mean(d_fake).
double GanLoss(std::span<const double> d_real, std::span<const double> d_fake);

inline constexpr double kCutClamp = 1e-7;

// Soft-target binary cross entropy of the (clamped) cut values.
double PenaltyLoss(std::span<const double> y_tilde,
                   std::span<const double> y_dot);

// d PenaltyLoss / d y_tilde_i = (y - t) / (N y (1 - y)) at the clamped y.
std::vector<double> PenaltyGradient(std::span<const double> y_tilde,
                                    std::span<const double> y_dot);

// G applied to a batch of cut values.
std::vector<double> Generate(const nn::MlpParams& generator,
                             std::span<const double> y_tilde);

// One Adam ascent step of the critic on the GAN loss followed by clipping to
// [-clip, clip]. Real samples are labels plus fresh N(0, sigma^2) noise.
// Returns the loss at the pre-step parameters.
double DiscriminatorStep(ActiveState& active, std::span<const double> y_tilde,
                         std::span<const int> labels, const TrainConfig& config,
                         Rng& rng);

// One Adam descent step of the generator on the GAN loss.
void GeneratorStep(ActiveState& active, std::span<const double> y_tilde,
                   const TrainConfig& config);

// d L_GAN / d y_tilde_i = -(1/N) D'(G(y_i)) G'(y_i).
std::vector<double> GanCutGradient(const ActiveState& active,
                                   std::span<const double> y_tilde);

// Unit-normalized GAN part plus gamma times the unit-normalized penalty part,
// each normalized over the whole batch.
std::vector<double> CutGradient(std::span<const double> grad_gan,
                                std::span<const double> grad_penalty,
                                double gamma);

struct TrainResult {
  Method method = Method::kGafm;
  std::vector<EpochMetrics> epochs;
  std::vector<CutRecord> records;  // final epoch, one per training example
};

// Full adversarial training loop on an initialized session.
TrainResult Train(protocol::SplitSession& session, ActiveState& active,
                  const TrainConfig& config);

// Generator output on top of the aggregated cut values of `features`, with
// the orientation chosen during training.
std::vector<double> Predict(const protocol::SplitSession& session,
                            const ActiveState& active, const Matrix& features);

}  // namespace splitleak::gafm

#endif  // SPLITLEAK_GAFM_H_

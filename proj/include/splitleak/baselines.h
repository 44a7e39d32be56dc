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

#ifndef SPLITLEAK_BASELINES_H_
#define SPLITLEAK_BASELINES_H_

#include <span>
#include <vector>

#include "splitleak/gafm.h"
#include "splitleak/method.h"
#include "splitleak/protocol.h"
#include "splitleak/random.h"

namespace splitleak::baselines {

// Gradient of the batch-mean binary cross entropy of the clamped cut values
// against the true labels.
std::vector<double> VanillaCutGradient(std::span<const double> y_tilde,
                                       std::span<const int> labels);

// sigma_j = sqrt(g_max^2 / g_j^2 - 1); 0 for g_j == 0.
std::vector<double> MaxNormSigmas(std::span<const double> grads);

// g_j * (1 + scale * zeta_j), zeta_j ~ N(0, sigma_j^2). Zero gradients pass
// through unchanged.
std::vector<double> MaxNormPerturb(std::span<const double> grads, Rng& rng,
                                   double noise_scale = 1.0);

// Trains `kind` on the session. kGafm delegates to gafm::Train.
gafm::TrainResult RunBaseline(Method kind, protocol::SplitSession& session,
                              gafm::ActiveState& active,
                              const gafm::TrainConfig& config);

// Prediction scores for any method: generator output for the adversarial
// methods, the cut value (or the optional head) otherwise.
std::vector<double> PredictScores(Method kind,
                                  const protocol::SplitSession& session,
                                  const gafm::ActiveState& active,
                                  const Matrix& features,
                                  const gafm::TrainConfig& config);

}  // namespace splitleak::baselines

#endif  // SPLITLEAK_BASELINES_H_

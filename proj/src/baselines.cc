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

#include "splitleak/baselines.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "splitleak/errors.h"
#include "training_loop.h"

namespace splitleak {

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kGafm:
      return "gafm";
    case Method::kVanilla:
      return "vanilla";
    case Method::kMaxNorm:
      return "maxnorm";
    case Method::kGanOnly:
      return "gan_only";
    case Method::kPenaltyOnly:
      return "penalty_only";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (Method m : kAllMethods) {
    if (MethodName(m) == name) return m;
  }
  if (name == "max_norm") return Method::kMaxNorm;
  if (name == "gan") return Method::kGanOnly;
  if (name == "penalty") return Method::kPenaltyOnly;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

namespace baselines {

std::vector<double> VanillaCutGradient(std::span<const double> y_tilde,
                                       std::span<const int> labels) {
  if (y_tilde.size() != labels.size()) {
    throw ShapeError("vanilla gradient: length mismatch");
  }
  const double n = static_cast<double>(y_tilde.size());
  std::vector<double> g(y_tilde.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = std::clamp(y_tilde[i], gafm::kCutClamp, 1.0 - gafm::kCutClamp);
    g[i] = (y - labels[i]) / (n * y * (1.0 - y));
  }
  return g;
}

std::vector<double> MaxNormSigmas(std::span<const double> grads) {
  double max_sq = 0.0;
  for (double g : grads) max_sq = std::max(max_sq, g * g);
  std::vector<double> sigmas(grads.size(), 0.0);
  for (std::size_t j = 0; j < grads.size(); ++j) {
    const double sq = grads[j] * grads[j];
    if (sq == 0.0) continue;
    sigmas[j] = std::sqrt(std::max(max_sq / sq - 1.0, 0.0));
  }
  return sigmas;
}

std::vector<double> MaxNormPerturb(std::span<const double> grads, Rng& rng,
                                   double noise_scale) {
  if (grads.empty()) throw ShapeError("max norm: empty batch");
  const std::vector<double> sigmas = MaxNormSigmas(grads);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> out(grads.size());
  for (std::size_t j = 0; j < grads.size(); ++j) {
    if (grads[j] == 0.0) {
      out[j] = 0.0;
      continue;
    }
    const double zeta = sigmas[j] * unit(rng);
    out[j] = grads[j] * (1.0 + noise_scale * zeta);
  }
  return out;
}

gafm::TrainResult RunBaseline(Method kind, protocol::SplitSession& session,
                              gafm::ActiveState& active,
                              const gafm::TrainConfig& config) {
  return detail::RunSplitTraining(kind, session, active, config);
}

std::vector<double> PredictScores(Method kind,
                                  const protocol::SplitSession& session,
                                  const gafm::ActiveState& active,
                                  const Matrix& features,
                                  const gafm::TrainConfig& config) {
  return detail::ScoresFromCut(kind, active, session.CutValues(features),
                               config);
}

}  // namespace baselines
}  // namespace splitleak

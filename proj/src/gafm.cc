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

#include "splitleak/gafm.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "splitleak/errors.h"
#include "training_loop.h"

namespace splitleak::gafm {
namespace {

std::vector<nn::LayerSpec> HiddenThen(std::span<const std::size_t> hidden,
                                      nn::Activation last) {
  std::vector<nn::LayerSpec> specs;
  for (std::size_t w : hidden) specs.push_back({w, nn::Activation::kLeakyRelu});
  specs.push_back({1, last});
  return specs;
}

double Mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::vector<double> Flatten(const Matrix& m) {
  return {m.values().begin(), m.values().end()};
}

void AddInto(nn::ParamTensors& acc, const nn::ParamTensors& g) {
  for (std::size_t l = 0; l < acc.size(); ++l) {
    auto a = acc[l].weights.values();
    const auto b = g[l].weights.values();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    for (std::size_t i = 0; i < acc[l].bias.size(); ++i) {
      acc[l].bias[i] += g[l].bias[i];
    }
  }
}

}  // namespace

void TrainConfig::Validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(delta >= 0.0 && delta <= 0.5)) fail("delta must lie in [0, 0.5]");
  if (!(sigma > 0.0)) fail("sigma must be positive");
  if (!(gamma >= 0.0)) fail("gamma must be non-negative");
  if (!(clip > 0.0)) fail("clip must be positive");
  if (epochs == 0) fail("epochs must be positive");
  if (batch_size == 0) fail("batch size must be positive");
  if (!(lr_d > 0.0 && lr_g > 0.0 && lr_l > 0.0)) {
    fail("learning rates must be positive");
  }
  if (!(max_norm_noise_scale >= 0.0)) fail("noise scale must be >= 0");
  if (!(arch.leaky_slope >= 0.0 && arch.leaky_slope < 1.0)) {
    fail("leaky slope must lie in [0, 1)");
  }
}

ActiveState ActiveState::Create(data::Labels labels, const TrainConfig& config) {
  ActiveState s;
  s.labels = std::move(labels);
  Rng g_rng = StreamFor(config.seed, "generator");
  Rng d_rng = StreamFor(config.seed, "discriminator");
  const auto g_specs =
      HiddenThen(config.arch.generator_hidden, nn::Activation::kSigmoid);
  const auto d_specs =
      HiddenThen(config.arch.discriminator_hidden, nn::Activation::kIdentity);
  s.generator = nn::MakeMlp(1, g_specs, g_rng, config.arch.leaky_slope);
  s.discriminator = nn::MakeMlp(1, d_specs, d_rng, config.arch.leaky_slope);
  nn::ClipWeights(s.discriminator, config.clip);
  s.generator_opt = nn::AdamState::For(s.generator);
  s.discriminator_opt = nn::AdamState::For(s.discriminator);
  if (config.vanilla_head) {
    Rng h_rng = StreamFor(config.seed, "head");
    const nn::LayerSpec head_spec[] = {{1, nn::Activation::kSigmoid}};
    s.head = nn::MakeMlp(1, head_spec, h_rng, config.arch.leaky_slope);
    s.head_opt = nn::AdamState::For(s.head);
  }
  return s;
}

RandomizedResponse DrawRandomizedResponse(std::span<const int> labels,
                                          double delta, Rng& rng) {
  if (!(delta >= 0.0 && delta <= 0.5)) {
    throw ConfigError("delta must lie in [0, 0.5], got " + std::to_string(delta));
  }
  RandomizedResponse rr{std::vector<double>(labels.size(), 0.5), delta};
  if (delta == 0.0) return rr;
  std::uniform_real_distribution<double> u(0.0, delta);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double draw = u(rng);
    rr.values[i] = labels[i] == 1 ? 0.5 + draw : 0.5 - draw;
  }
  return rr;
}

double GanLoss(std::span<const double> d_real, std::span<const double> d_fake) {
  if (d_real.size() != d_fake.size()) {
    throw ShapeError("GAN loss: real and fake batches differ in size");
  }
  return Mean(d_real) - Mean(d_fake);
}

double PenaltyLoss(std::span<const double> y_tilde,
                   std::span<const double> y_dot) {
  if (y_tilde.size() != y_dot.size()) {
    throw ShapeError("penalty loss: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < y_tilde.size(); ++i) {
    const double y = std::clamp(y_tilde[i], kCutClamp, 1.0 - kCutClamp);
    sum += y_dot[i] * std::log(y) + (1.0 - y_dot[i]) * std::log1p(-y);
  }
  return -sum / static_cast<double>(y_tilde.size());
}

std::vector<double> PenaltyGradient(std::span<const double> y_tilde,
                                    std::span<const double> y_dot) {
  if (y_tilde.size() != y_dot.size()) {
    throw ShapeError("penalty gradient: length mismatch");
  }
  const double n = static_cast<double>(y_tilde.size());
  std::vector<double> g(y_tilde.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = std::clamp(y_tilde[i], kCutClamp, 1.0 - kCutClamp);
    g[i] = (y - y_dot[i]) / (n * y * (1.0 - y));
  }
  return g;
}

std::vector<double> Generate(const nn::MlpParams& generator,
                             std::span<const double> y_tilde) {
  return Flatten(nn::Predict(generator, Matrix::Column(y_tilde)));
}

double DiscriminatorStep(ActiveState& active, std::span<const double> y_tilde,
                         std::span<const int> labels, const TrainConfig& config,
                         Rng& rng) {
  if (y_tilde.size() != labels.size()) {
    throw ShapeError("critic step: cut values and labels differ in length");
  }
  const std::size_t n = y_tilde.size();
  std::normal_distribution<double> eps(0.0, config.sigma);
  std::vector<double> real(n);
  for (std::size_t i = 0; i < n; ++i) real[i] = labels[i] + eps(rng);
  const std::vector<double> fake = Generate(active.generator, y_tilde);

  auto real_fwd = nn::Forward(active.discriminator, Matrix::Column(real));
  auto fake_fwd = nn::Forward(active.discriminator, Matrix::Column(fake));
  const double loss =
      GanLoss(real_fwd.output.values(), fake_fwd.output.values());

  // Ascent on L_GAN == descent on -L_GAN.
  const double w = 1.0 / static_cast<double>(n);
  auto grads = nn::Backward(active.discriminator, real_fwd.cache,
                            Matrix(n, 1, -w))
                   .param_grads;
  AddInto(grads, nn::Backward(active.discriminator, fake_fwd.cache,
                              Matrix(n, 1, w))
                     .param_grads);
  nn::AdamStep(active.discriminator, grads, active.discriminator_opt,
               config.lr_d);
  nn::ClipWeights(active.discriminator, config.clip);
  return loss;
}

void GeneratorStep(ActiveState& active, std::span<const double> y_tilde,
                   const TrainConfig& config) {
  const std::size_t n = y_tilde.size();
  auto g_fwd = nn::Forward(active.generator, Matrix::Column(y_tilde));
  auto d_fwd = nn::Forward(active.discriminator, g_fwd.output);
  // Only -mean(D(G(y))) depends on the generator.
  const auto d_back = nn::Backward(active.discriminator, d_fwd.cache,
                                   Matrix(n, 1, -1.0 / static_cast<double>(n)));
  const auto g_back =
      nn::Backward(active.generator, g_fwd.cache, d_back.input_grad);
  nn::AdamStep(active.generator, g_back.param_grads, active.generator_opt,
               config.lr_g);
}

std::vector<double> GanCutGradient(const ActiveState& active,
                                   std::span<const double> y_tilde) {
  const std::size_t n = y_tilde.size();
  auto g_fwd = nn::Forward(active.generator, Matrix::Column(y_tilde));
  auto d_fwd = nn::Forward(active.discriminator, g_fwd.output);
  const auto d_back = nn::Backward(active.discriminator, d_fwd.cache,
                                   Matrix(n, 1, -1.0 / static_cast<double>(n)));
  const auto g_back =
      nn::Backward(active.generator, g_fwd.cache, d_back.input_grad);
  return Flatten(g_back.input_grad);
}

std::vector<double> CutGradient(std::span<const double> grad_gan,
                                std::span<const double> grad_penalty,
                                double gamma) {
  if (grad_gan.size() != grad_penalty.size()) {
    throw ShapeError("cut gradient: component lengths differ");
  }
  std::vector<double> out = nn::L2Normalize(grad_gan);
  const std::vector<double> pen = nn::L2Normalize(grad_penalty);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += gamma * pen[i];
  return out;
}

TrainResult Train(protocol::SplitSession& session, ActiveState& active,
                  const TrainConfig& config) {
  return detail::RunSplitTraining(Method::kGafm, session, active, config);
}

std::vector<double> Predict(const protocol::SplitSession& session,
                            const ActiveState& active, const Matrix& features) {
  std::vector<double> out = Generate(active.generator, session.CutValues(features));
  if (active.flip_scores) {
    for (double& v : out) v = 1.0 - v;
  }
  return out;
}

}  // namespace splitleak::gafm

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

// Small dense multilayer perceptrons: forward/backward passes, Adam, weight
// clipping and L2 normalization. Everything runs in double precision.

#ifndef SPLITLEAK_NN_H_
#define SPLITLEAK_NN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "splitleak/matrix.h"
#include "splitleak/random.h"

namespace splitleak::nn {

enum class Activation { kLeakyRelu, kSigmoid, kIdentity };

inline constexpr double kDefaultLeakySlope = 0.01;

// One affine map followed by an elementwise activation. `weights` is
// in_dim x out_dim so a batch (rows = examples) maps as X * W + b.
struct DenseLayer {
  Matrix weights;
  std::vector<double> bias;
  Activation activation = Activation::kIdentity;

  std::size_t in_dim() const { return weights.rows(); }
  std::size_t out_dim() const { return weights.cols(); }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct MlpParams {
  std::vector<DenseLayer> layers;
  double leaky_slope = kDefaultLeakySlope;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;
  // Throws ShapeError if consecutive layers do not chain.
  void Validate() const;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

struct LayerSpec {
  std::size_t width;
  Activation activation;
};

// Glorot-uniform weights, zero biases.
MlpParams MakeMlp(std::size_t input_dim, std::span<const LayerSpec> layers,
                  Rng& rng, double leaky_slope = kDefaultLeakySlope);

struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre;   // per layer, before activation
  std::vector<Matrix> post;  // per layer, after activation
};

struct ForwardResult {
  Matrix output;
  ForwardCache cache;
};

// Same nesting as MlpParams; used for gradients and Adam moments.
struct LayerTensor {
  Matrix weights;
  std::vector<double> bias;
};
using ParamTensors = std::vector<LayerTensor>;

ParamTensors ZerosLike(const MlpParams& params);

struct BackwardResult {
  ParamTensors param_grads;
  Matrix input_grad;
};

ForwardResult Forward(const MlpParams& params, const Matrix& input);

// Output only; no cache is kept.
Matrix Predict(const MlpParams& params, const Matrix& input);

// `upstream` is dL/d(output) for the cached batch.
BackwardResult Backward(const MlpParams& params, const ForwardCache& cache,
                        const Matrix& upstream);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  ParamTensors first_moment;
  ParamTensors second_moment;
  std::uint64_t step = 0;
  AdamConfig config;

  static AdamState For(const MlpParams& params, AdamConfig config = {});
};

// One bias-corrected Adam descent step. Throws NumericError (leaving params
// and state untouched) if any gradient entry is non-finite.
void AdamStep(MlpParams& params, const ParamTensors& grads, AdamState& state,
              double lr);

// Clamps every weight and bias into [-c, c].
void ClipWeights(MlpParams& params, double c);

inline constexpr double kNormTolerance = 1e-12;

// v / ||v||_2, or zeros when ||v||_2 <= kNormTolerance.
std::vector<double> L2Normalize(std::span<const double> v);

}  // namespace splitleak::nn

#endif  // SPLITLEAK_NN_H_

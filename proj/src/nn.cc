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

#include "splitleak/nn.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "splitleak/errors.h"

namespace splitleak::nn {
namespace {

double Activate(Activation a, double x, double slope) {
  switch (a) {
    case Activation::kLeakyRelu:
      return x > 0.0 ? x : slope * x;
    case Activation::kSigmoid:
      // Split on sign so exp never overflows.
      if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
      {
        const double e = std::exp(x);
        return e / (1.0 + e);
      }
    case Activation::kIdentity:
      return x;
  }
  return x;
}

double ActivationDerivative(Activation a, double pre, double post,
                            double slope) {
  switch (a) {
    case Activation::kLeakyRelu:
      return pre > 0.0 ? 1.0 : slope;
    case Activation::kSigmoid:
      return post * (1.0 - post);
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

std::string Dims(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

std::size_t MlpParams::input_dim() const {
  return layers.empty() ? 0 : layers.front().in_dim();
}

std::size_t MlpParams::output_dim() const {
  return layers.empty() ? 0 : layers.back().out_dim();
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weights.size() + l.bias.size();
  return n;
}

void MlpParams::Validate() const {
  if (layers.empty()) throw ShapeError("MLP has no layers");
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& l = layers[k];
    if (l.bias.size() != l.out_dim()) {
      throw ShapeError("layer " + std::to_string(k) + " bias length " +
                       std::to_string(l.bias.size()) + " != width " +
                       std::to_string(l.out_dim()));
    }
    if (k > 0 && layers[k - 1].out_dim() != l.in_dim()) {
      throw ShapeError("layer " + std::to_string(k) + " expects input width " +
                       std::to_string(l.in_dim()) + " but layer " +
                       std::to_string(k - 1) + " emits " +
                       std::to_string(layers[k - 1].out_dim()));
    }
  }
}

MlpParams MakeMlp(std::size_t input_dim, std::span<const LayerSpec> layers,
                  Rng& rng, double leaky_slope) {
  MlpParams params;
  params.leaky_slope = leaky_slope;
  std::size_t fan_in = input_dim;
  for (const LayerSpec& spec : layers) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(fan_in + spec.width));
    std::uniform_real_distribution<double> dist(-bound, bound);
    DenseLayer layer;
    layer.weights = Matrix(fan_in, spec.width);
    for (double& w : layer.weights.values()) w = dist(rng);
    layer.bias.assign(spec.width, 0.0);
    layer.activation = spec.activation;
    params.layers.push_back(std::move(layer));
    fan_in = spec.width;
  }
  params.Validate();
  return params;
}

ParamTensors ZerosLike(const MlpParams& params) {
  ParamTensors out;
  out.reserve(params.layers.size());
  for (const auto& l : params.layers) {
    out.push_back({Matrix(l.weights.rows(), l.weights.cols()),
                   std::vector<double>(l.bias.size(), 0.0)});
  }
  return out;
}

ForwardResult Forward(const MlpParams& params, const Matrix& input) {
  if (params.layers.empty()) throw ShapeError("MLP has no layers");
  if (input.cols() != params.input_dim()) {
    throw ShapeError("input " + Dims(input) + " does not match MLP input dim " +
                     std::to_string(params.input_dim()));
  }
  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.input = input;
  cache.pre.reserve(params.layers.size());
  cache.post.reserve(params.layers.size());

  const std::size_t n = input.rows();
  const Matrix* x = &cache.input;
  for (const DenseLayer& layer : params.layers) {
    const std::size_t in = layer.in_dim();
    const std::size_t out = layer.out_dim();
    Matrix pre(n, out);
    for (std::size_t r = 0; r < n; ++r) {
      auto dst = pre.row(r);
      std::ranges::copy(layer.bias, dst.begin());
      const auto src = x->row(r);
      for (std::size_t k = 0; k < in; ++k) {
        const double xv = src[k];
        if (xv == 0.0) continue;
        const auto w = layer.weights.row(k);
        for (std::size_t j = 0; j < out; ++j) dst[j] += xv * w[j];
      }
    }
    Matrix post(n, out);
    auto pv = pre.values();
    auto qv = post.values();
    for (std::size_t i = 0; i < pv.size(); ++i) {
      qv[i] = Activate(layer.activation, pv[i], params.leaky_slope);
    }
    cache.pre.push_back(std::move(pre));
    cache.post.push_back(std::move(post));
    x = &cache.post.back();
  }
  result.output = cache.post.back();
  return result;
}

Matrix Predict(const MlpParams& params, const Matrix& input) {
  return Forward(params, input).output;
}

BackwardResult Backward(const MlpParams& params, const ForwardCache& cache,
                        const Matrix& upstream) {
  if (cache.post.size() != params.layers.size() ||
      cache.pre.size() != params.layers.size()) {
    throw ShapeError("forward cache does not belong to this MLP");
  }
  const Matrix& out = cache.post.back();
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols()) {
    throw ShapeError("upstream " + Dims(upstream) + " != output " + Dims(out));
  }

  BackwardResult result;
  result.param_grads = ZerosLike(params);
  const std::size_t n = upstream.rows();
  Matrix delta = upstream;

  for (std::size_t li = params.layers.size(); li-- > 0;) {
    const DenseLayer& layer = params.layers[li];
    const Matrix& pre = cache.pre[li];
    const Matrix& post = cache.post[li];
    const Matrix& x = li == 0 ? cache.input : cache.post[li - 1];
    const std::size_t in = layer.in_dim();
    const std::size_t width = layer.out_dim();

    auto dv = delta.values();
    const auto pv = pre.values();
    const auto qv = post.values();
    for (std::size_t i = 0; i < dv.size(); ++i) {
      dv[i] *= ActivationDerivative(layer.activation, pv[i], qv[i],
                                    params.leaky_slope);
    }

    LayerTensor& g = result.param_grads[li];
    for (std::size_t r = 0; r < n; ++r) {
      const auto d = delta.row(r);
      const auto xr = x.row(r);
      for (std::size_t j = 0; j < width; ++j) g.bias[j] += d[j];
      for (std::size_t k = 0; k < in; ++k) {
        const double xv = xr[k];
        if (xv == 0.0) continue;
        auto gw = g.weights.row(k);
        for (std::size_t j = 0; j < width; ++j) gw[j] += xv * d[j];
      }
    }

    Matrix next(n, in);
    for (std::size_t r = 0; r < n; ++r) {
      const auto d = delta.row(r);
      auto dst = next.row(r);
      for (std::size_t k = 0; k < in; ++k) {
        const auto w = layer.weights.row(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < width; ++j) acc += w[j] * d[j];
        dst[k] = acc;
      }
    }
    delta = std::move(next);
  }
  result.input_grad = std::move(delta);
  return result;
}

AdamState AdamState::For(const MlpParams& params, AdamConfig config) {
  AdamState s;
  s.first_moment = ZerosLike(params);
  s.second_moment = ZerosLike(params);
  s.config = config;
  return s;
}

void AdamStep(MlpParams& params, const ParamTensors& grads, AdamState& state,
              double lr) {
  if (!(lr > 0.0)) throw NumericError("learning rate must be positive");
  if (grads.size() != params.layers.size() ||
      state.first_moment.size() != params.layers.size() ||
      state.second_moment.size() != params.layers.size()) {
    throw ShapeError("Adam: gradient/state layer count mismatch");
  }
  for (std::size_t li = 0; li < grads.size(); ++li) {
    const auto& l = params.layers[li];
    const auto& g = grads[li];
    if (g.weights.rows() != l.weights.rows() ||
        g.weights.cols() != l.weights.cols() ||
        g.bias.size() != l.bias.size()) {
      throw ShapeError("Adam: gradient shape mismatch at layer " +
                       std::to_string(li));
    }
    if (!g.weights.AllFinite() ||
        !std::ranges::all_of(g.bias, [](double v) { return std::isfinite(v); })) {
      throw NumericError("Adam: non-finite gradient at layer " +
                         std::to_string(li));
    }
  }

  const AdamConfig& c = state.config;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);

  auto update = [&](std::span<double> p, std::span<const double> g,
                    std::span<double> m, std::span<double> v) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  };
  for (std::size_t li = 0; li < grads.size(); ++li) {
    auto& l = params.layers[li];
    update(l.weights.values(), grads[li].weights.values(),
           state.first_moment[li].weights.values(),
           state.second_moment[li].weights.values());
    update(l.bias, grads[li].bias, state.first_moment[li].bias,
           state.second_moment[li].bias);
  }
}

void ClipWeights(MlpParams& params, double c) {
  for (auto& l : params.layers) {
    for (double& w : l.weights.values()) w = std::clamp(w, -c, c);
    for (double& b : l.bias) b = std::clamp(b, -c, c);
  }
}

std::vector<double> L2Normalize(std::span<const double> v) {
  std::vector<double> out(v.size(), 0.0);
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return out;
  // Pre-scaling by the max entry keeps the sum of squares away from
  // overflow and underflow.
  double sq = 0.0;
  for (double x : v) sq += (x / scale) * (x / scale);
  const double unit_norm = std::sqrt(sq);
  if (scale * unit_norm <= kNormTolerance) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] / scale) / unit_norm;
  return out;
}

}  // namespace splitleak::nn

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

#include "splitleak/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "splitleak/errors.h"

namespace splitleak::metrics {
namespace {

double Median(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<long>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

std::vector<double> Margins(std::span<const double> g, double center0,
                            double center1) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = std::abs(g[i] - center0) - std::abs(g[i] - center1);
  }
  return out;
}

std::vector<int> Assign(std::span<const double> g, double center0,
                        double center1) {
  std::vector<int> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = std::abs(g[i] - center1) <= std::abs(g[i] - center0) ? 1 : 0;
  }
  return out;
}

struct Histograms {
  std::vector<double> p;
  std::vector<double> q;
};

Histograms BuildHistograms(std::span<const double> a, std::span<const double> b,
                           std::size_t bins) {
  if (a.empty() || b.empty()) {
    throw MetricError("histogram distance needs two nonempty samples");
  }
  if (bins < 2) throw MetricError("histogram needs at least 2 bins");
  double lo = a.front();
  double hi = a.front();
  for (auto s : {a, b}) {
    for (double x : s) {
      if (!std::isfinite(x)) throw MetricError("non-finite sample value");
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  Histograms h{std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0)};
  const double width = hi - lo;
  auto bin_of = [&](double x) -> std::size_t {
    if (!(width > 0.0)) return 0;
    const auto k = static_cast<std::size_t>((x - lo) / width *
                                            static_cast<double>(bins));
    return std::min(k, bins - 1);
  };
  for (double x : a) h.p[bin_of(x)] += 1.0;
  for (double x : b) h.q[bin_of(x)] += 1.0;
  for (double& v : h.p) v /= static_cast<double>(a.size());
  for (double& v : h.q) v /= static_cast<double>(b.size());
  return h;
}

}  // namespace

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw MetricError("AUC: scores and labels differ in length");
  }
  if (!std::ranges::all_of(scores, [](double s) { return !std::isnan(s); })) {
    throw MetricError("AUC: NaN score");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::ranges::sort(order, [&](std::size_t i, std::size_t j) {
    return scores[i] < scores[j];
  });

  // Sum of 2 * midrank over positives keeps everything integral.
  double twice_rank_sum = 0.0;
  std::size_t positives = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double twice_midrank = static_cast<double>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) {
        twice_rank_sum += twice_midrank;
        ++positives;
      }
    }
    i = j + 1;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw MetricError("AUC undefined: only one class present");
  }
  const double np = static_cast<double>(positives);
  const double twice_u = twice_rank_sum - np * (np + 1.0);
  return twice_u / (2.0 * np * static_cast<double>(negatives));
}

double LeakAuc(std::span<const double> scores, std::span<const int> labels) {
  const double auc = Auc(scores, labels);
  return std::max(auc, 1.0 - auc);
}

std::vector<double> NormAttack(std::span<const double> grads) {
  std::vector<double> out(grads.size());
  std::ranges::transform(grads, out.begin(),
                         [](double g) { return std::abs(g); });
  return out;
}

GradientAudit GradientAudit::Build(std::span<const double> grads,
                                   std::span<const int> labels) {
  if (grads.size() != labels.size()) {
    throw MetricError("audit: gradients and labels differ in length");
  }
  GradientAudit a;
  a.grads.assign(grads.begin(), grads.end());
  a.labels.assign(labels.begin(), labels.end());
  std::vector<double> g0, g1;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    (labels[i] == 1 ? g1 : g0).push_back(grads[i]);
  }
  if (g0.empty() || g1.empty()) {
    throw MetricError("audit: both classes must be present");
  }
  a.mean0 = std::accumulate(g0.begin(), g0.end(), 0.0) /
            static_cast<double>(g0.size());
  a.mean1 = std::accumulate(g1.begin(), g1.end(), 0.0) /
            static_cast<double>(g1.size());
  a.median0 = Median(std::move(g0));
  a.median1 = Median(std::move(g1));
  return a;
}

std::vector<double> MeanAttack(const GradientAudit& audit) {
  return Margins(audit.grads, audit.mean0, audit.mean1);
}

std::vector<double> MedianAttack(const GradientAudit& audit) {
  return Margins(audit.grads, audit.median0, audit.median1);
}

std::vector<int> MeanAttackAssign(const GradientAudit& audit) {
  return Assign(audit.grads, audit.mean0, audit.mean1);
}

std::vector<int> MedianAttackAssign(const GradientAudit& audit) {
  return Assign(audit.grads, audit.median0, audit.median1);
}

double TvdHist(std::span<const double> a, std::span<const double> b,
               std::size_t bins) {
  const Histograms h = BuildHistograms(a, b, bins);
  double sum = 0.0;
  for (std::size_t k = 0; k < bins; ++k) sum += std::abs(h.p[k] - h.q[k]);
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double SymKlHist(std::span<const double> a, std::span<const double> b,
                 std::size_t bins, double smoothing) {
  if (!(smoothing > 0.0)) throw MetricError("smoothing must be positive");
  Histograms h = BuildHistograms(a, b, bins);
  const double total = 1.0 + smoothing * static_cast<double>(bins);
  double sum = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double p = (h.p[k] + smoothing) / total;
    const double q = (h.q[k] + smoothing) / total;
    sum += (p - q) * std::log(p / q);
  }
  return std::max(sum, 0.0);
}

double AucBound(double eps) {
  if (!(eps >= 0.0 && eps < 4.0)) {
    throw MetricError("AUC bound needs eps in [0, 4), got " +
                      std::to_string(eps));
  }
  return 0.5 + std::sqrt(eps) / 2.0 - eps / 8.0;
}

double AucBoundOrOne(double eps) { return eps < 4.0 ? AucBound(eps) : 1.0; }

DirectionReport ComputeDirectionReport(std::span<const CutRecord> records) {
  DirectionReport r;
  if (records.empty()) return r;
  for (const auto& rec : records) {
    if (!rec.grad_gan || !rec.grad_penalty) return r;
  }
  double n0 = 0.0, n1 = 0.0;
  for (const auto& rec : records) {
    if (rec.label == 1) {
      n1 += 1.0;
      r.gan_mean1 += *rec.grad_gan;
      r.penalty_mean1 += *rec.grad_penalty;
      r.total_mean1 += rec.grad_total;
    } else {
      n0 += 1.0;
      r.gan_mean0 += *rec.grad_gan;
      r.penalty_mean0 += *rec.grad_penalty;
      r.total_mean0 += rec.grad_total;
    }
  }
  if (n0 == 0.0 || n1 == 0.0) return r;
  r.applicable = true;
  r.gan_mean0 /= n0;
  r.penalty_mean0 /= n0;
  r.total_mean0 /= n0;
  r.gan_mean1 /= n1;
  r.penalty_mean1 /= n1;
  r.total_mean1 /= n1;
  r.gan_diff = r.gan_mean1 - r.gan_mean0;
  r.penalty_diff = r.penalty_mean1 - r.penalty_mean0;
  r.total_diff = r.total_mean1 - r.total_mean0;
  r.opposite = (r.gan_diff > 0.0 && r.penalty_diff < 0.0) ||
               (r.gan_diff < 0.0 && r.penalty_diff > 0.0);
  return r;
}

LeakReport ComputeLeakReport(std::span<const CutRecord> records,
                             std::size_t bins, double smoothing) {
  std::vector<double> grads;
  std::vector<int> labels;
  std::vector<double> g0, g1;
  grads.reserve(records.size());
  labels.reserve(records.size());
  for (const auto& rec : records) {
    grads.push_back(rec.grad_total);
    labels.push_back(rec.label);
    (rec.label == 1 ? g1 : g0).push_back(rec.grad_total);
  }
  const GradientAudit audit = GradientAudit::Build(grads, labels);
  LeakReport rep;
  rep.leak_norm = LeakAuc(NormAttack(grads), labels);
  rep.leak_mean = LeakAuc(MeanAttack(audit), labels);
  rep.leak_median = LeakAuc(MedianAttack(audit), labels);
  rep.tvd = TvdHist(g1, g0, bins);
  rep.sym_kl = SymKlHist(g1, g0, bins, smoothing);
  rep.bound = AucBoundOrOne(rep.sym_kl);
  rep.direction = ComputeDirectionReport(records);
  return rep;
}

}  // namespace splitleak::metrics

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

// Label-stealing attacks over per-example cut-layer gradients and the
// leakage measures used to score them.

#ifndef SPLITLEAK_METRICS_H_
#define SPLITLEAK_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "splitleak/records.h"

namespace splitleak::metrics {

// Mann-Whitney AUC: P(score of a random positive > score of a random
// negative), ties count one half. Throws MetricError unless both classes
// are present.
double Auc(std::span<const double> scores, std::span<const int> labels);

// max(AUC, 1 - AUC).
double LeakAuc(std::span<const double> scores, std::span<const int> labels);

// |g_i|: the scalar case of the gradient-norm attack.
std::vector<double> NormAttack(std::span<const double> grads);

// Gradients with their labels plus the class centers an attacker is assumed
// to know.
struct GradientAudit {
  std::vector<double> grads;
  std::vector<int> labels;
  double mean0 = 0.0;
  double mean1 = 0.0;
  double median0 = 0.0;
  double median1 = 0.0;

  // Throws MetricError if either class is empty or sizes differ.
  static GradientAudit Build(std::span<const double> grads,
                             std::span<const int> labels);
};

// Margin |g - mu0| - |g - mu1|: positive means nearer the class-1 center.
std::vector<double> MeanAttack(const GradientAudit& audit);
std::vector<double> MedianAttack(const GradientAudit& audit);

// Hard nearest-center labels; a tie goes to class 1.
std::vector<int> MeanAttackAssign(const GradientAudit& audit);
std::vector<int> MedianAttackAssign(const GradientAudit& audit);

inline constexpr std::size_t kDefaultBins = 50;
inline constexpr double kDefaultSmoothing = 1e-6;

// Total variation between the histograms of two samples on a shared
// equal-width binning of their pooled range.
double TvdHist(std::span<const double> a, std::span<const double> b,
               std::size_t bins = kDefaultBins);

// KL(p||q) + KL(q||p) of the same histograms after adding `smoothing` to
// every bin mass and renormalizing.
double SymKlHist(std::span<const double> a, std::span<const double> b,
                 std::size_t bins = kDefaultBins,
                 double smoothing = kDefaultSmoothing);

// Largest AUC any attack can reach when the symmetric KL between the two
// class-conditional gradient laws is at most eps, eps in [0, 4).
double AucBound(double eps);

// AucBound, but 1 (no constraint) for eps >= 4.
double AucBoundOrOne(double eps);

// Class-mean differences (class 1 minus class 0) of the two gradient
// components and their total.
struct DirectionReport {
  bool applicable = false;
  double gan_mean0 = 0.0, gan_mean1 = 0.0;
  double penalty_mean0 = 0.0, penalty_mean1 = 0.0;
  double total_mean0 = 0.0, total_mean1 = 0.0;
  double gan_diff = 0.0;
  double penalty_diff = 0.0;
  double total_diff = 0.0;
  // The two component differences have strictly opposite signs.
  bool opposite = false;
};

// Not applicable unless every record carries both components.
DirectionReport ComputeDirectionReport(std::span<const CutRecord> records);

struct LeakReport {
  double leak_norm = 0.0;
  double leak_mean = 0.0;
  double leak_median = 0.0;
  double tvd = 0.0;
  double sym_kl = 0.0;
  double bound = 0.0;  // AucBoundOrOne(sym_kl)
  DirectionReport direction;
};

LeakReport ComputeLeakReport(std::span<const CutRecord> records,
                             std::size_t bins = kDefaultBins,
                             double smoothing = kDefaultSmoothing);

}  // namespace splitleak::metrics

#endif  // SPLITLEAK_METRICS_H_

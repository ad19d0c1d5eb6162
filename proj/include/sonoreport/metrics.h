// Copyright 2026 The SonoReport Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SONOREPORT_METRICS_H_
#define SONOREPORT_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace sonoreport {

struct FinalReport;

inline constexpr double kDefaultBeta = 0.9;

struct ConfusionMatrix {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  int64_t tn = 0;

  int64_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;
};

absl::StatusOr<ConfusionMatrix> ComputeConfusionMatrix(
    std::span<const int> predictions, std::span<const int> labels,
    int positive);

// A metric whose denominator is zero is left empty: "undefined" is not the
// same thing as 0.
struct MetricSet {
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_beta;
  double beta = kDefaultBeta;
};

// (1 + b^2) P R / (b^2 P + R); empty when the denominator vanishes.
std::optional<double> FBeta(double precision, double recall, double beta);

absl::StatusOr<MetricSet> ClassificationMetrics(const ConfusionMatrix& cm,
                                                double beta = kDefaultBeta);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  // From (0, 0) to (1, 1), one point per distinct score threshold.
  std::vector<RocPoint> points;
  double auc = 0.0;
  int64_t positives = 0;
  int64_t negatives = 0;
};

// Labels are 1 (positive) or 0. The area is accumulated in integer units of
// 1 / (2 P N), which makes it identical to the tie-aware pair count.
absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> scores,
                                    std::span<const int> labels);

// Value in [0, 1] with its sample count.
class WeightedEntry {
 public:
  static absl::StatusOr<WeightedEntry> Create(double value, int64_t n);
  double value() const { return value_; }
  int64_t n() const { return n_; }

 private:
  WeightedEntry(double value, int64_t n) : value_(value), n_(n) {}
  double value_;
  int64_t n_;
};

// sum(value_i n_i) / sum(n_i).
absl::StatusOr<double> WeightedAverage(std::span<const WeightedEntry> entries);

// Fraction of auto-filled descriptor fields the reviewer left unchanged,
// pooled over every field of every report. Only finalized benign-auto
// reports with a benign verdict are eligible.
absl::StatusOr<double> EfficiencyIndex(std::span<const FinalReport> reports);

// Per-field unchanged rates with field counts, in descriptor order; the
// pooled weighted average of these equals EfficiencyIndex.
absl::StatusOr<std::vector<std::pair<std::string, WeightedEntry>>>
EfficiencyByField(std::span<const FinalReport> reports);

// One row of the evaluation table.
struct MetricsRow {
  std::string model;
  std::string feature;
  int64_t n = 0;
  MetricSet metrics;
  std::optional<double> auc;
};

// Tab-separated, header first: model feature n accuracy precision recall
// f_beta auc. Undefined values print as "undefined".
std::string FormatMetricsTable(std::span<const MetricsRow> rows);

// Tab-separated model, feature, fpr, tpr rows (with header).
std::string FormatRocHeader();
std::string FormatRocRows(const std::string& model, const std::string& feature,
                          const RocCurve& curve);

}  // namespace sonoreport

#endif  // SONOREPORT_METRICS_H_

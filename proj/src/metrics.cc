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

#include "sonoreport/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "sonoreport/report.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

std::optional<double> Ratio(int64_t num, int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string FormatValue(const std::optional<double>& value) {
  if (!value) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *value);
  return buf;
}

bool IsEfficiencyEligible(const FinalReport& report) {
  return report.preliminary.route == Route::kBenignAuto &&
         report.verdict == Verdict::kBenign;
}

}  // namespace

absl::StatusOr<ConfusionMatrix> ComputeConfusionMatrix(
    std::span<const int> predictions, std::span<const int> labels,
    int positive) {
  if (predictions.size() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(predictions.size(), " predictions but ", labels.size(),
                     " labels"));
  }
  if (labels.empty()) {
    return absl::InvalidArgumentError("confusion matrix of an empty set");
  }
  ConfusionMatrix cm;
  for (size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = predictions[i] == positive;
    const bool actual = labels[i] == positive;
    if (predicted && actual) {
      ++cm.tp;
    } else if (predicted) {
      ++cm.fp;
    } else if (actual) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

std::optional<double> FBeta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double den = b2 * precision + recall;
  if (den == 0.0) return std::nullopt;
  return (1.0 + b2) * precision * recall / den;
}

absl::StatusOr<MetricSet> ClassificationMetrics(const ConfusionMatrix& cm,
                                                double beta) {
  if (!(beta > 0.0 && std::isfinite(beta))) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must be positive, got ", beta));
  }
  if (cm.tp < 0 || cm.fp < 0 || cm.fn < 0 || cm.tn < 0) {
    return absl::InvalidArgumentError("negative confusion count");
  }
  if (cm.total() == 0) {
    return absl::InvalidArgumentError("empty confusion matrix");
  }
  MetricSet m;
  m.beta = beta;
  m.accuracy = Ratio(cm.tp + cm.tn, cm.total());
  m.precision = Ratio(cm.tp, cm.tp + cm.fp);
  m.recall = Ratio(cm.tp, cm.tp + cm.fn);
  if (m.precision && m.recall) m.f_beta = FBeta(*m.precision, *m.recall, beta);
  return m;
}

absl::StatusOr<RocCurve> ComputeRoc(std::span<const double> scores,
                                    std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError("scores and labels differ in length");
  }
  RocCurve curve;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      return absl::InvalidArgumentError("non-finite score");
    }
    if (labels[i] == 1) {
      ++curve.positives;
    } else if (labels[i] == 0) {
      ++curve.negatives;
    } else {
      return absl::InvalidArgumentError("ROC labels must be 0 or 1");
    }
  }
  if (curve.positives == 0 || curve.negatives == 0) {
    return absl::InvalidArgumentError(
        "AUC undefined: labels contain a single class");
  }

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  const double p = static_cast<double>(curve.positives);
  const double n = static_cast<double>(curve.negatives);
  curve.points.push_back({0.0, 0.0});
  int64_t tp = 0;
  int64_t fp = 0;
  // Twice the area, in units of one positive-negative pair.
  int64_t area2 = 0;
  for (size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    const int64_t tp_before = tp;
    const int64_t fp_before = fp;
    for (; k < order.size() && scores[order[k]] == threshold; ++k) {
      (labels[order[k]] == 1 ? tp : fp) += 1;
    }
    area2 += (fp - fp_before) * (tp + tp_before);
    curve.points.push_back({static_cast<double>(fp) / n,
                            static_cast<double>(tp) / p});
  }
  curve.auc = static_cast<double>(area2) /
              (2.0 * static_cast<double>(curve.positives) *
               static_cast<double>(curve.negatives));
  return curve;
}

absl::StatusOr<WeightedEntry> WeightedEntry::Create(double value, int64_t n) {
  if (!(value >= 0.0 && value <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("weighted entry value ", value, " outside [0, 1]"));
  }
  if (n <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("weighted entry count must be positive, got ", n));
  }
  return WeightedEntry(value, n);
}

absl::StatusOr<double> WeightedAverage(
    std::span<const WeightedEntry> entries) {
  if (entries.empty()) {
    return absl::InvalidArgumentError("weighted average of nothing");
  }
  double num = 0.0;
  double den = 0.0;
  for (const WeightedEntry& e : entries) {
    num += e.value() * static_cast<double>(e.n());
    den += static_cast<double>(e.n());
  }
  return num / den;
}

namespace {

struct FieldTally {
  std::array<int64_t, kAllDescriptorFields.size()> total{};
  std::array<int64_t, kAllDescriptorFields.size()> kept{};
};

absl::StatusOr<FieldTally> TallyAutoFilledFields(
    std::span<const FinalReport> reports) {
  if (reports.empty()) {
    return absl::InvalidArgumentError("efficiency index of no reports");
  }
  FieldTally tally;
  for (const FinalReport& report : reports) {
    if (!IsEfficiencyEligible(report)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "report for case ", report.preliminary.case_id,
          " is not a finalized benign-auto report with a benign verdict"));
    }
    const auto& before = report.preliminary.fields;
    if (before.size() != report.fields.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "report for case ", report.preliminary.case_id,
          " has mismatched preliminary and final fields"));
    }
    for (size_t i = 0; i < before.size(); ++i) {
      if (before[i].provenance != Provenance::kPredicted &&
          before[i].provenance != Provenance::kDefault) {
        continue;
      }
      const size_t slot = static_cast<size_t>(before[i].field);
      ++tally.total[slot];
      if (report.fields[i].value == before[i].value) ++tally.kept[slot];
    }
  }
  return tally;
}

}  // namespace

absl::StatusOr<std::vector<std::pair<std::string, WeightedEntry>>>
EfficiencyByField(std::span<const FinalReport> reports) {
  ASSIGN_OR_RETURN(FieldTally tally, TallyAutoFilledFields(reports));
  std::vector<std::pair<std::string, WeightedEntry>> out;
  for (DescriptorField field : kAllDescriptorFields) {
    const size_t slot = static_cast<size_t>(field);
    if (tally.total[slot] == 0) continue;
    ASSIGN_OR_RETURN(
        WeightedEntry entry,
        WeightedEntry::Create(static_cast<double>(tally.kept[slot]) /
                                  static_cast<double>(tally.total[slot]),
                              tally.total[slot]));
    out.emplace_back(std::string(FieldName(field)), entry);
  }
  return out;
}

absl::StatusOr<double> EfficiencyIndex(std::span<const FinalReport> reports) {
  ASSIGN_OR_RETURN(FieldTally tally, TallyAutoFilledFields(reports));
  int64_t total = 0;
  int64_t kept = 0;
  for (size_t slot = 0; slot < tally.total.size(); ++slot) {
    total += tally.total[slot];
    kept += tally.kept[slot];
  }
  if (total == 0) {
    return absl::InvalidArgumentError("reports carry no auto-filled fields");
  }
  return static_cast<double>(kept) / static_cast<double>(total);
}

std::string FormatMetricsTable(std::span<const MetricsRow> rows) {
  std::string out =
      "model\tfeature\tn\taccuracy\tprecision\trecall\tf_beta\tauc\n";
  for (const MetricsRow& row : rows) {
    absl::StrAppend(&out, row.model, "\t", row.feature, "\t", row.n, "\t",
                    FormatValue(row.metrics.accuracy), "\t",
                    FormatValue(row.metrics.precision), "\t",
                    FormatValue(row.metrics.recall), "\t",
                    FormatValue(row.metrics.f_beta), "\t",
                    FormatValue(row.auc), "\n");
  }
  return out;
}

std::string FormatRocHeader() { return "model\tfeature\tfpr\ttpr\n"; }

std::string FormatRocRows(const std::string& model, const std::string& feature,
                          const RocCurve& curve) {
  std::string out;
  for (const RocPoint& point : curve.points) {
    absl::StrAppend(&out, model, "\t", feature, "\t",
                    FormatValue(point.fpr), "\t", FormatValue(point.tpr),
                    "\n");
  }
  return out;
}

}  // namespace sonoreport

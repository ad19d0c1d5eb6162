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

#include "sonoreport/evaluation.h"

#include <array>
#include <cstdio>
#include <map>

#include "absl/strings/str_cat.h"
#include "sonoreport/fusion.h"
#include "sonoreport/lexicon.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

constexpr double kDescriptorThreshold = 0.5;

struct BinaryOutcomes {
  std::vector<int> labels;
  std::vector<int> predictions;
  std::vector<double> scores;

  void Add(int label, double score, double threshold) {
    labels.push_back(label);
    predictions.push_back(score >= threshold ? 1 : 0);
    scores.push_back(score);
  }
};

absl::StatusOr<MetricsRow> BinaryRow(const std::string& model,
                                     const std::string& feature,
                                     const BinaryOutcomes& outcomes,
                                     double beta,
                                     std::vector<RocExport>* rocs) {
  MetricsRow row;
  row.model = model;
  row.feature = feature;
  row.n = static_cast<int64_t>(outcomes.labels.size());
  ASSIGN_OR_RETURN(ConfusionMatrix cm,
                   ComputeConfusionMatrix(outcomes.predictions,
                                          outcomes.labels, 1));
  ASSIGN_OR_RETURN(row.metrics, ClassificationMetrics(cm, beta));
  if (cm.tp + cm.fn > 0 && cm.fp + cm.tn > 0) {
    ASSIGN_OR_RETURN(RocCurve curve,
                     ComputeRoc(outcomes.scores, outcomes.labels));
    row.auc = curve.auc;
    if (rocs != nullptr) rocs->push_back({model, feature, std::move(curve)});
  }
  return row;
}

absl::Status NoRecords(Split split, Target target) {
  return absl::InvalidArgumentError(
      absl::StrCat("no ", SplitName(split), " records labeled for ",
                   TargetName(target)));
}

absl::StatusOr<std::vector<MetricsRow>> EvaluateBinary(
    const SvmModel& model, Target target,
    std::span<const DatasetRecord> records, Split split, double threshold,
    double beta, std::vector<RocExport>* rocs) {
  const auto selected = SelectLabeled(records, split, target);
  if (selected.empty()) return NoRecords(split, target);
  const double cut =
      target == Target::kMalignancy ? threshold : kDescriptorThreshold;
  BinaryOutcomes outcomes;
  for (const DatasetRecord* r : selected) {
    ASSIGN_OR_RETURN(double score, PredictScore(model, r->features.values));
    outcomes.Add(*TargetClassId(r->labels, target), score, cut);
  }
  ASSIGN_OR_RETURN(MetricsRow row,
                   BinaryRow("svm", std::string(TargetName(target)), outcomes,
                             beta, rocs));
  return std::vector<MetricsRow>{std::move(row)};
}

absl::StatusOr<std::vector<MetricsRow>> EvaluateFused(
    const OvrModel& model, std::span<const DatasetRecord> records, Split split,
    double beta, std::vector<RocExport>* rocs) {
  std::vector<MetricsRow> rows;

  const auto fused = SelectLabeled(records, split, Target::kFused);
  if (fused.empty()) return NoRecords(split, Target::kFused);
  int64_t correct = 0;
  for (const DatasetRecord* r : fused) {
    ASSIGN_OR_RETURN(FusedPrediction p, PredictFused(model, r->features.values));
    if (p.fused.index() == *TargetClassId(r->labels, Target::kFused)) ++correct;
  }
  MetricsRow fused_row;
  fused_row.model = "fusion";
  fused_row.feature = std::string(TargetName(Target::kFused));
  fused_row.n = static_cast<int64_t>(fused.size());
  fused_row.metrics.beta = beta;
  fused_row.metrics.accuracy =
      static_cast<double>(correct) / static_cast<double>(fused.size());
  rows.push_back(std::move(fused_row));

  // Marginals: the positive-class score is the summed mass of the fused
  // classes that carry it.
  for (Target target : {Target::kInternalEcho, Target::kPosteriorAcoustic}) {
    const auto selected = SelectLabeled(records, split, target);
    if (selected.empty()) continue;
    BinaryOutcomes outcomes;
    for (const DatasetRecord* r : selected) {
      ASSIGN_OR_RETURN(FusedPrediction p,
                       PredictFused(model, r->features.values));
      double score = 0.0;
      for (FusedClass c : FusedClass::All()) {
        const bool positive =
            target == Target::kInternalEcho
                ? c.internal_echo() == InternalEcho::kAnechoic
                : c.posterior() == PosteriorAcoustic::kNoPosteriorFeatures;
        if (positive) score += p.scores[c.index()];
      }
      const bool predicted_positive =
          target == Target::kInternalEcho
              ? p.internal_echo == InternalEcho::kAnechoic
              : p.posterior == PosteriorAcoustic::kNoPosteriorFeatures;
      outcomes.labels.push_back(*TargetClassId(r->labels, target));
      outcomes.predictions.push_back(predicted_positive ? 1 : 0);
      outcomes.scores.push_back(score);
    }
    ASSIGN_OR_RETURN(MetricsRow row,
                     BinaryRow("fusion", std::string(TargetName(target)),
                               outcomes, beta, rocs));
    rows.push_back(std::move(row));
  }
  return rows;
}

DescriptorValue TruthValue(const DatasetLabels& labels, DescriptorField field) {
  switch (field) {
    case DescriptorField::kShape:
      return *labels.shape;
    case DescriptorField::kInternalEcho:
      return *labels.internal_echo;
    case DescriptorField::kPosteriorAcoustic:
      return *labels.posterior;
    case DescriptorField::kBoundary:
      return Boundary::kAbrupt;
    case DescriptorField::kOrientation:
      return Orientation::kParallel;
    case DescriptorField::kMargin:
      return Margin::kCircumscribed;
  }
  return Boundary::kAbrupt;
}

}  // namespace

CaseRecord CaseFromDatasetRecord(const DatasetRecord& record) {
  CaseRecord out;
  out.case_id = record.case_id;
  out.features = record.features;
  out.triage = Triage::kLesion;
  return out;
}

absl::StatusOr<std::vector<MetricsRow>> EvaluateModel(
    const ModelArtifact& artifact, std::span<const DatasetRecord> records,
    Split split, double threshold, double beta, std::vector<RocExport>* rocs) {
  RETURN_IF_ERROR(ValidateThreshold(threshold));
  if (const auto* svm = std::get_if<SvmModel>(&artifact.model)) {
    return EvaluateBinary(*svm, artifact.target, records, split, threshold,
                          beta, rocs);
  }
  return EvaluateFused(std::get<OvrModel>(artifact.model), records, split,
                       beta, rocs);
}

absl::StatusOr<ScriptedReview> RunScriptedReview(
    const ModelSet& models, std::span<const DatasetRecord> records,
    Split split, double threshold) {
  ScriptedReview result;
  std::map<DescriptorField, int64_t> correct;
  for (const DatasetRecord& r : records) {
    const DatasetLabels& labels = r.labels;
    if (r.split != split || labels.malignancy != Malignancy::kBenign ||
        !labels.shape || !labels.internal_echo || !labels.posterior) {
      continue;
    }
    const CaseRecord record = CaseFromDatasetRecord(r);
    ASSIGN_OR_RETURN(PreliminaryReport prelim,
                     BuildPreliminary(models, record, threshold, std::nullopt,
                                      /*now_ms=*/0));
    if (prelim.route != Route::kBenignAuto) continue;

    ReviewSubmission submission;
    submission.verdict = Verdict::kBenign;
    submission.base_version = record.version;
    submission.reviewer_id = "scripted";
    for (const ReportField& f : prelim.fields) {
      const std::string truth(DescriptorTerm(TruthValue(labels, f.field)));
      if (f.value == truth) {
        ++correct[f.field];
      } else {
        submission.edits[std::string(FieldName(f.field))] = truth;
      }
    }
    ASSIGN_OR_RETURN(FinalReport final_report,
                     ApplyReview(prelim, submission, record.version));
    result.finals.push_back(std::move(final_report));
  }
  if (result.finals.empty()) {
    return absl::FailedPreconditionError(
        "no benign case was routed to the automatic description");
  }
  const int64_t n = static_cast<int64_t>(result.finals.size());
  std::vector<WeightedEntry> entries;
  for (DescriptorField field : kAllDescriptorFields) {
    ASSIGN_OR_RETURN(WeightedEntry entry,
                     WeightedEntry::Create(static_cast<double>(correct[field]) /
                                               static_cast<double>(n),
                                           n));
    result.field_accuracy.emplace_back(std::string(FieldName(field)), entry);
    entries.push_back(entry);
  }
  ASSIGN_OR_RETURN(result.weighted_accuracy, WeightedAverage(entries));
  ASSIGN_OR_RETURN(result.efficiency_index, EfficiencyIndex(result.finals));
  return result;
}

std::string FormatEfficiencyTable(
    std::span<const std::pair<std::string, WeightedEntry>> rows,
    double weighted_average) {
  std::string out = "field\tn\tunchanged_rate\n";
  int64_t total = 0;
  char buf[32];
  for (const auto& [name, entry] : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", entry.value());
    absl::StrAppend(&out, name, "\t", entry.n(), "\t", buf, "\n");
    total += entry.n();
  }
  std::snprintf(buf, sizeof(buf), "%.6f", weighted_average);
  absl::StrAppend(&out, "weighted_average\t", total, "\t", buf, "\n");
  return out;
}

}  // namespace sonoreport

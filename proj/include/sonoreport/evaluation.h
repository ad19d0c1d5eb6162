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

#ifndef SONOREPORT_EVALUATION_H_
#define SONOREPORT_EVALUATION_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "sonoreport/dataset.h"
#include "sonoreport/metrics.h"
#include "sonoreport/model_io.h"
#include "sonoreport/pipeline.h"

namespace sonoreport {

// A labeled dataset row as a case awaiting review (triage: lesion).
CaseRecord CaseFromDatasetRecord(const DatasetRecord& record);

struct RocExport {
  std::string model;
  std::string feature;
  RocCurve curve;
};

// Metrics of one model over the records labeled for its target. Binary
// models give one row ("svm", target); the fused model gives rows for the
// 3-class label and for the internal echo and posterior acoustic marginals
// read off it ("fusion", ...). Binary predictions use `threshold` for
// malignancy and 0.5 otherwise. ROC curves are appended to `rocs` when
// both classes are present.
absl::StatusOr<std::vector<MetricsRow>> EvaluateModel(
    const ModelArtifact& artifact, std::span<const DatasetRecord> records,
    Split split, double threshold, double beta, std::vector<RocExport>* rocs);

// Simulated reviewer: every benign test case that the pipeline routes to
// benign-auto is confirmed benign, editing exactly the predicted fields
// that disagree with the labels.
struct ScriptedReview {
  std::vector<FinalReport> finals;
  // Per-field prediction accuracy on the reviewed cases (fixed descriptors
  // count as correct), in descriptor order.
  std::vector<std::pair<std::string, WeightedEntry>> field_accuracy;
  double weighted_accuracy = 0.0;
  double efficiency_index = 0.0;
};

absl::StatusOr<ScriptedReview> RunScriptedReview(
    const ModelSet& models, std::span<const DatasetRecord> records,
    Split split, double threshold);

// Tab-separated: field, n, unchanged_rate, with a weighted_average row.
std::string FormatEfficiencyTable(
    std::span<const std::pair<std::string, WeightedEntry>> rows,
    double weighted_average);

}  // namespace sonoreport

#endif  // SONOREPORT_EVALUATION_H_

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

#ifndef SONOREPORT_DATASET_H_
#define SONOREPORT_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sonoreport/case_record.h"
#include "sonoreport/fused_class.h"
#include "sonoreport/lexicon.h"

namespace sonoreport {

enum class Split { kTrain, kValidation, kTest };
enum class Malignancy { kBenign, kMalignant };

absl::string_view SplitName(Split split);
absl::StatusOr<Split> ParseSplit(absl::string_view name);
absl::string_view MalignancyName(Malignancy m);
absl::StatusOr<Malignancy> ParseMalignancy(absl::string_view name);

struct DatasetLabels {
  std::optional<Malignancy> malignancy;
  std::optional<Shape> shape;
  std::optional<InternalEcho> internal_echo;
  std::optional<PosteriorAcoustic> posterior;

  // Empty when either half is missing or the pair is the forbidden 00.
  std::optional<FusedClass> fused() const;
  friend bool operator==(const DatasetLabels&, const DatasetLabels&) = default;
};

struct DatasetRecord {
  std::string case_id;
  FeatureVector features;
  DatasetLabels labels;
  Split split = Split::kTrain;
  // Provenance of the labels, e.g. a reviewing doctor's id or "synthetic".
  std::string source;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct RowDiagnostic {
  int64_t line = 0;
  std::string message;
};

struct LoadedDataset {
  std::vector<DatasetRecord> records;
  // Rows skipped individually (forbidden or contradictory fused labels).
  std::vector<RowDiagnostic> rejected;
  std::map<Split, int64_t> split_counts;
  size_t dimension = 0;
};

// Line-delimited JSON, one record per line:
//
//   {"case_id": "c1", "split": "train", "source": "doctor1",
//    "feature_source": "external_embedding", "features": [0.1, ...],
//    "labels": {"malignancy": "benign", "shape": "oval_round",
//               "internal_echo": "anechoic",
//               "posterior_acoustic": "enhancement", "fused": "01"}}
//
// Label keys are optional. Malformed rows and inconsistent dimensions fail
// the whole load with the offending line number.
absl::StatusOr<LoadedDataset> ParseDataset(std::istream& in);
absl::StatusOr<LoadedDataset> LoadDataset(const std::filesystem::path& path);

std::string SerializeDatasetRecord(const DatasetRecord& record);
absl::Status WriteDataset(const std::filesystem::path& path,
                          std::span<const DatasetRecord> records);

// What a model is trained to predict.
enum class Target {
  kMalignancy,
  kShape,
  kInternalEcho,
  kPosteriorAcoustic,
  kFused,
};

absl::string_view TargetName(Target target);
absl::StatusOr<Target> ParseTarget(absl::string_view name);

// Class id of a record for `target`: 1 for the positive binary class
// (malignant, oval/round, anechoic, no posterior features), 0 otherwise;
// FusedClass::index() for kFused. Empty when the label is missing.
std::optional<int> TargetClassId(const DatasetLabels& labels, Target target);

// Records of `split` that carry a label for `target`.
std::vector<const DatasetRecord*> SelectLabeled(
    std::span<const DatasetRecord> records, Split split, Target target);

// Count of labeled records per (split, class id) for `target`.
std::map<std::pair<Split, int>, int64_t> LabelCounts(
    std::span<const DatasetRecord> records, Target target);

}  // namespace sonoreport

#endif  // SONOREPORT_DATASET_H_

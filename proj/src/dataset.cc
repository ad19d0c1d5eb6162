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

#include "sonoreport/dataset.h"

#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

using Json = nlohmann::json;

absl::Status LineError(int64_t line, absl::string_view message) {
  return absl::InvalidArgumentError(absl::StrCat("line ", line, ": ", message));
}

absl::StatusOr<std::string> RequireString(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("missing or non-string \"", key, "\""));
  }
  return it->get<std::string>();
}

template <typename T>
absl::StatusOr<std::optional<T>> OptionalDescriptor(const Json& labels,
                                                    const char* key,
                                                    DescriptorField field) {
  auto it = labels.find(key);
  if (it == labels.end() || it->is_null()) return std::optional<T>();
  if (!it->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat("label \"", key, "\" must be a string"));
  }
  ASSIGN_OR_RETURN(DescriptorValue value,
                   ParseDescriptorToken(field, it->get<std::string>()));
  return std::optional<T>(std::get<T>(value));
}

// Outcome of parsing a single row: either a record, a row-level rejection,
// or (via the StatusOr) a dataset-level error.
struct RowResult {
  std::optional<DatasetRecord> record;
  std::string rejection;
};

absl::StatusOr<RowResult> ParseRow(const Json& obj) {
  if (!obj.is_object()) return absl::InvalidArgumentError("row is not an object");
  DatasetRecord record;
  ASSIGN_OR_RETURN(record.case_id, RequireString(obj, "case_id"));
  if (record.case_id.empty()) {
    return absl::InvalidArgumentError("empty case_id");
  }
  ASSIGN_OR_RETURN(std::string split, RequireString(obj, "split"));
  ASSIGN_OR_RETURN(record.split, ParseSplit(split));
  if (auto it = obj.find("source"); it != obj.end() && it->is_string()) {
    record.source = it->get<std::string>();
  }
  record.features.source = FeatureSource::kExternalEmbedding;
  if (auto it = obj.find("feature_source"); it != obj.end()) {
    if (!it->is_string()) {
      return absl::InvalidArgumentError("\"feature_source\" must be a string");
    }
    ASSIGN_OR_RETURN(record.features.source,
                     ParseFeatureSource(it->get<std::string>()));
  }

  auto features = obj.find("features");
  if (features == obj.end() || !features->is_array() || features->empty()) {
    return absl::InvalidArgumentError("missing or empty \"features\" array");
  }
  record.features.values.reserve(features->size());
  for (const Json& v : *features) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError("non-numeric feature value");
    }
    record.features.values.push_back(v.get<double>());
  }
  RETURN_IF_ERROR(
      ValidateFeatureVector(record.features, record.features.size()));

  RowResult result;
  auto labels = obj.find("labels");
  if (labels != obj.end() && !labels->is_null()) {
    if (!labels->is_object()) {
      return absl::InvalidArgumentError("\"labels\" must be an object");
    }
    DatasetLabels& out = record.labels;
    if (auto it = labels->find("malignancy");
        it != labels->end() && !it->is_null()) {
      if (!it->is_string()) {
        return absl::InvalidArgumentError("label \"malignancy\" must be a string");
      }
      ASSIGN_OR_RETURN(out.malignancy,
                       ParseMalignancy(it->get<std::string>()));
    }
    ASSIGN_OR_RETURN(out.shape, OptionalDescriptor<Shape>(
                                    *labels, "shape", DescriptorField::kShape));
    ASSIGN_OR_RETURN(out.internal_echo,
                     OptionalDescriptor<InternalEcho>(
                         *labels, "internal_echo",
                         DescriptorField::kInternalEcho));
    ASSIGN_OR_RETURN(out.posterior,
                     OptionalDescriptor<PosteriorAcoustic>(
                         *labels, "posterior_acoustic",
                         DescriptorField::kPosteriorAcoustic));

    if (out.internal_echo && out.posterior &&
        *out.internal_echo == InternalEcho::kHomogeneous &&
        *out.posterior == PosteriorAcoustic::kEnhancement) {
      result.rejection =
          "forbidden fused label 00 (homogeneous with enhancement)";
      return result;
    }
    if (auto it = labels->find("fused"); it != labels->end() && !it->is_null()) {
      if (!it->is_string()) {
        return absl::InvalidArgumentError("label \"fused\" must be a string");
      }
      const std::string code = it->get<std::string>();
      if (code == "00") {
        result.rejection =
            "forbidden fused label 00 (homogeneous with enhancement)";
        return result;
      }
      ASSIGN_OR_RETURN(FusedClass fused, FusedClass::FromCode(code));
      if ((out.internal_echo && *out.internal_echo != fused.internal_echo()) ||
          (out.posterior && *out.posterior != fused.posterior())) {
        result.rejection = absl::StrCat("fused label ", code,
                                        " contradicts the descriptor labels");
        return result;
      }
      out.internal_echo = fused.internal_echo();
      out.posterior = fused.posterior();
    }
  }
  result.record = std::move(record);
  return result;
}

}  // namespace

absl::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "";
}

absl::StatusOr<Split> ParseSplit(absl::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  return absl::InvalidArgumentError(absl::StrCat("unknown split \"", name, "\""));
}

absl::string_view MalignancyName(Malignancy m) {
  return m == Malignancy::kMalignant ? "malignant" : "benign";
}

absl::StatusOr<Malignancy> ParseMalignancy(absl::string_view name) {
  if (name == "benign") return Malignancy::kBenign;
  if (name == "malignant") return Malignancy::kMalignant;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown malignancy label \"", name, "\""));
}

std::optional<FusedClass> DatasetLabels::fused() const {
  if (!internal_echo || !posterior) return std::nullopt;
  absl::StatusOr<FusedClass> f = FusedClass::FromBits(
      *posterior == PosteriorAcoustic::kNoPosteriorFeatures,
      *internal_echo == InternalEcho::kAnechoic);
  if (!f.ok()) return std::nullopt;
  return *f;
}

absl::StatusOr<LoadedDataset> ParseDataset(std::istream& in) {
  LoadedDataset dataset;
  std::set<std::string> seen_ids;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json obj = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) return LineError(line_no, "malformed JSON");
    absl::StatusOr<RowResult> row = ParseRow(obj);
    if (!row.ok()) return LineError(line_no, row.status().message());
    if (!row->record) {
      dataset.rejected.push_back({line_no, row->rejection});
      continue;
    }
    DatasetRecord& record = *row->record;
    if (dataset.dimension == 0) {
      dataset.dimension = record.features.size();
    } else if (record.features.size() != dataset.dimension) {
      return LineError(line_no,
                       absl::StrCat("feature dimension ",
                                    record.features.size(),
                                    " differs from dataset dimension ",
                                    dataset.dimension));
    }
    if (!seen_ids.insert(record.case_id).second) {
      return LineError(line_no,
                       absl::StrCat("duplicate case_id \"", record.case_id,
                                    "\""));
    }
    ++dataset.split_counts[record.split];
    dataset.records.push_back(std::move(record));
  }
  if (in.bad()) return absl::DataLossError("read error");
  return dataset;
}

absl::StatusOr<LoadedDataset> LoadDataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open dataset ", path.string()));
  }
  absl::StatusOr<LoadedDataset> dataset = ParseDataset(in);
  if (!dataset.ok()) {
    return absl::Status(dataset.status().code(),
                        absl::StrCat(path.string(), ": ",
                                     dataset.status().message()));
  }
  return dataset;
}

std::string SerializeDatasetRecord(const DatasetRecord& record) {
  Json obj;
  obj["case_id"] = record.case_id;
  obj["split"] = SplitName(record.split);
  obj["source"] = record.source;
  obj["feature_source"] = FeatureSourceName(record.features.source);
  obj["features"] = record.features.values;
  Json labels = Json::object();
  const DatasetLabels& l = record.labels;
  if (l.malignancy) labels["malignancy"] = MalignancyName(*l.malignancy);
  if (l.shape) labels["shape"] = DescriptorToken(*l.shape);
  if (l.internal_echo) labels["internal_echo"] = DescriptorToken(*l.internal_echo);
  if (l.posterior) labels["posterior_acoustic"] = DescriptorToken(*l.posterior);
  if (std::optional<FusedClass> fused = l.fused()) {
    labels["fused"] = fused->code_string();
  }
  obj["labels"] = std::move(labels);
  return obj.dump();
}

absl::Status WriteDataset(const std::filesystem::path& path,
                          std::span<const DatasetRecord> records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", path.string()));
  }
  for (const DatasetRecord& record : records) {
    out << SerializeDatasetRecord(record) << '\n';
  }
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path.string()));
  return absl::OkStatus();
}

absl::string_view TargetName(Target target) {
  switch (target) {
    case Target::kMalignancy:
      return "malignancy";
    case Target::kShape:
      return "shape";
    case Target::kInternalEcho:
      return "internal_echo";
    case Target::kPosteriorAcoustic:
      return "posterior_acoustic";
    case Target::kFused:
      return "fused";
  }
  return "";
}

absl::StatusOr<Target> ParseTarget(absl::string_view name) {
  for (Target t : {Target::kMalignancy, Target::kShape, Target::kInternalEcho,
                   Target::kPosteriorAcoustic, Target::kFused}) {
    if (TargetName(t) == name) return t;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown target \"", name, "\""));
}

std::optional<int> TargetClassId(const DatasetLabels& labels, Target target) {
  switch (target) {
    case Target::kMalignancy:
      if (!labels.malignancy) return std::nullopt;
      return *labels.malignancy == Malignancy::kMalignant ? 1 : 0;
    case Target::kShape:
      if (!labels.shape) return std::nullopt;
      return *labels.shape == Shape::kOvalRound ? 1 : 0;
    case Target::kInternalEcho:
      if (!labels.internal_echo) return std::nullopt;
      return *labels.internal_echo == InternalEcho::kAnechoic ? 1 : 0;
    case Target::kPosteriorAcoustic:
      if (!labels.posterior) return std::nullopt;
      return *labels.posterior == PosteriorAcoustic::kNoPosteriorFeatures ? 1
                                                                          : 0;
    case Target::kFused: {
      std::optional<FusedClass> fused = labels.fused();
      if (!fused) return std::nullopt;
      return fused->index();
    }
  }
  return std::nullopt;
}

std::vector<const DatasetRecord*> SelectLabeled(
    std::span<const DatasetRecord> records, Split split, Target target) {
  std::vector<const DatasetRecord*> out;
  for (const DatasetRecord& r : records) {
    if (r.split == split && TargetClassId(r.labels, target)) out.push_back(&r);
  }
  return out;
}

std::map<std::pair<Split, int>, int64_t> LabelCounts(
    std::span<const DatasetRecord> records, Target target) {
  std::map<std::pair<Split, int>, int64_t> counts;
  for (const DatasetRecord& r : records) {
    if (std::optional<int> id = TargetClassId(r.labels, target)) {
      ++counts[{r.split, *id}];
    }
  }
  return counts;
}

}  // namespace sonoreport

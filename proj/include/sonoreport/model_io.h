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

#ifndef SONOREPORT_MODEL_IO_H_
#define SONOREPORT_MODEL_IO_H_

#include <filesystem>
#include <string>
#include <variant>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sonoreport/dataset.h"
#include "sonoreport/ovr.h"
#include "sonoreport/svm.h"

namespace sonoreport {

inline constexpr char kSvmModelSchema[] = "sonoreport.svm_model/v1";
inline constexpr char kOvrModelSchema[] = "sonoreport.ovr_model/v1";

// A trained model plus the label it predicts. Binary targets use SvmModel;
// kFused uses a 3-class OvrModel.
struct ModelArtifact {
  Target target = Target::kMalignancy;
  std::variant<SvmModel, OvrModel> model;

  friend bool operator==(const ModelArtifact&, const ModelArtifact&) = default;
};

// Self-describing JSON document. Doubles are written in shortest
// round-trip form, so a load reproduces every parameter bit for bit.
std::string SerializeModel(const ModelArtifact& artifact);
absl::StatusOr<ModelArtifact> ParseModel(const std::string& text);

absl::Status SaveModel(const std::filesystem::path& path,
                       const ModelArtifact& artifact);
absl::StatusOr<ModelArtifact> LoadModel(const std::filesystem::path& path);

}  // namespace sonoreport

#endif  // SONOREPORT_MODEL_IO_H_

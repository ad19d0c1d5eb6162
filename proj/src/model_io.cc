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

#include "sonoreport/model_io.h"

#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "sonoreport/fused_class.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

using Json = nlohmann::json;

Json SvmToJson(const SvmModel& model) {
  Json out{
      {"kernel",
       Json{{"kind", KernelKindName(model.kernel.kind)},
            {"gamma", model.kernel.gamma}}},
      {"c", model.c},
      {"dimension", model.dimension},
      {"support_vectors", model.support_vectors},
      {"coeffs", model.coeffs},
      {"bias", model.bias},
  };
  if (model.calibration) {
    out["calibration"] =
        Json{{"a", model.calibration->a}, {"c", model.calibration->c}};
  } else {
    out["calibration"] = nullptr;
  }
  return out;
}

absl::StatusOr<double> Number(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat("model field \"", key, "\" missing or not a number"));
  }
  return it->get<double>();
}

absl::StatusOr<SvmModel> SvmFromJson(const Json& json) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("model is not an object");
  }
  SvmModel model;
  auto kernel = json.find("kernel");
  if (kernel == json.end() || !kernel->is_object() ||
      !kernel->contains("kind") || !(*kernel)["kind"].is_string()) {
    return absl::InvalidArgumentError("model kernel missing");
  }
  ASSIGN_OR_RETURN(model.kernel.kind,
                   ParseKernelKind((*kernel)["kind"].get<std::string>()));
  ASSIGN_OR_RETURN(model.kernel.gamma, Number(*kernel, "gamma"));
  RETURN_IF_ERROR(model.kernel.Validate());
  ASSIGN_OR_RETURN(model.c, Number(json, "c"));
  ASSIGN_OR_RETURN(model.bias, Number(json, "bias"));
  auto dim = json.find("dimension");
  if (dim == json.end() || !dim->is_number_unsigned()) {
    return absl::InvalidArgumentError("model dimension missing");
  }
  model.dimension = dim->get<size_t>();
  try {
    model.support_vectors =
        json.at("support_vectors").get<std::vector<std::vector<double>>>();
    model.coeffs = json.at("coeffs").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed support vectors: ", e.what()));
  }
  if (model.support_vectors.size() != model.coeffs.size()) {
    return absl::InvalidArgumentError(
        "support vector and coefficient counts differ");
  }
  for (const auto& sv : model.support_vectors) {
    if (sv.size() != model.dimension) {
      return absl::InvalidArgumentError("support vector dimension mismatch");
    }
  }
  auto cal = json.find("calibration");
  if (cal != json.end() && !cal->is_null()) {
    PlattCalibration platt;
    ASSIGN_OR_RETURN(platt.a, Number(*cal, "a"));
    ASSIGN_OR_RETURN(platt.c, Number(*cal, "c"));
    model.calibration = platt;
  }
  return model;
}

}  // namespace

std::string SerializeModel(const ModelArtifact& artifact) {
  Json out;
  out["target"] = TargetName(artifact.target);
  if (const auto* svm = std::get_if<SvmModel>(&artifact.model)) {
    out["schema"] = kSvmModelSchema;
    out["model"] = SvmToJson(*svm);
  } else {
    const OvrModel& ovr = std::get<OvrModel>(artifact.model);
    out["schema"] = kOvrModelSchema;
    Json models = Json::array();
    for (const SvmModel& m : ovr.models) models.push_back(SvmToJson(m));
    out["model"] = Json{{"num_classes", ovr.num_classes},
                        {"models", std::move(models)}};
  }
  return out.dump(1) + "\n";
}

absl::StatusOr<ModelArtifact> ParseModel(const std::string& text) {
  Json json = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded() || !json.is_object()) {
    return absl::InvalidArgumentError("model file is not a JSON object");
  }
  auto schema = json.find("schema");
  auto target = json.find("target");
  auto body = json.find("model");
  if (schema == json.end() || !schema->is_string() || target == json.end() ||
      !target->is_string() || body == json.end()) {
    return absl::InvalidArgumentError("model file lacks schema/target/model");
  }
  ModelArtifact artifact;
  ASSIGN_OR_RETURN(artifact.target, ParseTarget(target->get<std::string>()));
  const std::string schema_id = schema->get<std::string>();
  if (schema_id == kSvmModelSchema) {
    if (artifact.target == Target::kFused) {
      return absl::InvalidArgumentError("fused target needs a one-vs-rest model");
    }
    ASSIGN_OR_RETURN(SvmModel svm, SvmFromJson(*body));
    artifact.model = std::move(svm);
  } else if (schema_id == kOvrModelSchema) {
    if (artifact.target != Target::kFused) {
      return absl::InvalidArgumentError(
          "one-vs-rest models are only used for the fused target");
    }
    OvrModel ovr;
    auto k = body->find("num_classes");
    auto models = body->find("models");
    if (k == body->end() || !k->is_number_integer() || models == body->end() ||
        !models->is_array()) {
      return absl::InvalidArgumentError("malformed one-vs-rest model");
    }
    ovr.num_classes = k->get<int>();
    for (const Json& m : *models) {
      ASSIGN_OR_RETURN(SvmModel svm, SvmFromJson(m));
      ovr.models.push_back(std::move(svm));
    }
    if (ovr.num_classes != FusedClass::kNumClasses ||
        static_cast<int>(ovr.models.size()) != ovr.num_classes) {
      return absl::InvalidArgumentError(
          absl::StrCat("fused model needs ", FusedClass::kNumClasses,
                       " binary models"));
    }
    for (const SvmModel& m : ovr.models) {
      if (m.dimension != ovr.models.front().dimension) {
        return absl::InvalidArgumentError("one-vs-rest dimension mismatch");
      }
    }
    artifact.model = std::move(ovr);
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown model schema \"", schema_id, "\""));
  }
  return artifact;
}

absl::Status SaveModel(const std::filesystem::path& path,
                       const ModelArtifact& artifact) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot write ", path.string()));
  }
  out << SerializeModel(artifact);
  out.close();
  if (!out) {
    return absl::UnavailableError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<ModelArtifact> LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  absl::StatusOr<ModelArtifact> artifact = ParseModel(buffer.str());
  if (!artifact.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", artifact.status().message()));
  }
  return artifact;
}

}  // namespace sonoreport

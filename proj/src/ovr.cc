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

#include "sonoreport/ovr.h"

#include "absl/strings/str_cat.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {

absl::StatusOr<OvrModel> TrainOvr(std::span<const FeatureVector> samples,
                                  std::span<const int> labels, int num_classes,
                                  const TrainConfig& config) {
  if (num_classes < 2) {
    return absl::InvalidArgumentError("one-vs-rest needs at least 2 classes");
  }
  if (samples.size() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(samples.size(), " samples but ", labels.size(),
                     " labels"));
  }
  std::vector<size_t> counts(num_classes, 0);
  for (int label : labels) {
    if (label < 0 || label >= num_classes) {
      return absl::InvalidArgumentError(
          absl::StrCat("class id ", label, " outside [0, ", num_classes, ")"));
    }
    ++counts[label];
  }
  for (int k = 0; k < num_classes; ++k) {
    if (counts[k] == 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("class ", k, " has no training samples"));
    }
  }

  const size_t n = labels.size();
  OvrModel model;
  model.num_classes = num_classes;
  for (int k = 0; k < num_classes; ++k) {
    std::vector<int> binary(n);
    std::vector<double> weights(n);
    const double n_pos = static_cast<double>(counts[k]);
    const double n_neg = static_cast<double>(n) - n_pos;
    for (size_t i = 0; i < n; ++i) {
      binary[i] = labels[i] == k ? 1 : -1;
      if (config.class_weights) {
        auto it = config.class_weights->find(labels[i]);
        weights[i] = it == config.class_weights->end() ? 1.0 : it->second;
      } else {
        weights[i] = static_cast<double>(n) /
                     (2.0 * (binary[i] == 1 ? n_pos : n_neg));
      }
    }
    absl::StatusOr<SvmModel> sub =
        TrainSvmWeighted(samples, binary, weights, config);
    if (!sub.ok()) {
      return absl::Status(sub.status().code(),
                          absl::StrCat("class ", k, " vs rest: ",
                                       sub.status().message()));
    }
    model.models.push_back(*std::move(sub));
  }
  return model;
}

absl::StatusOr<std::vector<double>> OvrScores(const OvrModel& model,
                                              std::span<const double> x) {
  if (model.models.size() != static_cast<size_t>(model.num_classes) ||
      model.num_classes < 2) {
    return absl::FailedPreconditionError("malformed one-vs-rest model");
  }
  std::vector<double> scores(model.num_classes);
  double total = 0.0;
  for (int k = 0; k < model.num_classes; ++k) {
    ASSIGN_OR_RETURN(scores[k], PredictScore(model.models[k], x));
    total += scores[k];
  }
  for (double& s : scores) s /= total;
  return scores;
}

absl::StatusOr<int> OvrPredict(const OvrModel& model,
                               std::span<const double> x) {
  ASSIGN_OR_RETURN(std::vector<double> scores, OvrScores(model, x));
  return ArgmaxLowestId(scores);
}

int ArgmaxLowestId(std::span<const double> scores) {
  int best = 0;
  for (size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = static_cast<int>(k);
  }
  return best;
}

}  // namespace sonoreport

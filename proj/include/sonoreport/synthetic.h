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

#ifndef SONOREPORT_SYNTHETIC_H_
#define SONOREPORT_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sonoreport/dataset.h"

namespace sonoreport {

// Ground-truth label priors.
struct LabelPriors {
  double malignant = 0.5;
  double oval_round = 0.8;
  double enhancement = 0.15;
  double anechoic = 0.45;
};

struct SyntheticConfig {
  int64_t n = 500;
  size_t d = 16;
  // Probability that an observed label differs from the class that
  // generated the features. Must lie in [0, 0.5).
  double noise = 0.05;
  // Enhancement implies anechoic, in both ground truth and noisy labels.
  bool enforce_rule = true;
  LabelPriors priors;
  double train_fraction = 0.7;
  double validation_fraction = 0.15;

  absl::Status Validate() const;
};

// Seeded stand-in for extracted lesion embeddings. Features are unit-variance
// Gaussian noise around a class mean built from orthonormal directions:
//
//  * malignancy and shape each shift +/-3 along their own direction, so a
//    linear SVM reaches at least 1 - 2 * noise - 0.05 on those labels;
//  * posterior enhancement shifts +6 along a third direction, anechoic
//    content without posterior features -6 along it, and homogeneous echo
//    +3 along a fourth. The admissible classes 01, 11 and 10 then sit at
//    (+6, 0), (-6, 0) and (0, +3): each fused class is linearly separable
//    from the others, but homogeneous vs anechoic only barely, since the
//    homogeneous cluster lies between the two anechoic ones. Joint 3-class
//    prediction recovers internal echo better than a marginal linear model.
//
// Identical (config, seed) always yields identical records.
absl::StatusOr<std::vector<DatasetRecord>> SynthesizeDataset(
    const SyntheticConfig& config, uint64_t seed);

}  // namespace sonoreport

#endif  // SONOREPORT_SYNTHETIC_H_

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

#ifndef SONOREPORT_LEXICON_H_
#define SONOREPORT_LEXICON_H_

#include <array>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace sonoreport {

// BI-RADS ultrasound descriptors used in benign screening reports. Oval and
// round are reported jointly, so they share one value.
enum class Shape { kOvalRound, kIrregular };
enum class InternalEcho { kHomogeneous, kAnechoic };
enum class PosteriorAcoustic { kEnhancement, kNoPosteriorFeatures };
// The last three descriptors have a single enumerated value each. Anything
// else a doctor writes for them is free text, not a lexicon term.
enum class Boundary { kAbrupt };
enum class Orientation { kParallel };
enum class Margin { kCircumscribed };

// Report slots, in rendering order.
enum class DescriptorField {
  kShape,
  kInternalEcho,
  kPosteriorAcoustic,
  kBoundary,
  kOrientation,
  kMargin,
};

inline constexpr std::array<DescriptorField, 6> kAllDescriptorFields = {
    DescriptorField::kShape,       DescriptorField::kInternalEcho,
    DescriptorField::kPosteriorAcoustic, DescriptorField::kBoundary,
    DescriptorField::kOrientation, DescriptorField::kMargin,
};

using DescriptorValue = std::variant<Shape, InternalEcho, PosteriorAcoustic,
                                     Boundary, Orientation, Margin>;

// Every enumerated descriptor value, grouped by field in rendering order.
std::vector<DescriptorValue> AllDescriptorValues();

DescriptorField FieldOf(const DescriptorValue& value);

// Canonical lexicon phrase, e.g. "oval/round" or "no posterior features".
absl::string_view DescriptorTerm(const DescriptorValue& value);

// Inverse of DescriptorTerm. Returns NotFound for phrases outside the lexicon
// (including free-text overrides).
absl::StatusOr<DescriptorValue> ParseDescriptorTerm(DescriptorField field,
                                                    absl::string_view phrase);

// Lowercase machine token used in dataset files, e.g. "oval_round".
absl::string_view DescriptorToken(const DescriptorValue& value);
absl::StatusOr<DescriptorValue> ParseDescriptorToken(DescriptorField field,
                                                     absl::string_view token);

// Machine name of a field ("internal_echo") and its report label
// ("Internal echo").
absl::string_view FieldName(DescriptorField field);
absl::string_view FieldLabel(DescriptorField field);
absl::StatusOr<DescriptorField> ParseFieldName(absl::string_view name);

}  // namespace sonoreport

#endif  // SONOREPORT_LEXICON_H_

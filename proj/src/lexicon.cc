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

#include "sonoreport/lexicon.h"

#include <cstdlib>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace sonoreport {
namespace {

struct LexiconEntry {
  DescriptorValue value;
  absl::string_view term;
  absl::string_view token;
};

// Single source of truth for the lexicon. Both directions of every lookup
// are derived from this table.
const std::array<LexiconEntry, 9>& Lexicon() {
  static const std::array<LexiconEntry, 9> kLexicon = {{
      {Shape::kOvalRound, "oval/round", "oval_round"},
      {Shape::kIrregular, "irregular", "irregular"},
      {InternalEcho::kHomogeneous, "homogeneous", "homogeneous"},
      {InternalEcho::kAnechoic, "anechoic", "anechoic"},
      {PosteriorAcoustic::kEnhancement, "enhancement", "enhancement"},
      {PosteriorAcoustic::kNoPosteriorFeatures, "no posterior features",
       "no_posterior_features"},
      {Boundary::kAbrupt, "abrupt", "abrupt"},
      {Orientation::kParallel, "parallel", "parallel"},
      {Margin::kCircumscribed, "circumscribed", "circumscribed"},
  }};
  return kLexicon;
}

const LexiconEntry& EntryFor(const DescriptorValue& value) {
  for (const LexiconEntry& entry : Lexicon()) {
    if (entry.value == value) return entry;
  }
  // Unreachable: the table covers every enumerator.
  std::abort();
}

}  // namespace

std::vector<DescriptorValue> AllDescriptorValues() {
  std::vector<DescriptorValue> values;
  values.reserve(Lexicon().size());
  for (const LexiconEntry& entry : Lexicon()) values.push_back(entry.value);
  return values;
}

DescriptorField FieldOf(const DescriptorValue& value) {
  return static_cast<DescriptorField>(value.index());
}

absl::string_view DescriptorTerm(const DescriptorValue& value) {
  return EntryFor(value).term;
}

absl::string_view DescriptorToken(const DescriptorValue& value) {
  return EntryFor(value).token;
}

absl::StatusOr<DescriptorValue> ParseDescriptorTerm(DescriptorField field,
                                                    absl::string_view phrase) {
  for (const LexiconEntry& entry : Lexicon()) {
    if (FieldOf(entry.value) == field && entry.term == phrase) {
      return entry.value;
    }
  }
  return absl::NotFoundError(absl::StrCat("no lexicon mapping for ",
                                          FieldName(field), " phrase \"",
                                          phrase, "\""));
}

absl::StatusOr<DescriptorValue> ParseDescriptorToken(DescriptorField field,
                                                     absl::string_view token) {
  for (const LexiconEntry& entry : Lexicon()) {
    if (FieldOf(entry.value) == field && entry.token == token) {
      return entry.value;
    }
  }
  return absl::NotFoundError(absl::StrCat("no lexicon mapping for ",
                                          FieldName(field), " token \"",
                                          token, "\""));
}

absl::string_view FieldName(DescriptorField field) {
  switch (field) {
    case DescriptorField::kShape:
      return "shape";
    case DescriptorField::kInternalEcho:
      return "internal_echo";
    case DescriptorField::kPosteriorAcoustic:
      return "posterior_acoustic";
    case DescriptorField::kBoundary:
      return "boundary";
    case DescriptorField::kOrientation:
      return "orientation";
    case DescriptorField::kMargin:
      return "margin";
  }
  return "";
}

absl::string_view FieldLabel(DescriptorField field) {
  switch (field) {
    case DescriptorField::kShape:
      return "Shape";
    case DescriptorField::kInternalEcho:
      return "Internal echo";
    case DescriptorField::kPosteriorAcoustic:
      return "Posterior acoustic";
    case DescriptorField::kBoundary:
      return "Boundary";
    case DescriptorField::kOrientation:
      return "Orientation";
    case DescriptorField::kMargin:
      return "Margin";
  }
  return "";
}

absl::StatusOr<DescriptorField> ParseFieldName(absl::string_view name) {
  for (DescriptorField field : kAllDescriptorFields) {
    if (FieldName(field) == name) return field;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown descriptor field \"", name, "\""));
}

}  // namespace sonoreport

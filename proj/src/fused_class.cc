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

#include "sonoreport/fused_class.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace sonoreport {

absl::StatusOr<FusedClass> FusedClass::FromCode(absl::string_view code) {
  if (code == "01") return FusedClass(Code::k01);
  if (code == "10") return FusedClass(Code::k10);
  if (code == "11") return FusedClass(Code::k11);
  if (code == "00") {
    return absl::InvalidArgumentError(
        "forbidden fused class 00 (enhancement with homogeneous echo)");
  }
  return absl::InvalidArgumentError(
      absl::StrCat("malformed fused class code \"", code, "\""));
}

absl::StatusOr<FusedClass> FusedClass::FromBits(bool no_posterior_features,
                                                bool anechoic) {
  if (!no_posterior_features && !anechoic) {
    return absl::InvalidArgumentError(
        "forbidden fused class 00 (enhancement with homogeneous echo)");
  }
  if (!no_posterior_features) return FusedClass(Code::k01);
  return FusedClass(anechoic ? Code::k11 : Code::k10);
}

absl::StatusOr<FusedClass> FusedClass::FromIndex(int index) {
  if (index < 0 || index >= kNumClasses) {
    return absl::InvalidArgumentError(
        absl::StrCat("fused class index out of range: ", index));
  }
  return FusedClass(static_cast<Code>(index));
}

std::array<FusedClass, FusedClass::kNumClasses> FusedClass::All() {
  return {FusedClass(Code::k01), FusedClass(Code::k10),
          FusedClass(Code::k11)};
}

absl::string_view FusedClass::code_string() const {
  switch (code_) {
    case Code::k01:
      return "01";
    case Code::k10:
      return "10";
    case Code::k11:
      return "11";
  }
  return "";
}

PosteriorAcoustic FusedClass::posterior() const {
  return code_ == Code::k01 ? PosteriorAcoustic::kEnhancement
                            : PosteriorAcoustic::kNoPosteriorFeatures;
}

InternalEcho FusedClass::internal_echo() const {
  return code_ == Code::k10 ? InternalEcho::kHomogeneous
                            : InternalEcho::kAnechoic;
}

}  // namespace sonoreport

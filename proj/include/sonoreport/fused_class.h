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

#ifndef SONOREPORT_FUSED_CLASS_H_
#define SONOREPORT_FUSED_CLASS_H_

#include <array>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sonoreport/lexicon.h"

namespace sonoreport {

// Joint posterior-acoustic x internal-echo label. The two-character code puts
// the posterior bit first (1 = no posterior features, 0 = enhancement) and
// the echo bit second (1 = anechoic, 0 = homogeneous). "00" (enhancement
// behind a homogeneous mass) is clinically implausible and has no
// representation here.
class FusedClass {
 public:
  enum class Code { k01 = 0, k10 = 1, k11 = 2 };
  static constexpr int kNumClasses = 3;

  static absl::StatusOr<FusedClass> FromCode(absl::string_view code);
  static absl::StatusOr<FusedClass> FromBits(bool no_posterior_features,
                                             bool anechoic);
  // Dense class id in [0, kNumClasses), ordered 01, 10, 11.
  static absl::StatusOr<FusedClass> FromIndex(int index);
  static std::array<FusedClass, kNumClasses> All();

  Code code() const { return code_; }
  int index() const { return static_cast<int>(code_); }
  absl::string_view code_string() const;
  PosteriorAcoustic posterior() const;
  InternalEcho internal_echo() const;

  friend bool operator==(FusedClass a, FusedClass b) {
    return a.code_ == b.code_;
  }

 private:
  explicit constexpr FusedClass(Code code) : code_(code) {}
  Code code_;
};

}  // namespace sonoreport

#endif  // SONOREPORT_FUSED_CLASS_H_

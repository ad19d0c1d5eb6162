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

#ifndef SONOREPORT_KERNEL_H_
#define SONOREPORT_KERNEL_H_

#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "sonoreport/case_record.h"

namespace sonoreport {

enum class KernelKind { kLinear, kRbf };

absl::string_view KernelKindName(KernelKind kind);
absl::StatusOr<KernelKind> ParseKernelKind(absl::string_view name);

struct KernelSpec {
  KernelKind kind = KernelKind::kLinear;
  // exp(-gamma * |a - b|^2); only meaningful for kRbf.
  double gamma = 0.0;

  static KernelSpec Linear() { return {}; }
  static KernelSpec Rbf(double gamma) { return {KernelKind::kRbf, gamma}; }

  absl::Status Validate() const;
  double Evaluate(std::span<const double> a, std::span<const double> b) const;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

// 1 / (d * var), with var the variance of all feature entries pooled. Falls
// back to 1 / d for constant data.
double DefaultRbfGamma(std::span<const FeatureVector> samples);

// Dense symmetric n x n kernel matrix.
class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(size_t n) : n_(n), data_(n * n, 0.0) {}
  static GramMatrix Compute(const KernelSpec& kernel,
                            std::span<const std::vector<double>> rows);

  size_t size() const { return n_; }
  double operator()(size_t i, size_t j) const { return data_[i * n_ + j]; }
  double& at(size_t i, size_t j) { return data_[i * n_ + j]; }

 private:
  size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace sonoreport

#endif  // SONOREPORT_KERNEL_H_

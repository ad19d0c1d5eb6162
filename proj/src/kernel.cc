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

#include "sonoreport/kernel.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace sonoreport {

absl::string_view KernelKindName(KernelKind kind) {
  return kind == KernelKind::kRbf ? "rbf" : "linear";
}

absl::StatusOr<KernelKind> ParseKernelKind(absl::string_view name) {
  if (name == "linear") return KernelKind::kLinear;
  if (name == "rbf") return KernelKind::kRbf;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown kernel \"", name, "\""));
}

absl::Status KernelSpec::Validate() const {
  if (kind == KernelKind::kRbf && !(gamma > 0.0 && std::isfinite(gamma))) {
    return absl::InvalidArgumentError(
        absl::StrCat("RBF kernel requires gamma > 0, got ", gamma));
  }
  return absl::OkStatus();
}

double KernelSpec::Evaluate(std::span<const double> a,
                            std::span<const double> b) const {
  if (kind == KernelKind::kLinear) {
    double dot = 0.0;
    for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
  }
  double sq = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sq += diff * diff;
  }
  return std::exp(-gamma * sq);
}

double DefaultRbfGamma(std::span<const FeatureVector> samples) {
  if (samples.empty() || samples.front().size() == 0) return 1.0;
  const double d = static_cast<double>(samples.front().size());
  double sum = 0.0;
  double count = 0.0;
  for (const FeatureVector& fv : samples) {
    for (double v : fv.values) sum += v;
    count += static_cast<double>(fv.size());
  }
  const double mean = sum / count;
  double var = 0.0;
  for (const FeatureVector& fv : samples) {
    for (double v : fv.values) var += (v - mean) * (v - mean);
  }
  var /= count;
  if (!(var > 0.0)) return 1.0 / d;
  return 1.0 / (d * var);
}

GramMatrix GramMatrix::Compute(const KernelSpec& kernel,
                               std::span<const std::vector<double>> rows) {
  GramMatrix gram(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j <= i; ++j) {
      const double k = kernel.Evaluate(rows[i], rows[j]);
      gram.at(i, j) = k;
      gram.at(j, i) = k;
    }
  }
  return gram;
}

}  // namespace sonoreport

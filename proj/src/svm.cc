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

#include "sonoreport/svm.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "sonoreport/smo_solver.h"
#include "sonoreport/status_macros.h"

namespace sonoreport {
namespace {

// Slack allowed on box and equality constraints when validating the solver
// output. The equality constraint is preserved exactly by every pair update,
// so only round-off accumulates.
constexpr double kBoxSlack = 1e-9;

absl::Status CheckInputs(std::span<const FeatureVector> samples,
                         std::span<const int> labels) {
  if (samples.size() != labels.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(samples.size(), " samples but ", labels.size(),
                     " labels"));
  }
  if (samples.size() < 2) {
    return absl::InvalidArgumentError("need at least two samples");
  }
  const size_t dim = samples.front().size();
  if (dim == 0) return absl::InvalidArgumentError("zero-dimensional samples");
  bool has_pos = false;
  bool has_neg = false;
  for (size_t i = 0; i < samples.size(); ++i) {
    RETURN_IF_ERROR(ValidateFeatureVector(samples[i], dim));
    if (labels[i] == 1) {
      has_pos = true;
    } else if (labels[i] == -1) {
      has_neg = true;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", labels[i], " is not +1 or -1"));
    }
  }
  if (!has_pos || !has_neg) {
    return absl::InvalidArgumentError(
        "training data contains a single class");
  }
  return absl::OkStatus();
}

// Lexicographic order on (features, label, weight). Identical keys are
// interchangeable, so the sorted sequence is unique.
std::vector<size_t> CanonicalOrder(std::span<const FeatureVector> samples,
                                   std::span<const int> labels,
                                   std::span<const double> weights) {
  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto& va = samples[a].values;
    const auto& vb = samples[b].values;
    if (va != vb) {
      return std::lexicographical_compare(va.begin(), va.end(), vb.begin(),
                                          vb.end());
    }
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    return weights[a] < weights[b];
  });
  return order;
}

}  // namespace

absl::Status TrainConfig::Validate() const {
  RETURN_IF_ERROR(kernel.Validate());
  if (!(c > 0.0 && std::isfinite(c))) {
    return absl::InvalidArgumentError(absl::StrCat("C must be > 0, got ", c));
  }
  if (!(tol > 0.0 && std::isfinite(tol))) {
    return absl::InvalidArgumentError(
        absl::StrCat("tol must be > 0, got ", tol));
  }
  if (max_passes <= 0) {
    return absl::InvalidArgumentError("max_passes must be positive");
  }
  if (class_weights) {
    for (const auto& [label, weight] : *class_weights) {
      if (!(weight > 0.0 && std::isfinite(weight))) {
        return absl::InvalidArgumentError(
            absl::StrCat("class weight for ", label, " must be > 0"));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SvmModel> TrainSvm(std::span<const FeatureVector> samples,
                                  std::span<const int> labels,
                                  const TrainConfig& config) {
  RETURN_IF_ERROR(CheckInputs(samples, labels));
  size_t n_pos = 0;
  for (int label : labels) n_pos += label == 1 ? 1 : 0;
  const size_t n = labels.size();
  const size_t n_neg = n - n_pos;

  std::vector<double> weights(n);
  for (size_t i = 0; i < n; ++i) {
    const int label = labels[i];
    if (config.class_weights) {
      auto it = config.class_weights->find(label);
      weights[i] = it == config.class_weights->end() ? 1.0 : it->second;
    } else {
      const double count = static_cast<double>(label == 1 ? n_pos : n_neg);
      weights[i] = static_cast<double>(n) / (2.0 * count);
    }
  }
  return TrainSvmWeighted(samples, labels, weights, config);
}

absl::StatusOr<SvmModel> TrainSvmWeighted(
    std::span<const FeatureVector> samples, std::span<const int> labels,
    std::span<const double> c_multipliers, const TrainConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  RETURN_IF_ERROR(CheckInputs(samples, labels));
  if (c_multipliers.size() != samples.size()) {
    return absl::InvalidArgumentError("one C multiplier per sample required");
  }
  const size_t n = samples.size();
  const std::vector<size_t> order =
      CanonicalOrder(samples, labels, c_multipliers);

  std::vector<std::vector<double>> rows(n);
  DualProblem problem;
  problem.labels.resize(n);
  problem.upper_bounds.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const size_t src = order[k];
    rows[k] = samples[src].values;
    problem.labels[k] = labels[src];
    problem.upper_bounds[k] = config.c * c_multipliers[src];
    if (!(problem.upper_bounds[k] > 0.0)) {
      return absl::InvalidArgumentError("C multipliers must be positive");
    }
  }
  problem.gram = GramMatrix::Compute(config.kernel, rows);

  SmoOptions options;
  options.tol = config.tol;
  options.max_iterations =
      static_cast<int64_t>(config.max_passes) * static_cast<int64_t>(n);
  ASSIGN_OR_RETURN(DualSolution solution, SolveSmo(problem, options));

  double balance = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double a = solution.alpha[k];
    if (a < -kBoxSlack || a > problem.upper_bounds[k] + kBoxSlack) {
      return absl::InternalError(
          absl::StrCat("dual variable ", k, " = ", a, " left its box"));
    }
    balance += a * problem.labels[k];
  }
  if (std::fabs(balance) > config.tol) {
    return absl::InternalError(
        absl::StrCat("equality constraint violated: sum a_i y_i = ", balance));
  }

  SvmModel model;
  model.kernel = config.kernel;
  model.c = config.c;
  model.dimension = samples.front().size();
  model.bias = solution.bias;
  for (size_t k = 0; k < n; ++k) {
    if (solution.alpha[k] <= 0.0) continue;
    model.support_vectors.push_back(rows[k]);
    model.coeffs.push_back(solution.alpha[k] * problem.labels[k]);
  }

  std::vector<double> decisions(n);
  for (size_t k = 0; k < n; ++k) {
    ASSIGN_OR_RETURN(decisions[k], DecisionValue(model, rows[k]));
  }
  ASSIGN_OR_RETURN(model.calibration, FitPlatt(decisions, problem.labels));
  return model;
}

absl::StatusOr<double> DecisionValue(const SvmModel& model,
                                     std::span<const double> x) {
  if (model.support_vectors.empty()) {
    return absl::FailedPreconditionError("model has no support vectors");
  }
  if (x.size() != model.dimension) {
    return absl::InvalidArgumentError(
        absl::StrCat("input dimension ", x.size(), " != model dimension ",
                     model.dimension));
  }
  double f = model.bias;
  for (size_t i = 0; i < model.support_vectors.size(); ++i) {
    f += model.coeffs[i] * model.kernel.Evaluate(model.support_vectors[i], x);
  }
  return f;
}

absl::StatusOr<double> PredictScore(const SvmModel& model,
                                    std::span<const double> x) {
  if (!model.calibration) {
    return absl::FailedPreconditionError("model is not calibrated");
  }
  ASSIGN_OR_RETURN(double f, DecisionValue(model, x));
  return PlattProbability(*model.calibration, f);
}

}  // namespace sonoreport

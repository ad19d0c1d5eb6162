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

#include "sonoreport/smo_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace sonoreport {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status ValidateProblem(const DualProblem& problem) {
  const size_t n = problem.labels.size();
  if (problem.gram.size() != n || problem.upper_bounds.size() != n) {
    return absl::InvalidArgumentError("dual problem sizes disagree");
  }
  for (size_t i = 0; i < n; ++i) {
    if (problem.labels[i] != 1 && problem.labels[i] != -1) {
      return absl::InvalidArgumentError("labels must be +1 or -1");
    }
    if (!(problem.upper_bounds[i] > 0.0)) {
      return absl::InvalidArgumentError("box bounds must be positive");
    }
  }
  return absl::OkStatus();
}

}  // namespace

double DualObjective(const DualProblem& problem,
                     std::span<const double> alpha) {
  const size_t n = alpha.size();
  double linear = 0.0;
  double quad = 0.0;
  for (size_t i = 0; i < n; ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (size_t j = 0; j < n; ++j) {
      quad += alpha[i] * alpha[j] * problem.labels[i] * problem.labels[j] *
              problem.gram(i, j);
    }
  }
  return linear - 0.5 * quad;
}

absl::StatusOr<DualSolution> SolveSmo(const DualProblem& problem,
                                      const SmoOptions& options) {
  if (absl::Status s = ValidateProblem(problem); !s.ok()) return s;
  const size_t n = problem.labels.size();
  const std::vector<int>& y = problem.labels;
  const std::vector<double>& c = problem.upper_bounds;
  const GramMatrix& k = problem.gram;

  std::vector<double> alpha(n, 0.0);
  // Gradient of the minimisation objective: G = Qa - 1.
  std::vector<double> grad(n, -1.0);

  auto in_up = [&](size_t t) {
    return (y[t] == 1 && alpha[t] < c[t]) || (y[t] == -1 && alpha[t] > 0.0);
  };
  auto in_low = [&](size_t t) {
    return (y[t] == -1 && alpha[t] < c[t]) || (y[t] == 1 && alpha[t] > 0.0);
  };

  int64_t iter = 0;
  bool converged = false;
  for (; iter < options.max_iterations; ++iter) {
    // First choice: maximal violator in I_up.
    double m_up = -kInf;
    size_t i = n;
    for (size_t t = 0; t < n; ++t) {
      if (!in_up(t)) continue;
      const double v = -y[t] * grad[t];
      if (v > m_up) {
        m_up = v;
        i = t;
      }
    }
    // Second choice: largest second-order decrease over I_low.
    double m_low = kInf;
    double best_gain = kInf;
    size_t j = n;
    for (size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = -y[t] * grad[t];
      m_low = std::min(m_low, v);
      if (i == n) continue;
      const double b = m_up - v;
      if (b <= 0.0) continue;
      double a = k(i, i) + k(t, t) - 2.0 * k(i, t);
      if (a <= 0.0) a = kTau;
      const double gain = -(b * b) / a;
      if (gain < best_gain) {
        best_gain = gain;
        j = t;
      }
    }
    if (i == n || j == n || m_up - m_low < options.tol) {
      converged = true;
      break;
    }

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double ci = c[i];
    const double cj = c[j];
    double quad = k(i, i) + k(j, j) - 2.0 * k(i, j);
    if (quad <= 0.0) quad = kTau;

    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > ci - cj) {
        if (alpha[i] > ci) {
          alpha[i] = ci;
          alpha[j] = ci - diff;
        }
      } else if (alpha[j] > cj) {
        alpha[j] = cj;
        alpha[i] = cj + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > ci) {
        if (alpha[i] > ci) {
          alpha[i] = ci;
          alpha[j] = sum - ci;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > cj) {
        if (alpha[j] > cj) {
          alpha[j] = cj;
          alpha[i] = sum - cj;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * k(t, i) * dai + y[j] * k(t, j) * daj);
    }
  }
  if (!converged) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "SMO did not converge within ", options.max_iterations,
        " iterations (tol ", options.tol, ")"));
  }

  // Bias: average over free vectors, else midpoint of the feasible interval.
  double free_sum = 0.0;
  int free_count = 0;
  double lower = -kInf;
  double upper = kInf;
  for (size_t t = 0; t < n; ++t) {
    const double v = -y[t] * grad[t];
    const bool at_lower = alpha[t] <= 0.0;
    const bool at_upper = alpha[t] >= c[t];
    if (!at_lower && !at_upper) {
      free_sum += v;
      ++free_count;
    } else if ((at_lower && y[t] == 1) || (at_upper && y[t] == -1)) {
      lower = std::max(lower, v);
    } else {
      upper = std::min(upper, v);
    }
  }

  DualSolution solution;
  if (free_count > 0) {
    solution.bias = free_sum / free_count;
  } else if (std::isfinite(lower) && std::isfinite(upper)) {
    solution.bias = 0.5 * (lower + upper);
  } else {
    solution.bias = std::isfinite(lower) ? lower : upper;
  }
  solution.objective = DualObjective(problem, alpha);
  solution.alpha = std::move(alpha);
  solution.iterations = iter;
  return solution;
}

}  // namespace sonoreport

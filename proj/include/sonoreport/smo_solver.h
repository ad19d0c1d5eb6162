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

#ifndef SONOREPORT_SMO_SOLVER_H_
#define SONOREPORT_SMO_SOLVER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "sonoreport/kernel.h"

namespace sonoreport {

// Soft-margin SVM dual in minimisation form:
//
//   min  1/2 a'Qa - sum(a)   s.t.  0 <= a_i <= C_i,  y'a = 0
//
// with Q_ij = y_i y_j K_ij.
struct DualProblem {
  GramMatrix gram;
  std::vector<int> labels;           // +1 / -1
  std::vector<double> upper_bounds;  // C_i
};

struct SmoOptions {
  // Stop once the maximal KKT violation (m(a) - M(a)) falls below tol.
  double tol = 1e-3;
  int64_t max_iterations = 100000;
};

struct DualSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  // sum(a) - 1/2 a'Qa, i.e. the dual in its usual maximisation form.
  double objective = 0.0;
  int64_t iterations = 0;
};

// Sequential minimal optimisation with second-order working-set selection.
// Fully deterministic: ties go to the lowest index. Returns
// ResourceExhausted when max_iterations is reached before convergence.
absl::StatusOr<DualSolution> SolveSmo(const DualProblem& problem,
                                      const SmoOptions& options);

double DualObjective(const DualProblem& problem, std::span<const double> alpha);

}  // namespace sonoreport

#endif  // SONOREPORT_SMO_SOLVER_H_

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

#ifndef SONOREPORT_TESTS_ORACLES_AUC_ORACLE_H_
#define SONOREPORT_TESTS_ORACLES_AUC_ORACLE_H_

#include <cstdint>
#include <vector>

namespace sonoreport::oracle {

// Mann-Whitney form of the AUC: the fraction of (positive, negative) pairs
// ordered correctly, ties counted half. Returned as the exact count of
// half-pairs and the denominator 2PN so callers can compare exactly.
struct PairCount {
  int64_t half_pairs = 0;
  int64_t denominator = 0;
  double auc() const {
    return static_cast<double>(half_pairs) / static_cast<double>(denominator);
  }
};

inline PairCount CountPairs(const std::vector<double>& scores,
                            const std::vector<int>& labels) {
  PairCount out;
  int64_t p = 0;
  int64_t n = 0;
  for (int l : labels) (l == 1 ? p : n) += 1;
  out.denominator = 2 * p * n;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] == 1) continue;
      if (scores[i] > scores[j]) out.half_pairs += 2;
      if (scores[i] == scores[j]) out.half_pairs += 1;
    }
  }
  return out;
}

}  // namespace sonoreport::oracle

#endif  // SONOREPORT_TESTS_ORACLES_AUC_ORACLE_H_

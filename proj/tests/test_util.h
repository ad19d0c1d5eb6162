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

#ifndef SONOREPORT_TESTS_TEST_UTIL_H_
#define SONOREPORT_TESTS_TEST_UTIL_H_

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gtest/gtest.h"

#define SONOREPORT_CONCAT_INNER(a, b) a##b
#define SONOREPORT_CONCAT(a, b) SONOREPORT_CONCAT_INNER(a, b)

#define ASSERT_OK(expr)                                  \
  do {                                                   \
    const absl::Status _st = ::sonoreport::ToStatus(expr); \
    ASSERT_TRUE(_st.ok()) << _st;                        \
  } while (0)

#define EXPECT_OK(expr) EXPECT_TRUE((expr).ok()) << ::sonoreport::ToStatus(expr)

#define ASSERT_OK_AND_ASSIGN(lhs, rexpr)                                 \
  ASSERT_OK_AND_ASSIGN_IMPL(SONOREPORT_CONCAT(_statusor_, __LINE__), lhs, \
                            rexpr)
#define ASSERT_OK_AND_ASSIGN_IMPL(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                              \
  ASSERT_TRUE(statusor.ok()) << statusor.status();      \
  lhs = std::move(statusor).value()

namespace sonoreport {

inline absl::Status ToStatus(const absl::Status& s) { return s; }
template <typename T>
absl::Status ToStatus(const absl::StatusOr<T>& s) {
  return s.status();
}

// Fresh empty directory under the test temp root.
inline std::filesystem::path MakeTempDir(const std::string& name) {
  const char* root = std::getenv("TEST_TMPDIR");
  std::filesystem::path base =
      root != nullptr ? std::filesystem::path(root)
                      : std::filesystem::temp_directory_path();
  std::random_device rd;
  std::filesystem::path dir =
      base / ("sonoreport_" + name + "_" + std::to_string(rd()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sonoreport

#endif  // SONOREPORT_TESTS_TEST_UTIL_H_

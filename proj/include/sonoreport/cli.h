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

#ifndef SONOREPORT_CLI_H_
#define SONOREPORT_CLI_H_

#include <ostream>
#include <span>
#include <string>

namespace sonoreport {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand: train-svm, train-fusion, evaluate, generate-reports,
// simulate-data or serve. `args` excludes the program name. Returns 0 on
// success, 2 on a usage error (usage text on `err`) and 1 on a data or
// model error (diagnostic on `err`).
int RunCommand(std::span<const std::string> args, std::ostream& out,
               std::ostream& err);

}  // namespace sonoreport

#endif  // SONOREPORT_CLI_H_

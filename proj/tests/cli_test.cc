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

#include "sonoreport/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "tests/test_util.h"

namespace sonoreport {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using ::testing::StartsWith;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCommand(args, out, err);
  return {code, out.str(), err.str()};
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Metrics table rows keyed by "model/feature", with columns split.
std::map<std::string, std::vector<std::string>> ParseTable(
    const std::string& text) {
  std::map<std::string, std::vector<std::string>> rows;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    if (line.empty()) break;
    std::vector<std::string> cols = absl::StrSplit(line, '\t');
    if (cols.size() == 8 && cols[0] != "model") {
      rows[cols[0] + "/" + cols[1]] = cols;
    }
  }
  return rows;
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(RunCli({}).code, kExitUsage);
  Result unknown = RunCli({"frobnicate"});
  EXPECT_EQ(unknown.code, kExitUsage);
  EXPECT_THAT(unknown.err, StartsWith("error: "));
  EXPECT_EQ(RunCli({"train-svm", "--model-out", "x"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"evaluate", "--predictions", "p", "--threshold", "1.5"}).code,
            kExitUsage);
  EXPECT_EQ(RunCli({"simulate-data", "--out", "x", "--n", "abc"}).code,
            kExitUsage);
  EXPECT_EQ(RunCli({"simulate-data", "--out", "x", "--d", "3"}).code,
            kExitUsage);
  Result help = RunCli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_THAT(help.out + help.err, HasSubstr("generate-reports"));
}

TEST(CliTest, RuntimeErrorsExitOne) {
  const fs::path dir = MakeTempDir("cli_errors");
  Result missing = RunCli({"train-svm", "--data", (dir / "none.jsonl").string(),
                        "--model-out", (dir / "m.json").string()});
  EXPECT_EQ(missing.code, kExitFailure);
  EXPECT_THAT(missing.err, HasSubstr("none.jsonl"));
  EXPECT_EQ(RunCli({"simulate-data", "--out",
                    (dir / "no_such_dir" / "d.jsonl").string()})
                .code,
            kExitFailure);
}

TEST(CliTest, PredictionsFileReproducesConfusionMetrics) {
  const fs::path dir = MakeTempDir("cli_predictions");
  std::ofstream file(dir / "p.jsonl");
  auto emit = [&](int count, int label, int prediction) {
    for (int i = 0; i < count; ++i) {
      file << "{\"model\":\"cnn\",\"feature\":\"malignancy\",\"label\":"
           << label << ",\"prediction\":" << prediction << "}\n";
    }
  };
  emit(180, 1, 1);
  emit(8, 0, 1);
  emit(15, 1, 0);
  emit(187, 0, 0);
  file.close();
  Result r = RunCli({"evaluate", "--predictions", (dir / "p.jsonl").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = ParseTable(r.out);
  ASSERT_EQ(rows.count("cnn/malignancy"), 1u) << r.out;
  const auto& cols = rows.at("cnn/malignancy");
  EXPECT_EQ(cols[2], "390");
  double accuracy, precision, recall, f_beta;
  ASSERT_TRUE(absl::SimpleAtod(cols[3], &accuracy));
  ASSERT_TRUE(absl::SimpleAtod(cols[4], &precision));
  ASSERT_TRUE(absl::SimpleAtod(cols[5], &recall));
  ASSERT_TRUE(absl::SimpleAtod(cols[6], &f_beta));
  EXPECT_NEAR(accuracy, 0.9410, 0.0001);
  EXPECT_NEAR(precision, 0.9574, 0.0001);
  EXPECT_NEAR(recall, 0.9231, 0.0001);
  EXPECT_NEAR(f_beta, 0.9418, 0.001);
  EXPECT_EQ(cols[7], "undefined");
}

class CliPipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(MakeTempDir("cli_pipeline"));
    Result sim = RunCli({"simulate-data", "--out", Path("data.jsonl"), "--n",
                      "300", "--seed", "3"});
    ASSERT_EQ(sim.code, kExitOk) << sim.err;
    for (const char* target : {"malignancy", "shape"}) {
      Result t = RunCli({"train-svm", "--data", Path("data.jsonl"), "--target",
                      target, "--model-out",
                      Path(std::string(target) + ".json")});
      ASSERT_EQ(t.code, kExitOk) << t.err;
    }
    Result f = RunCli({"train-fusion", "--data", Path("data.jsonl"),
                    "--model-out", Path("fused.json")});
    ASSERT_EQ(f.code, kExitOk) << f.err;
  }
  static void TearDownTestSuite() { delete dir_; }

  static std::string Path(const std::string& name) {
    return (*dir_ / name).string();
  }
  static std::vector<std::string> ModelArgs() {
    return {"--model-in", Path("malignancy.json"), "--model-in",
            Path("shape.json"), "--model-in", Path("fused.json")};
  }

  static fs::path* dir_;
};

fs::path* CliPipelineTest::dir_ = nullptr;

TEST_F(CliPipelineTest, SimulateWritesRequestedRecords) {
  const std::string data = ReadFile(Path("data.jsonl"));
  EXPECT_EQ(std::count(data.begin(), data.end(), '\n'), 300);
}

TEST_F(CliPipelineTest, TrainingIsDeterministic) {
  Result t = RunCli({"train-svm", "--data", Path("data.jsonl"), "--target",
                  "malignancy", "--model-out", Path("again.json")});
  ASSERT_EQ(t.code, kExitOk) << t.err;
  EXPECT_EQ(ReadFile(Path("again.json")), ReadFile(Path("malignancy.json")));
}

TEST_F(CliPipelineTest, EvaluateReportsEveryDescriptor) {
  std::vector<std::string> args = {"evaluate", "--data", Path("data.jsonl"),
                                    "--out", Path("metrics.tsv"), "--roc-out",
                                    Path("roc.tsv")};
  for (const std::string& a : ModelArgs()) args.push_back(a);
  Result r = RunCli(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(ReadFile(Path("metrics.tsv")), r.out);
  const auto rows = ParseTable(r.out);
  for (const char* key :
       {"svm/malignancy", "svm/shape", "fusion/fused", "fusion/internal_echo",
        "fusion/posterior_acoustic"}) {
    ASSERT_EQ(rows.count(key), 1u) << key << "\n" << r.out;
    double accuracy = 0;
    ASSERT_TRUE(absl::SimpleAtod(rows.at(key)[3], &accuracy));
    EXPECT_GE(accuracy, 0.8) << key;
  }
  EXPECT_THAT(r.out, HasSubstr("field\tn\tunchanged_rate\n"));
  EXPECT_THAT(r.out, HasSubstr("weighted_average\t"));
  EXPECT_THAT(ReadFile(Path("roc.tsv")),
              StartsWith("model\tfeature\tfpr\ttpr\nsvm\tmalignancy\t0.000000"));
}

TEST_F(CliPipelineTest, GenerateReportsWritesOnePerCase) {
  std::vector<std::string> args = {"generate-reports", "--data",
                                   Path("data.jsonl"), "--split", "all"};
  for (const std::string& a : ModelArgs()) args.push_back(a);
  args.push_back("--out");
  args.push_back(Path("reports"));
  Result r = RunCli(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("wrote 300 reports"));
  const std::string first = ReadFile(*dir_ / "reports" / "syn-000000.txt");
  EXPECT_THAT(first, StartsWith("Breast ultrasound report (preliminary)\n"
                                "Case: syn-000000\n"));
  const std::string jsonl = ReadFile(*dir_ / "reports" / "reports.jsonl");
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 300);

  args.back() = Path("reports2");
  ASSERT_EQ(RunCli(args).code, kExitOk);
  EXPECT_EQ(ReadFile(*dir_ / "reports2" / "reports.jsonl"), jsonl);
}

TEST_F(CliPipelineTest, ModelSetNeedsAllThreeModels) {
  Result r = RunCli({"generate-reports", "--data", Path("data.jsonl"),
                  "--model-in", Path("shape.json"), "--out", Path("x")});
  EXPECT_EQ(r.code, kExitFailure);
}

}  // namespace
}  // namespace sonoreport

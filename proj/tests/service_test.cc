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

#include "sonoreport/service.h"

#include <filesystem>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "sonoreport/model_io.h"
#include "tests/model_fixture.h"
#include "tests/test_util.h"

namespace sonoreport {
namespace {

using Json = nlohmann::json;
using ::testing::HasSubstr;

constexpr size_t kDim = 4;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = MakeTempDir("service");
    store_ = *CaseStore::Open(dir_ / "store");
    artifacts_ = TrainFixtureModels(kDim, 21);
    models_.Swap(*MakeModelSet(artifacts_));
    ServiceOptions options;
    options.clock = [this] { return ++clock_; };
    service_ = std::make_unique<ReviewService>(store_.get(), &models_, options);
  }

  ApiResponse Call(const std::string& method, const std::string& path,
                   const Json& body = nullptr,
                   const std::string& reviewer = "") {
    ApiRequest request;
    request.method = method;
    const size_t q = path.find('?');
    request.path = path.substr(0, q);
    if (q != std::string::npos) {
      const std::string query = path.substr(q + 1);
      const size_t eq = query.find('=');
      request.query[query.substr(0, eq)] = query.substr(eq + 1);
    }
    if (!body.is_null()) request.body = body.dump();
    request.reviewer_id = reviewer;
    return service_->Handle(request);
  }

  // Creates a lesion case whose malignancy score is pinned by an external
  // provider, so routing is known in advance.
  void AddCase(const std::string& id, double malignancy) {
    Json body{{"case_id", id},
              {"laterality", "left"},
              {"features", std::vector<double>(kDim, 0.25)},
              {"external_scores", {{"malignancy", malignancy}}}};
    ApiResponse created = Call("POST", "/cases", body);
    ASSERT_EQ(created.status, 201) << created.body;
    ApiResponse triaged = Call("POST", "/case/" + id + "/triage",
                               Json{{"base_version", 1}, {"triage", "lesion"}});
    ASSERT_EQ(triaged.status, 200) << triaged.body;
  }

  Json Review(const std::string& id, int64_t base, const std::string& verdict,
              const Json& edits, int expect_status) {
    ApiResponse r = Call(
        "POST", "/case/" + id + "/review",
        Json{{"base_version", base}, {"verdict", verdict}, {"edits", edits}},
        "dr-x");
    EXPECT_EQ(r.status, expect_status) << r.body;
    return r.body;
  }

  std::filesystem::path dir_;
  std::unique_ptr<CaseStore> store_;
  std::vector<ModelArtifact> artifacts_;
  ModelRegistry models_;
  int64_t clock_ = 1000;
  std::unique_ptr<ReviewService> service_;
};

TEST_F(ServiceTest, WorklistListsPendingCasesInOrder) {
  AddCase("b", 0.1);
  AddCase("a", 0.1);
  ApiResponse r = Call("GET", "/worklist");
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body["cases"].size(), 2u);
  EXPECT_EQ(r.body["cases"][0]["case_id"], "a");
  EXPECT_EQ(r.body["cases"][1]["case_id"], "b");
  EXPECT_EQ(r.body["cases"][0]["version"], 2);
  EXPECT_EQ(r.body["cases"][0]["triage"], "lesion");
  EXPECT_EQ(Call("GET", "/worklist?state=finalized").body["cases"].size(), 0u);
  ApiResponse bad = Call("GET", "/worklist?state=archived");
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(bad.body["error"]["details"]["field"], "state");
}

TEST_F(ServiceTest, BenignPreliminaryIsCachedAndStable) {
  AddCase("a", 0.1);
  ApiResponse first = Call("GET", "/case/a/preliminary");
  ASSERT_EQ(first.status, 200) << first.body;
  const Json& fields = first.body["report"]["fields"];
  ASSERT_EQ(fields.size(), 6u);
  int predicted = 0;
  int defaults = 0;
  for (const Json& f : fields) {
    predicted += f["provenance"] == "predicted";
    defaults += f["provenance"] == "default";
  }
  EXPECT_EQ(predicted, 3);
  EXPECT_EQ(defaults, 3);
  EXPECT_EQ(first.body["report"]["route"], "benign_auto");
  EXPECT_EQ(first.body["version"], 3);
  EXPECT_EQ(first.body["fingerprint"], models_.Get()->fingerprint);

  ApiResponse second = Call("GET", "/case/a/preliminary");
  EXPECT_EQ(second.body.dump(), first.body.dump());
  EXPECT_EQ(Call("GET", "/worklist?state=preliminary_issued")
                .body["cases"]
                .size(),
            1u);
}

TEST_F(ServiceTest, MalignantPreliminaryHasPlaceholders) {
  AddCase("m", 0.9);
  ApiResponse r = Call("GET", "/case/m/preliminary");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["report"]["route"], "malignant_manual");
  for (const Json& f : r.body["report"]["fields"]) {
    EXPECT_EQ(f["provenance"], "manual_placeholder");
  }
  EXPECT_THAT(r.body["rendered"].get<std::string>(),
              HasSubstr("[enter shape]"));
}

TEST_F(ServiceTest, ReviewFinalizesOnceAndRejectsStaleVersions) {
  AddCase("a", 0.1);
  ApiResponse prelim = Call("GET", "/case/a/preliminary");
  const int64_t version = prelim.body["version"];

  Json stale = Review("a", version - 1, "benign", Json::object(), 409);
  EXPECT_EQ(stale["error"]["code"], "conflict");
  EXPECT_EQ(stale["error"]["details"]["current_version"], version);

  Json done = Review("a", version, "benign",
                     Json{{"internal_echo", "homogeneous"}}, 200);
  EXPECT_EQ(done["case"]["review"], "finalized");
  EXPECT_EQ(done["report"]["reviewer_id"], "dr-x");
  EXPECT_THAT(done["rendered"].get<std::string>(),
              HasSubstr("Conclusion: benign"));

  Json again = Review("a", version, "benign", Json::object(), 409);
  EXPECT_EQ(again["error"]["details"]["current_version"], version + 1);
  Json newer = Review("a", version + 1, "benign", Json::object(), 409);
  EXPECT_EQ(newer["error"]["code"], "conflict");

  ApiResponse report = Call("GET", "/case/a/report");
  ASSERT_EQ(report.status, 200);
  EXPECT_EQ(report.body["report"], done["report"]);
  // The preliminary stays readable after finalization.
  EXPECT_EQ(Call("GET", "/case/a/preliminary").status, 200);
}

TEST_F(ServiceTest, ReviewValidation) {
  AddCase("a", 0.1);
  ApiResponse no_prelim =
      Call("POST", "/case/a/review",
           Json{{"base_version", 2}, {"verdict", "benign"}}, "dr-x");
  EXPECT_EQ(no_prelim.status, 400);

  Call("GET", "/case/a/preliminary");
  ApiResponse no_header = Call("POST", "/case/a/review",
                               Json{{"base_version", 3}, {"verdict", "benign"}});
  EXPECT_EQ(no_header.status, 400);
  EXPECT_EQ(no_header.body["error"]["details"]["field"], "X-Reviewer-Id");

  ApiResponse bad_verdict =
      Call("POST", "/case/a/review",
           Json{{"base_version", 3}, {"verdict", "maybe"}}, "dr-x");
  EXPECT_EQ(bad_verdict.body["error"]["details"]["field"], "verdict");
  ApiResponse no_version = Call("POST", "/case/a/review",
                                Json{{"verdict", "benign"}}, "dr-x");
  EXPECT_EQ(no_version.body["error"]["details"]["field"], "base_version");
  Review("a", 3, "benign", Json{{"texture", "smooth"}}, 400);

  // Retriaging after the preliminary invalidates it.
  ASSERT_EQ(Call("POST", "/case/a/triage",
                 Json{{"base_version", 3}, {"triage", "lesion"}})
                .status,
            200);
  Review("a", 4, "benign", Json::object(), 400);
  ApiResponse refreshed = Call("GET", "/case/a/preliminary");
  EXPECT_EQ(refreshed.body["version"], 5);
  Review("a", 5, "benign", Json::object(), 200);
}

TEST_F(ServiceTest, SummaryAndRocReflectFinalReports) {
  AddCase("a", 0.1);
  AddCase("m", 0.9);
  Call("GET", "/case/a/preliminary");
  Call("GET", "/case/m/preliminary");
  Review("a", 3, "benign", Json{{"internal_echo", "homogeneous"}}, 200);
  Json all_fields = Json::object();
  for (DescriptorField f : kAllDescriptorFields) {
    all_fields[std::string(FieldName(f))] = "described";
  }
  Review("m", 3, "malignant", all_fields, 200);

  ApiResponse summary = Call("GET", "/metrics/summary");
  ASSERT_EQ(summary.status, 200);
  EXPECT_EQ(summary.body["finalized"], 2);
  EXPECT_EQ(summary.body["verdicts"]["benign"], 1);
  EXPECT_EQ(summary.body["verdicts"]["malignant"], 1);
  const Json& eff = summary.body["efficiency"];
  EXPECT_EQ(eff["reports"], 1);
  EXPECT_EQ(eff["fields"], 6);
  EXPECT_EQ(eff["unchanged_fields"], 5);
  EXPECT_DOUBLE_EQ(eff["index"].get<double>(), 5.0 / 6.0);
  ASSERT_EQ(eff["by_field"].size(), 6u);

  ApiResponse one = Call("GET", "/metrics/summary?case_id=m");
  EXPECT_EQ(one.body["finalized"], 1);
  EXPECT_TRUE(one.body["efficiency"]["index"].is_null());

  ApiResponse roc = Call("GET", "/metrics/roc");
  ASSERT_EQ(roc.status, 200);
  EXPECT_EQ(roc.body["positives"], 1);
  EXPECT_EQ(roc.body["negatives"], 1);
  EXPECT_EQ(roc.body["auc"], 1.0);
}

TEST_F(ServiceTest, AdminSwapsModelsAndInvalidatesPreliminaries) {
  AddCase("a", 0.1);
  ApiResponse before = Call("GET", "/case/a/preliminary");
  const std::string old_fp = before.body["fingerprint"];

  std::vector<ModelArtifact> other = TrainFixtureModels(kDim, 22);
  Json paths = Json::array();
  for (size_t i = 0; i < other.size(); ++i) {
    const auto path = dir_ / ("m" + std::to_string(i) + ".json");
    ASSERT_OK(SaveModel(path, other[i]));
    paths.push_back(path.string());
  }
  ApiResponse swapped = Call("POST", "/admin/models", Json{{"paths", paths}});
  ASSERT_EQ(swapped.status, 200) << swapped.body;
  EXPECT_NE(swapped.body["fingerprint"], old_fp);
  EXPECT_EQ(swapped.body["dimension"], kDim);
  EXPECT_EQ(Call("GET", "/admin/models").body, swapped.body);

  ApiResponse after = Call("GET", "/case/a/preliminary");
  EXPECT_EQ(after.body["fingerprint"], swapped.body["fingerprint"]);
  EXPECT_EQ(after.body["version"], 4);

  ApiResponse bad = Call("POST", "/admin/models",
                         Json{{"paths", {(dir_ / "none.json").string()}}});
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(Call("GET", "/admin/models").body["fingerprint"],
            swapped.body["fingerprint"]);
}

TEST_F(ServiceTest, CreateCaseValidatesDimensionAndDuplicates) {
  ApiResponse wrong_dim =
      Call("POST", "/cases", Json{{"case_id", "x"}, {"features", {1.0, 2.0}}});
  EXPECT_EQ(wrong_dim.status, 400);
  ApiResponse ok = Call(
      "POST", "/cases",
      Json{{"case_id", "x"}, {"features", std::vector<double>(kDim, 0.0)}});
  EXPECT_EQ(ok.status, 201);
  EXPECT_EQ(ok.body["case"]["triage"], "pending");
  ApiResponse dup = Call(
      "POST", "/cases",
      Json{{"case_id", "x"}, {"features", std::vector<double>(kDim, 0.0)}});
  EXPECT_EQ(dup.status, 409);
  EXPECT_EQ(Call("POST", "/cases", Json::array()).status, 400);
}

TEST_F(ServiceTest, PendingTriageIsTreatedAsLesion) {
  ASSERT_EQ(Call("POST", "/cases",
                 Json{{"case_id", "p"},
                      {"features", std::vector<double>(kDim, 0.0)},
                      {"external_scores", {{"malignancy", 0.2}}}})
                .status,
            201);
  ApiResponse r = Call("GET", "/case/p/preliminary");
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.body["report"]["route"], "benign_auto");
}

TEST_F(ServiceTest, NormalTriageGivesConclusionOnlyReport) {
  AddCase("n", 0.9);
  ASSERT_EQ(Call("POST", "/case/n/triage",
                 Json{{"base_version", 2}, {"triage", "normal"}})
                .status,
            200);
  ApiResponse r = Call("GET", "/case/n/preliminary");
  EXPECT_EQ(r.body["report"]["route"], "normal_conclusion");
  EXPECT_TRUE(r.body["report"]["fields"].empty());
  Json done = Review("n", 4, "normal", Json::object(), 200);
  EXPECT_THAT(done["rendered"].get<std::string>(),
              HasSubstr("Conclusion: normal"));
}

TEST_F(ServiceTest, RoutingErrors) {
  ApiResponse missing = Call("GET", "/case/zzz");
  EXPECT_EQ(missing.status, 404);
  EXPECT_EQ(missing.body["error"]["code"], "not_found");
  EXPECT_EQ(Call("GET", "/case/zzz/report").status, 404);
  EXPECT_EQ(Call("GET", "/nowhere").status, 404);
  ApiResponse wrong = Call("DELETE", "/worklist");
  EXPECT_EQ(wrong.status, 405);
  EXPECT_EQ(wrong.body["error"]["code"], "validation");
  EXPECT_EQ(Call("GET", "/case/x/review").status, 405);
}

TEST(ServiceNoModelsTest, PreliminaryIsUnavailable) {
  auto store = *CaseStore::Open(MakeTempDir("service_nomodel"));
  ModelRegistry models;
  ReviewService service(store.get(), &models, ServiceOptions{});
  ApiRequest create{"POST", "/cases", {}, R"({"case_id":"a","features":[1]})",
                    ""};
  EXPECT_EQ(service.Handle(create).status, 201);
  ApiResponse r = service.Handle(ApiRequest{"GET", "/case/a/preliminary"});
  EXPECT_EQ(r.status, 503);
  EXPECT_EQ(service.Handle(ApiRequest{"GET", "/admin/models"}).status, 503);
}

TEST(ErrorResponseTest, MapsStatusCodes) {
  EXPECT_EQ(ErrorResponse(absl::NotFoundError("x")).status, 404);
  EXPECT_EQ(ErrorResponse(VersionConflictError("c", 7)).body["error"]
                         ["details"]["current_version"],
            7);
  EXPECT_EQ(ErrorResponse(absl::FailedPreconditionError("x")).status, 400);
  EXPECT_EQ(ErrorResponse(absl::UnavailableError("x")).status, 503);
  ApiResponse internal = ErrorResponse(absl::InternalError("boom"));
  EXPECT_EQ(internal.status, 500);
  EXPECT_EQ(internal.body["error"]["code"], "internal");
  EXPECT_EQ(internal.body["error"]["message"], "boom");
}

}  // namespace
}  // namespace sonoreport

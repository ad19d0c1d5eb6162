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

#include "sonoreport/metrics.h"

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gtest/gtest.h"
#include "sonoreport/report.h"
#include "tests/oracles/auc_oracle.h"
#include "tests/test_util.h"

namespace sonoreport {
namespace {

struct Table5Row {
  const char* model;
  double precision;
  double recall;
  double f_beta;
};

// Published precision, recall and F score of the malignancy models.
constexpr Table5Row kTable5[] = {
    {"transformer", 0.8643, 0.8821, 0.8722},
    {"transformer pretrained", 0.8325, 0.8418, 0.8363},
    {"Resnet50", 0.8821, 0.8821, 0.8821},
    {"Resnet50 pretrained", 0.9581, 0.9385, 0.9492},
    {"transformer + CNN", 0.8895, 0.8667, 0.8791},
    {"transformer + CNN pretrained", 0.9574, 0.9231, 0.9418},
};

TEST(FBetaTest, ReproducesPublishedScores) {
  for (const Table5Row& row : kTable5) {
    std::optional<double> f = FBeta(row.precision, row.recall, kDefaultBeta);
    ASSERT_TRUE(f.has_value());
    EXPECT_NEAR(*f, row.f_beta, 0.001) << row.model;
  }
}

TEST(FBetaTest, BetaOneIsHarmonicMean) {
  EXPECT_DOUBLE_EQ(*FBeta(0.5, 1.0, 1.0), 2.0 * 0.5 / 1.5);
  EXPECT_DOUBLE_EQ(*FBeta(0.7, 0.7, 0.3), 0.7);
}

TEST(FBetaTest, UndefinedWhenBothZero) {
  EXPECT_FALSE(FBeta(0.0, 0.0, 0.9).has_value());
  EXPECT_EQ(*FBeta(0.0, 0.5, 0.9), 0.0);
}

TEST(FBetaTest, MonotoneInPrecisionAndRecall) {
  for (double beta : {0.5, 0.9, 1.0, 2.0}) {
    for (int i = 1; i < 20; ++i) {
      for (int j = 1; j < 20; ++j) {
        const double p = i / 20.0;
        const double r = j / 20.0;
        EXPECT_LT(*FBeta(p, r, beta), *FBeta(p + 0.05, r, beta));
        EXPECT_LT(*FBeta(p, r, beta), *FBeta(p, r + 0.05, beta));
      }
    }
  }
}

TEST(FBetaTest, BelowOneWeightsPrecisionMore) {
  // With beta < 1, swapping a high precision for a high recall lowers F.
  EXPECT_GT(*FBeta(0.9, 0.6, 0.9), *FBeta(0.6, 0.9, 0.9));
}

std::pair<std::vector<int>, std::vector<int>> Expand(const ConfusionMatrix& cm) {
  std::vector<int> pred;
  std::vector<int> label;
  auto add = [&](int64_t count, int p, int l) {
    for (int64_t i = 0; i < count; ++i) {
      pred.push_back(p);
      label.push_back(l);
    }
  };
  add(cm.tp, 1, 1);
  add(cm.fp, 1, 0);
  add(cm.fn, 0, 1);
  add(cm.tn, 0, 0);
  return {pred, label};
}

TEST(ConfusionTest, PublishedMatrix) {
  const ConfusionMatrix expected{180, 8, 15, 187};
  auto [pred, label] = Expand(expected);
  ASSERT_OK_AND_ASSIGN(ConfusionMatrix cm,
                       ComputeConfusionMatrix(pred, label, 1));
  EXPECT_EQ(cm, expected);
  ASSERT_OK_AND_ASSIGN(MetricSet m, ClassificationMetrics(cm));
  EXPECT_NEAR(*m.precision, 0.9574, 0.0001);
  EXPECT_NEAR(*m.recall, 0.9231, 0.0001);
  EXPECT_NEAR(*m.accuracy, 0.9410, 0.0001);
  EXPECT_NEAR(*m.f_beta, 0.9418, 0.001);
  // The exact ratios behind the rounded figures.
  EXPECT_DOUBLE_EQ(*m.precision, 180.0 / 188.0);
  EXPECT_DOUBLE_EQ(*m.recall, 180.0 / 195.0);
  EXPECT_DOUBLE_EQ(*m.accuracy, 367.0 / 390.0);
}

TEST(ConfusionTest, PositiveClassIsSelectable) {
  const std::vector<int> pred = {2, 2, 1, 0};
  const std::vector<int> label = {2, 1, 2, 0};
  ASSERT_OK_AND_ASSIGN(ConfusionMatrix cm, ComputeConfusionMatrix(pred, label, 2));
  EXPECT_EQ(cm, (ConfusionMatrix{1, 1, 1, 1}));
  EXPECT_FALSE(ComputeConfusionMatrix(pred, std::vector<int>{1}, 1).ok());
}

TEST(ConfusionTest, ZeroDenominatorsAreUndefined) {
  ASSERT_OK_AND_ASSIGN(MetricSet m,
                       ClassificationMetrics(ConfusionMatrix{0, 0, 5, 5}));
  EXPECT_FALSE(m.precision.has_value());
  EXPECT_FALSE(m.f_beta.has_value());
  EXPECT_EQ(*m.recall, 0.0);
  EXPECT_EQ(*m.accuracy, 0.5);
  EXPECT_FALSE(ClassificationMetrics(ConfusionMatrix{}).ok());
  EXPECT_FALSE(ClassificationMetrics(ConfusionMatrix{1, 1, 1, 1}, 0.0).ok());
}

TEST(RocTest, MatchesPairCountingExactly) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> n_dist(2, 12);
  std::uniform_int_distribution<int> level(0, 4);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = n_dist(rng);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
      scores[i] = level(rng) / 4.0;  // coarse grid forces ties
      labels[i] = i == 0 ? 1 : i == 1 ? 0 : static_cast<int>(rng() % 2);
    }
    ASSERT_OK_AND_ASSIGN(RocCurve curve, ComputeRoc(scores, labels));
    EXPECT_EQ(curve.auc, oracle::CountPairs(scores, labels).auc());
  }
}

TEST(RocTest, CurveRunsFromOriginToOne) {
  const std::vector<double> s = {0.9, 0.8, 0.8, 0.3, 0.1};
  const std::vector<int> l = {1, 0, 1, 0, 0};
  ASSERT_OK_AND_ASSIGN(RocCurve curve, ComputeRoc(s, l));
  ASSERT_GE(curve.points.size(), 2u);
  EXPECT_EQ(curve.points.front().fpr, 0.0);
  EXPECT_EQ(curve.points.front().tpr, 0.0);
  EXPECT_EQ(curve.points.back().fpr, 1.0);
  EXPECT_EQ(curve.points.back().tpr, 1.0);
  for (size_t i = 1; i < curve.points.size(); ++i) {
    EXPECT_GE(curve.points[i].fpr, curve.points[i - 1].fpr);
    EXPECT_GE(curve.points[i].tpr, curve.points[i - 1].tpr);
  }
  // Four distinct scores, plus the origin.
  EXPECT_EQ(curve.points.size(), 5u);
  EXPECT_EQ(curve.positives, 2);
  EXPECT_EQ(curve.negatives, 3);
}

TEST(RocTest, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> s(40);
  std::vector<double> t(40);
  std::vector<int> l(40);
  for (int i = 0; i < 40; ++i) {
    l[i] = i % 3 == 0 ? 1 : 0;
    s[i] = normal(rng) + l[i];
    t[i] = std::exp(3.0 * s[i]) + 7.0;
  }
  ASSERT_OK_AND_ASSIGN(RocCurve a, ComputeRoc(s, l));
  ASSERT_OK_AND_ASSIGN(RocCurve b, ComputeRoc(t, l));
  EXPECT_EQ(a.auc, b.auc);
}

TEST(RocTest, ExtremesAndErrors) {
  ASSERT_OK_AND_ASSIGN(RocCurve perfect,
                       ComputeRoc(std::vector<double>{0.9, 0.1},
                                  std::vector<int>{1, 0}));
  EXPECT_EQ(perfect.auc, 1.0);
  ASSERT_OK_AND_ASSIGN(RocCurve tied, ComputeRoc(std::vector<double>{0.5, 0.5},
                                                 std::vector<int>{1, 0}));
  EXPECT_EQ(tied.auc, 0.5);
  EXPECT_FALSE(ComputeRoc(std::vector<double>{0.1, 0.2},
                          std::vector<int>{1, 1})
                   .ok());
  EXPECT_FALSE(ComputeRoc(std::vector<double>{0.1, 0.2},
                          std::vector<int>{1, 2})
                   .ok());
}

TEST(WeightedAverageTest, PublishedEfficiencyFigures) {
  std::vector<WeightedEntry> entries;
  constexpr std::pair<double, int64_t> kPredictedFields[] = {
      {0.8331, 184}, {0.8833, 190}, {0.7247, 189}};
  for (auto [v, n] : kPredictedFields) {
    ASSERT_OK_AND_ASSIGN(WeightedEntry e, WeightedEntry::Create(v, n));
    entries.push_back(e);
  }
  ASSERT_OK_AND_ASSIGN(double predicted, WeightedAverage(entries));
  EXPECT_NEAR(predicted, 0.8137, 0.0005);
  for (int i = 0; i < 3; ++i) {
    ASSERT_OK_AND_ASSIGN(WeightedEntry e, WeightedEntry::Create(1.0, 190));
    entries.push_back(e);
  }
  ASSERT_OK_AND_ASSIGN(double all, WeightedAverage(entries));
  EXPECT_NEAR(all, 0.9074, 0.0005);
}

TEST(WeightedAverageTest, RejectsBadEntries) {
  EXPECT_FALSE(WeightedEntry::Create(1.2, 10).ok());
  EXPECT_FALSE(WeightedEntry::Create(-0.1, 10).ok());
  EXPECT_FALSE(WeightedEntry::Create(0.5, 0).ok());
  EXPECT_FALSE(WeightedAverage(std::vector<WeightedEntry>{}).ok());
}

FinalReport BenignFinal(const std::string& id,
                        std::map<std::string, std::string> edits) {
  CaseRecord record;
  record.case_id = id;
  record.triage = Triage::kLesion;
  PreliminaryInputs inputs;
  inputs.shape = Shape::kOvalRound;
  inputs.fused = *FusedPredictionFromScores(std::array<double, 3>{0.1, 0.1, 0.8});
  inputs.verdict_score = 0.2;
  PreliminaryReport prelim = *GeneratePreliminary(record, inputs);
  ReviewSubmission submission;
  submission.edits = std::move(edits);
  submission.verdict = Verdict::kBenign;
  submission.base_version = 1;
  submission.reviewer_id = "r";
  return *ApplyReview(prelim, submission, 1);
}

TEST(EfficiencyTest, CountsUnchangedAutoFilledFields) {
  std::vector<FinalReport> reports = {BenignFinal("a", {})};
  ASSERT_OK_AND_ASSIGN(double untouched, EfficiencyIndex(reports));
  EXPECT_EQ(untouched, 1.0);
  reports.push_back(BenignFinal("b", {{"internal_echo", "homogeneous"}}));
  ASSERT_OK_AND_ASSIGN(double one_edit, EfficiencyIndex(reports));
  EXPECT_DOUBLE_EQ(one_edit, 11.0 / 12.0);
  ASSERT_OK_AND_ASSIGN(auto by_field, EfficiencyByField(reports));
  ASSERT_EQ(by_field.size(), 6u);
  std::vector<WeightedEntry> entries;
  for (const auto& [name, entry] : by_field) {
    EXPECT_EQ(entry.n(), 2);
    EXPECT_EQ(entry.value(), name == "internal_echo" ? 0.5 : 1.0);
    entries.push_back(entry);
  }
  ASSERT_OK_AND_ASSIGN(double pooled, WeightedAverage(entries));
  EXPECT_NEAR(pooled, one_edit, 1e-12);
}

TEST(EfficiencyTest, OnlyBenignAutoReportsAreEligible) {
  EXPECT_EQ(EfficiencyIndex(std::vector<FinalReport>{}).status().code(),
            absl::StatusCode::kInvalidArgument);
  FinalReport malignant = BenignFinal("m", {});
  malignant.verdict = Verdict::kMalignant;
  EXPECT_EQ(EfficiencyIndex(std::vector<FinalReport>{malignant}).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(FormatTest, MetricsTableLayout) {
  MetricsRow row;
  row.model = "svm";
  row.feature = "shape";
  row.n = 4;
  row.metrics.accuracy = 0.75;
  row.metrics.recall = 0.5;
  const std::string table = FormatMetricsTable(std::vector<MetricsRow>{row});
  EXPECT_EQ(table,
            "model\tfeature\tn\taccuracy\tprecision\trecall\tf_beta\tauc\n"
            "svm\tshape\t4\t0.750000\tundefined\t0.500000\tundefined\t"
            "undefined\n");
}

}  // namespace
}  // namespace sonoreport

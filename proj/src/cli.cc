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

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "sonoreport/case_store.h"
#include "sonoreport/evaluation.h"
#include "sonoreport/http_server.h"
#include "sonoreport/json_codec.h"
#include "sonoreport/model_io.h"
#include "sonoreport/ovr.h"
#include "sonoreport/pipeline.h"
#include "sonoreport/service.h"
#include "sonoreport/status_macros.h"
#include "sonoreport/synthetic.h"

namespace sonoreport {
namespace {

using Json = nlohmann::json;

struct SimulateFlags {
  std::string out;
  int64_t n = 500;
  size_t d = 16;
  double noise = 0.05;
  uint64_t seed = 0;
  bool no_rule = false;
};

struct TrainFlags {
  std::string data;
  std::string model_out;
  std::string target = "malignancy";
  std::string kernel = "linear";
  double c = 1.0;
  double gamma = 0.0;
  double tol = 1e-3;
};

struct EvaluateFlags {
  std::string data;
  std::vector<std::string> model_in;
  std::string predictions;
  std::string split = "test";
  double beta = kDefaultBeta;
  double threshold = kDefaultThreshold;
  std::string out;
  std::string roc_out;
};

struct ReportFlags {
  std::string data;
  std::vector<std::string> model_in;
  std::string split = "test";
  double threshold = kDefaultThreshold;
  std::string out;
};

struct ServeFlags {
  std::string store;
  std::vector<std::string> model_in;
  std::string host = "127.0.0.1";
  int port = 8080;
  double threshold = kDefaultThreshold;
};

const CLI::Validator kOpenUnit(
    [](const std::string& s) -> std::string {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(s, v) || !(v > 0.0 && v < 1.0)) {
        return "must lie strictly between 0 and 1";
      }
      return "";
    },
    "(0,1)");

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("cannot write ", path.string()));
  }
  out << content;
  out.close();
  if (!out) {
    return absl::UnavailableError(absl::StrCat("write failed: ", path.string()));
  }
  return absl::OkStatus();
}

absl::StatusOr<LoadedDataset> LoadAndReport(const std::string& path,
                                            std::ostream& err) {
  ASSIGN_OR_RETURN(LoadedDataset dataset, LoadDataset(path));
  for (const RowDiagnostic& d : dataset.rejected) {
    err << "warning: " << path << " line " << d.line << ": " << d.message
        << "\n";
  }
  return dataset;
}

std::vector<std::filesystem::path> Paths(const std::vector<std::string>& in) {
  return {in.begin(), in.end()};
}

absl::Status Simulate(const SimulateFlags& flags, std::ostream& out) {
  SyntheticConfig config;
  config.n = flags.n;
  config.d = flags.d;
  config.noise = flags.noise;
  config.enforce_rule = !flags.no_rule;
  ASSIGN_OR_RETURN(std::vector<DatasetRecord> records,
                   SynthesizeDataset(config, flags.seed));
  RETURN_IF_ERROR(WriteDataset(flags.out, records));
  std::map<Split, int64_t> counts;
  for (const DatasetRecord& r : records) ++counts[r.split];
  out << "wrote " << records.size() << " records to " << flags.out << " (";
  bool first = true;
  for (const auto& [split, count] : counts) {
    out << (first ? "" : ", ") << SplitName(split) << " " << count;
    first = false;
  }
  out << ")\n";
  return absl::OkStatus();
}

absl::StatusOr<TrainConfig> MakeTrainConfig(
    const TrainFlags& flags, std::span<const FeatureVector> samples) {
  TrainConfig config;
  config.c = flags.c;
  config.tol = flags.tol;
  ASSIGN_OR_RETURN(KernelKind kind, ParseKernelKind(flags.kernel));
  if (kind == KernelKind::kRbf) {
    config.kernel = KernelSpec::Rbf(
        flags.gamma > 0.0 ? flags.gamma : DefaultRbfGamma(samples));
  }
  RETURN_IF_ERROR(config.Validate());
  return config;
}

absl::Status TrainBinary(const TrainFlags& flags, std::ostream& out,
                         std::ostream& err) {
  ASSIGN_OR_RETURN(Target target, ParseTarget(flags.target));
  ASSIGN_OR_RETURN(LoadedDataset dataset, LoadAndReport(flags.data, err));
  std::vector<FeatureVector> samples;
  std::vector<int> labels;
  for (const DatasetRecord* r :
       SelectLabeled(dataset.records, Split::kTrain, target)) {
    samples.push_back(r->features);
    labels.push_back(*TargetClassId(r->labels, target) == 1 ? 1 : -1);
  }
  if (samples.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "no training records labeled for ", TargetName(target)));
  }
  ASSIGN_OR_RETURN(TrainConfig config, MakeTrainConfig(flags, samples));
  ASSIGN_OR_RETURN(SvmModel model, TrainSvm(samples, labels, config));
  int64_t correct = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    ASSIGN_OR_RETURN(double f, DecisionValue(model, samples[i].values));
    if ((f >= 0.0 ? 1 : -1) == labels[i]) ++correct;
  }
  RETURN_IF_ERROR(SaveModel(flags.model_out, ModelArtifact{target, model}));
  char acc[32];
  std::snprintf(acc, sizeof(acc), "%.4f",
                static_cast<double>(correct) / samples.size());
  out << "trained " << TargetName(target) << " svm on " << samples.size()
      << " records: " << model.support_vectors.size()
      << " support vectors, training accuracy " << acc << "\n";
  return absl::OkStatus();
}

absl::Status TrainFusion(const TrainFlags& flags, std::ostream& out,
                         std::ostream& err) {
  ASSIGN_OR_RETURN(LoadedDataset dataset, LoadAndReport(flags.data, err));
  std::vector<FeatureVector> samples;
  std::vector<int> labels;
  for (const DatasetRecord* r :
       SelectLabeled(dataset.records, Split::kTrain, Target::kFused)) {
    samples.push_back(r->features);
    labels.push_back(*TargetClassId(r->labels, Target::kFused));
  }
  if (samples.empty()) {
    return absl::InvalidArgumentError("no training records with fused labels");
  }
  ASSIGN_OR_RETURN(TrainConfig config, MakeTrainConfig(flags, samples));
  ASSIGN_OR_RETURN(OvrModel model, TrainOvr(samples, labels,
                                            FusedClass::kNumClasses, config));
  int64_t correct = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    ASSIGN_OR_RETURN(int predicted, OvrPredict(model, samples[i].values));
    if (predicted == labels[i]) ++correct;
  }
  RETURN_IF_ERROR(
      SaveModel(flags.model_out, ModelArtifact{Target::kFused, model}));
  char acc[32];
  std::snprintf(acc, sizeof(acc), "%.4f",
                static_cast<double>(correct) / samples.size());
  out << "trained fused one-vs-rest model on " << samples.size()
      << " records: training accuracy " << acc << "\n";
  return absl::OkStatus();
}

// Rows of {"model", "feature", "label", "prediction", "score"?}, grouped by
// (model, feature) in order of first appearance.
absl::StatusOr<std::vector<MetricsRow>> RowsFromPredictions(
    const std::string& path, double beta, std::vector<RocExport>* rocs) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  struct Group {
    std::string model;
    std::string feature;
    std::vector<int> labels;
    std::vector<int> predictions;
    std::vector<double> scores;
    bool all_scored = true;
  };
  std::vector<Group> groups;
  std::string line;
  int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json row = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    auto bad = [&](absl::string_view why) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, " line ", line_no, ": ", why));
    };
    if (row.is_discarded() || !row.is_object()) return bad("not a JSON object");
    if (!row.contains("model") || !row["model"].is_string() ||
        !row.contains("feature") || !row["feature"].is_string()) {
      return bad("missing model or feature");
    }
    if (!row.contains("label") || !row["label"].is_number_integer() ||
        !row.contains("prediction") || !row["prediction"].is_number_integer()) {
      return bad("label and prediction must be integers");
    }
    const int label = row["label"].get<int>();
    const int prediction = row["prediction"].get<int>();
    if ((label != 0 && label != 1) || (prediction != 0 && prediction != 1)) {
      return bad("label and prediction must be 0 or 1");
    }
    const std::string model = row["model"].get<std::string>();
    const std::string feature = row["feature"].get<std::string>();
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.model == model && g.feature == feature;
    });
    if (it == groups.end()) {
      Group group;
      group.model = model;
      group.feature = feature;
      groups.push_back(std::move(group));
      it = std::prev(groups.end());
    }
    it->labels.push_back(label);
    it->predictions.push_back(prediction);
    if (auto s = row.find("score"); s != row.end() && s->is_number()) {
      it->scores.push_back(s->get<double>());
    } else {
      it->all_scored = false;
    }
  }
  std::vector<MetricsRow> rows;
  for (const Group& g : groups) {
    MetricsRow row;
    row.model = g.model;
    row.feature = g.feature;
    row.n = static_cast<int64_t>(g.labels.size());
    ASSIGN_OR_RETURN(ConfusionMatrix cm,
                     ComputeConfusionMatrix(g.predictions, g.labels, 1));
    ASSIGN_OR_RETURN(row.metrics, ClassificationMetrics(cm, beta));
    if (g.all_scored && cm.tp + cm.fn > 0 && cm.fp + cm.tn > 0) {
      ASSIGN_OR_RETURN(RocCurve curve, ComputeRoc(g.scores, g.labels));
      row.auc = curve.auc;
      rocs->push_back({g.model, g.feature, std::move(curve)});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

absl::Status Evaluate(const EvaluateFlags& flags, std::ostream& out,
                      std::ostream& err) {
  if (flags.beta <= 0.0) return absl::InvalidArgumentError("--beta must be > 0");
  std::vector<MetricsRow> rows;
  std::vector<RocExport> rocs;
  std::string efficiency;
  if (!flags.predictions.empty()) {
    ASSIGN_OR_RETURN(rows,
                     RowsFromPredictions(flags.predictions, flags.beta, &rocs));
  } else {
    if (flags.data.empty() || flags.model_in.empty()) {
      return absl::InvalidArgumentError(
          "evaluate needs --data and --model-in, or --predictions");
    }
    ASSIGN_OR_RETURN(Split split, ParseSplit(flags.split));
    ASSIGN_OR_RETURN(LoadedDataset dataset, LoadAndReport(flags.data, err));
    std::vector<ModelArtifact> artifacts;
    for (const std::string& path : flags.model_in) {
      ASSIGN_OR_RETURN(ModelArtifact artifact, LoadModel(path));
      ASSIGN_OR_RETURN(std::vector<MetricsRow> model_rows,
                       EvaluateModel(artifact, dataset.records, split,
                                     flags.threshold, flags.beta, &rocs));
      rows.insert(rows.end(), model_rows.begin(), model_rows.end());
      artifacts.push_back(std::move(artifact));
    }
    // With a full model set, also simulate the reviewer on benign cases.
    absl::StatusOr<ModelSet> models = MakeModelSet(artifacts);
    if (models.ok()) {
      ASSIGN_OR_RETURN(ScriptedReview review,
                       RunScriptedReview(*models, dataset.records, split,
                                         flags.threshold));
      ASSIGN_OR_RETURN(double index, EfficiencyIndex(review.finals));
      ASSIGN_OR_RETURN(auto by_field, EfficiencyByField(review.finals));
      efficiency = FormatEfficiencyTable(by_field, index);
    }
  }
  std::string table = FormatMetricsTable(rows);
  if (!efficiency.empty()) absl::StrAppend(&table, "\n", efficiency);
  out << table;
  if (!flags.out.empty()) RETURN_IF_ERROR(WriteFile(flags.out, table));
  if (!flags.roc_out.empty()) {
    std::string roc = FormatRocHeader();
    for (const RocExport& r : rocs) {
      absl::StrAppend(&roc, FormatRocRows(r.model, r.feature, r.curve));
    }
    RETURN_IF_ERROR(WriteFile(flags.roc_out, roc));
  }
  return absl::OkStatus();
}

absl::Status CheckFileName(const std::string& case_id) {
  if (case_id.empty() || case_id == "." || case_id == ".." ||
      case_id.find('/') != std::string::npos ||
      case_id.find('\0') != std::string::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("case id \"", case_id, "\" is not usable as a file name"));
  }
  return absl::OkStatus();
}

absl::Status GenerateReports(const ReportFlags& flags, std::ostream& out,
                             std::ostream& err) {
  std::optional<Split> split;
  if (flags.split != "all") {
    ASSIGN_OR_RETURN(split, ParseSplit(flags.split));
  }
  ASSIGN_OR_RETURN(ModelSet models, LoadModelSet(Paths(flags.model_in)));
  ASSIGN_OR_RETURN(LoadedDataset dataset, LoadAndReport(flags.data, err));
  const std::filesystem::path dir(flags.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  std::string jsonl;
  int64_t count = 0;
  for (const DatasetRecord& r : dataset.records) {
    if (split && r.split != *split) continue;
    RETURN_IF_ERROR(CheckFileName(r.case_id));
    ASSIGN_OR_RETURN(PreliminaryReport report,
                     BuildPreliminary(models, CaseFromDatasetRecord(r),
                                      flags.threshold, std::nullopt,
                                      /*now_ms=*/0));
    RETURN_IF_ERROR(
        WriteFile(dir / (r.case_id + ".txt"), RenderReport(report)));
    absl::StrAppend(&jsonl, PreliminaryToJson(report).dump(), "\n");
    ++count;
  }
  RETURN_IF_ERROR(WriteFile(dir / "reports.jsonl", jsonl));
  out << "wrote " << count << " reports to " << dir.string() << "\n";
  return absl::OkStatus();
}

absl::Status Serve(const ServeFlags& flags, std::ostream& out) {
  ASSIGN_OR_RETURN(std::unique_ptr<CaseStore> store,
                   CaseStore::Open(flags.store));
  ModelRegistry registry;
  if (!flags.model_in.empty()) {
    ASSIGN_OR_RETURN(ModelSet models, LoadModelSet(Paths(flags.model_in)));
    registry.Swap(std::move(models));
  }
  ServiceOptions options;
  options.threshold = flags.threshold;
  ReviewService service(store.get(), &registry, options);
  HttpServer server(&service);
  ASSIGN_OR_RETURN(int port, server.Bind(flags.host, flags.port));

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  absl::Status serve_status;
  std::thread worker([&] { serve_status = server.Serve(); });
  server.WaitUntilReady();
  out << "listening on " << flags.host << ":" << port << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server.Stop();
  worker.join();
  return serve_status;
}

}  // namespace

int RunCommand(std::span<const std::string> args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Breast ultrasound BI-RADS report pipeline", "sonoreport"};
  app.require_subcommand(1);

  SimulateFlags simulate;
  CLI::App* sim = app.add_subcommand("simulate-data", "Write a synthetic dataset");
  sim->add_option("--out", simulate.out, "Output dataset file")->required();
  sim->add_option("--n", simulate.n, "Number of records")
      ->check(CLI::PositiveNumber);
  sim->add_option("--d", simulate.d, "Feature dimension (>= 4)")
      ->check(CLI::Range(4, 1 << 16));
  sim->add_option("--noise", simulate.noise, "Label flip probability")
      ->check(CLI::Range(0.0, 0.499999));
  sim->add_option("--seed", simulate.seed, "Random seed");
  sim->add_flag("--no-rule", simulate.no_rule,
                "Do not enforce enhancement => anechoic");

  TrainFlags train;
  auto add_train_flags = [&train](CLI::App* cmd) {
    cmd->add_option("--data", train.data, "Dataset file")->required();
    cmd->add_option("--model-out", train.model_out, "Model file to write")
        ->required();
    cmd->add_option("--kernel", train.kernel, "linear or rbf")
        ->check(CLI::IsMember({"linear", "rbf"}));
    cmd->add_option("--c", train.c, "Box constraint")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--gamma", train.gamma,
                    "RBF width (default 1 / (d * feature variance))")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--tol", train.tol, "KKT tolerance")
        ->check(CLI::PositiveNumber);
  };
  CLI::App* train_svm =
      app.add_subcommand("train-svm", "Train a binary descriptor SVM");
  add_train_flags(train_svm);
  train_svm->add_option("--target", train.target, "Label to predict")
      ->check(CLI::IsMember(
          {"malignancy", "shape", "internal_echo", "posterior_acoustic"}));
  CLI::App* train_fusion = app.add_subcommand(
      "train-fusion", "Train the fused echo/posterior one-vs-rest model");
  add_train_flags(train_fusion);

  EvaluateFlags evaluate;
  CLI::App* eval = app.add_subcommand("evaluate", "Write the metrics table");
  eval->add_option("--data", evaluate.data, "Dataset file");
  eval->add_option("--model-in", evaluate.model_in, "Model file (repeatable)");
  eval->add_option("--predictions", evaluate.predictions,
                   "Precomputed predictions instead of models");
  eval->add_option("--split", evaluate.split, "Split to evaluate")
      ->check(CLI::IsMember({"train", "validation", "test"}));
  eval->add_option("--beta", evaluate.beta, "F-beta weight")
      ->check(CLI::PositiveNumber);
  eval->add_option("--threshold", evaluate.threshold, "Malignancy threshold")
      ->check(kOpenUnit);
  eval->add_option("--out", evaluate.out, "Metrics table file");
  eval->add_option("--roc-out", evaluate.roc_out, "ROC points file");

  ReportFlags reports;
  CLI::App* gen = app.add_subcommand(
      "generate-reports", "Render one preliminary report per case");
  gen->add_option("--data", reports.data, "Dataset file")->required();
  gen->add_option("--model-in", reports.model_in,
                  "Malignancy, shape and fused model files")
      ->required();
  gen->add_option("--split", reports.split, "Split to report on, or all")
      ->check(CLI::IsMember({"train", "validation", "test", "all"}));
  gen->add_option("--threshold", reports.threshold, "Malignancy threshold")
      ->check(kOpenUnit);
  gen->add_option("--out", reports.out, "Output directory")->required();

  ServeFlags serve;
  CLI::App* srv = app.add_subcommand("serve", "Run the review service");
  srv->add_option("--store", serve.store, "Store directory")->required();
  srv->add_option("--model-in", serve.model_in, "Model files to load");
  srv->add_option("--host", serve.host, "Listen address");
  srv->add_option("--port", serve.port, "Listen port (0 picks one)")
      ->check(CLI::Range(0, 65535));
  srv->add_option("--threshold", serve.threshold, "Malignancy threshold")
      ->check(kOpenUnit);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  absl::Status status;
  if (sim->parsed()) {
    status = Simulate(simulate, out);
  } else if (train_svm->parsed()) {
    status = TrainBinary(train, out, err);
  } else if (train_fusion->parsed()) {
    status = TrainFusion(train, out, err);
  } else if (eval->parsed()) {
    status = Evaluate(evaluate, out, err);
  } else if (gen->parsed()) {
    status = GenerateReports(reports, out, err);
  } else if (srv->parsed()) {
    status = Serve(serve, out);
  }
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace sonoreport

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

#include "sonoreport/synthetic.h"

#include <cmath>
#include <cstdio>
#include <random>

#include "absl/strings/str_cat.h"

namespace sonoreport {
namespace {

constexpr double kBinaryOffset = 3.0;
constexpr double kFusedSpacing = 6.0;
constexpr double kHomogeneousOffset = 3.0;
constexpr size_t kNumDirections = 4;

using Direction = std::vector<double>;

bool InUnitInterval(double p) { return p >= 0.0 && p <= 1.0; }

// Orthonormal directions from seeded Gaussian draws (Gram-Schmidt).
std::vector<Direction> ClassDirections(size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Direction> dirs;
  while (dirs.size() < kNumDirections) {
    Direction v(d);
    for (double& x : v) x = normal(rng);
    for (const Direction& u : dirs) {
      double dot = 0.0;
      for (size_t i = 0; i < d; ++i) dot += v[i] * u[i];
      for (size_t i = 0; i < d; ++i) v[i] -= dot * u[i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (double& x : v) x /= norm;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

void AddScaled(const Direction& dir, double scale, std::vector<double>* x) {
  for (size_t i = 0; i < x->size(); ++i) (*x)[i] += scale * dir[i];
}

}  // namespace

absl::Status SyntheticConfig::Validate() const {
  if (n <= 0) return absl::InvalidArgumentError("n must be positive");
  if (d < kNumDirections) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension must be at least ", kNumDirections));
  }
  if (!(noise >= 0.0 && noise < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise must lie in [0, 0.5), got ", noise));
  }
  if (!InUnitInterval(priors.malignant) || !InUnitInterval(priors.oval_round) ||
      !InUnitInterval(priors.enhancement) || !InUnitInterval(priors.anechoic)) {
    return absl::InvalidArgumentError("label priors must lie in [0, 1]");
  }
  if (enforce_rule && priors.anechoic < priors.enhancement) {
    return absl::InvalidArgumentError(
        "with the enhancement rule, P(anechoic) must be >= P(enhancement)");
  }
  if (!(train_fraction >= 0.0 && validation_fraction >= 0.0 &&
        train_fraction + validation_fraction <= 1.0)) {
    return absl::InvalidArgumentError("invalid split fractions");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<DatasetRecord>> SynthesizeDataset(
    const SyntheticConfig& config, uint64_t seed) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  std::mt19937_64 rng(seed);
  const std::vector<Direction> dirs = ClassDirections(config.d, rng);
  const Direction& malignancy_dir = dirs[0];
  const Direction& shape_dir = dirs[1];
  const Direction& fused_axis = dirs[2];
  const Direction& homogeneous_axis = dirs[3];

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto bernoulli = [&](double p) { return uniform(rng) < p; };

  // P(anechoic | no posterior features) keeps the anechoic marginal on
  // target when enhancement forces anechoic.
  const double anechoic_given_plain =
      config.priors.enhancement >= 1.0
          ? 0.0
          : (config.priors.anechoic - config.priors.enhancement) /
                (1.0 - config.priors.enhancement);

  std::vector<DatasetRecord> records;
  records.reserve(config.n);
  for (int64_t k = 0; k < config.n; ++k) {
    const bool malignant = bernoulli(config.priors.malignant);
    const bool oval = bernoulli(config.priors.oval_round);
    const bool enhancement = bernoulli(config.priors.enhancement);
    bool anechoic;
    if (config.enforce_rule) {
      anechoic = enhancement || bernoulli(anechoic_given_plain);
    } else {
      anechoic = bernoulli(config.priors.anechoic);
    }

    std::vector<double> x(config.d);
    for (double& v : x) v = normal(rng);
    AddScaled(malignancy_dir, malignant ? kBinaryOffset : -kBinaryOffset, &x);
    AddScaled(shape_dir, oval ? kBinaryOffset : -kBinaryOffset, &x);
    AddScaled(fused_axis,
              enhancement ? kFusedSpacing : (anechoic ? -kFusedSpacing : 0.0),
              &x);
    if (!anechoic) AddScaled(homogeneous_axis, kHomogeneousOffset, &x);

    // Observed labels.
    bool obs_malignant = malignant;
    bool obs_oval = oval;
    bool obs_enhancement = enhancement;
    bool obs_anechoic = anechoic;
    if (bernoulli(config.noise)) obs_malignant = !obs_malignant;
    if (bernoulli(config.noise)) obs_oval = !obs_oval;
    if (config.enforce_rule) {
      if (bernoulli(config.noise)) {
        // Move to one of the two other admissible classes.
        const int current = !enhancement ? (anechoic ? 2 : 1) : 0;
        const int shift = bernoulli(0.5) ? 1 : 2;
        const int next = (current + shift) % 3;
        obs_enhancement = next == 0;
        obs_anechoic = next != 1;
      }
    } else {
      if (bernoulli(config.noise)) obs_enhancement = !obs_enhancement;
      if (bernoulli(config.noise)) obs_anechoic = !obs_anechoic;
    }

    const double split_draw = uniform(rng);
    DatasetRecord record;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%06lld", static_cast<long long>(k));
    record.case_id = id;
    record.features = FeatureVector{std::move(x), FeatureSource::kSynthetic};
    record.source = "synthetic";
    record.split = split_draw < config.train_fraction ? Split::kTrain
                   : split_draw < config.train_fraction +
                                      config.validation_fraction
                       ? Split::kValidation
                       : Split::kTest;
    record.labels.malignancy =
        obs_malignant ? Malignancy::kMalignant : Malignancy::kBenign;
    record.labels.shape = obs_oval ? Shape::kOvalRound : Shape::kIrregular;
    record.labels.posterior = obs_enhancement
                                  ? PosteriorAcoustic::kEnhancement
                                  : PosteriorAcoustic::kNoPosteriorFeatures;
    record.labels.internal_echo =
        obs_anechoic ? InternalEcho::kAnechoic : InternalEcho::kHomogeneous;
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace sonoreport

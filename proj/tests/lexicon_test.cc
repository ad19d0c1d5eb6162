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

#include "sonoreport/lexicon.h"

#include <set>
#include <string>

#include "gtest/gtest.h"
#include "tests/test_util.h"

namespace sonoreport {
namespace {

TEST(LexiconTest, TermAndTokenRoundTripForEveryValue) {
  for (const DescriptorValue& value : AllDescriptorValues()) {
    const DescriptorField field = FieldOf(value);
    ASSERT_OK_AND_ASSIGN(DescriptorValue from_term,
                         ParseDescriptorTerm(field, DescriptorTerm(value)));
    EXPECT_EQ(from_term, value);
    ASSERT_OK_AND_ASSIGN(DescriptorValue from_token,
                         ParseDescriptorToken(field, DescriptorToken(value)));
    EXPECT_EQ(from_token, value);
  }
}

TEST(LexiconTest, TermsAreDistinctWithinEachField) {
  std::set<std::pair<DescriptorField, std::string>> seen;
  for (const DescriptorValue& value : AllDescriptorValues()) {
    EXPECT_TRUE(
        seen.emplace(FieldOf(value), std::string(DescriptorTerm(value))).second);
  }
  EXPECT_EQ(seen.size(), 9u);
}

TEST(LexiconTest, KnownPhrases) {
  EXPECT_EQ(DescriptorTerm(Shape::kOvalRound), "oval/round");
  EXPECT_EQ(DescriptorToken(Shape::kOvalRound), "oval_round");
  EXPECT_EQ(DescriptorTerm(PosteriorAcoustic::kNoPosteriorFeatures),
            "no posterior features");
  EXPECT_EQ(DescriptorToken(PosteriorAcoustic::kNoPosteriorFeatures),
            "no_posterior_features");
  EXPECT_EQ(DescriptorTerm(Margin::kCircumscribed), "circumscribed");
}

TEST(LexiconTest, UnknownPhraseHasNoMapping) {
  auto parsed = ParseDescriptorTerm(DescriptorField::kShape, "lobulated");
  EXPECT_EQ(parsed.status().code(), absl::StatusCode::kNotFound);
  // A valid phrase of another field does not count.
  parsed = ParseDescriptorTerm(DescriptorField::kShape, "anechoic");
  EXPECT_EQ(parsed.status().code(), absl::StatusCode::kNotFound);
}

TEST(LexiconTest, FieldNamesRoundTrip) {
  for (DescriptorField field : kAllDescriptorFields) {
    ASSERT_OK_AND_ASSIGN(DescriptorField parsed,
                         ParseFieldName(FieldName(field)));
    EXPECT_EQ(parsed, field);
  }
  EXPECT_EQ(FieldName(DescriptorField::kInternalEcho), "internal_echo");
  EXPECT_EQ(FieldLabel(DescriptorField::kPosteriorAcoustic),
            "Posterior acoustic");
  EXPECT_EQ(ParseFieldName("echo").status().code(),
            absl::StatusCode::kInvalidArgument);
}

}  // namespace
}  // namespace sonoreport

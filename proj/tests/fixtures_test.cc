// Copyright 2026 The formlink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "formlink/fixtures.h"

#include <gtest/gtest.h>

#include "formlink/geometry.h"
#include "test_util.h"

namespace formlink {
namespace {

TEST(FixturesTest, SplitsAreDeterministicAndNamed) {
  SyntheticSplits a = FixtureSplits(), b = FixtureSplits();
  ASSERT_EQ(a.train.size(), 60u);
  ASSERT_EQ(a.test.size(), 20u);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.train[0].name(), "train_000");
  EXPECT_EQ(a.test[19].name(), "test_019");
  EXPECT_NE(SyntheticForms(3, 1), SyntheticForms(3, 2));
}

TEST(FixturesTest, ExerciseTheHardCases) {
  CorpusStats stats = ComputeStats(FixtureSplits().test);
  EXPECT_GT(stats.answers_by_multiplicity[0], 0u);  // stray answers
  EXPECT_GT(stats.answers_by_multiplicity[1], 0u);
  EXPECT_GT(stats.answers_by_multiplicity[2], 0u);  // table cells
  EXPECT_EQ(stats.answers_by_multiplicity[3], 0u);
  EXPECT_GT(stats.discarded_links, 0u);             // header links
  EXPECT_TRUE(stats.warnings.empty());
  // The nearest question is not always the right one.
  CandidateParams nearest;
  nearest.k = 1;
  double recall = MeasureCandidateRecall(FixtureSplits().test, nearest).recall();
  EXPECT_LT(recall, 0.9);
  EXPECT_GT(recall, 0.3);
}

TEST(FixturesTest, WriteCorpusRoundTrips) {
  auto dir = testing::TempDir("fixtures");
  std::vector<Form> forms = SyntheticForms(6, 77, "rt");
  WriteCorpus(dir, forms);
  CorpusLoad load = LoadCorpus(dir);
  EXPECT_TRUE(load.errors.empty());
  EXPECT_EQ(load.forms, forms);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace formlink

/*
 * Copyright 2026 The JCCH Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "jcch/labels.hpp"

#include <gtest/gtest.h>

#include "jcch/error.hpp"
#include "test_util.hpp"

namespace jcch {
namespace {

using ::jcch::testing::RandomLabels;
using ::jcch::testing::ThreeItemLabels;

TEST(LabelMatrixTest, RejectsEmptyRowsAndBadIds) {
  EXPECT_THROW(LabelMatrix(2, {{0}, {}}), ValidationError);
  EXPECT_THROW(LabelMatrix(2, {{2}}), ValidationError);
  EXPECT_THROW(LabelMatrix(0, {{0}}), ValidationError);
  EXPECT_THROW(LabelMatrix(2, {}), ValidationError);
}

TEST(LabelMatrixTest, DenseAndListAgree) {
  const std::vector<std::uint8_t> dense = {1, 1, 0, 0, 1, 0, 0, 0, 1};
  EXPECT_EQ(LabelMatrix::FromDense(3, 3, dense), ThreeItemLabels());
  EXPECT_THROW(LabelMatrix::FromDense(3, 2, dense), ValidationError);
}

TEST(LabelMatrixTest, WideRowsUseSeveralWords) {
  LabelMatrix labels(130, {{0, 129}, {129}, {64}});
  EXPECT_TRUE(labels.Has(0, 129));
  EXPECT_EQ(labels.IntersectionCount(0, 1), 1u);
  EXPECT_FALSE(labels.SimilarUnchecked(0, 2));
  EXPECT_EQ(labels.TotalLabelCount(), 4u);
}

TEST(SimilarTest, Examples) {
  const LabelMatrix labels(3, {{0, 1}, {1}, {0}, {2}});
  EXPECT_TRUE(Similar(labels, 0, 1));
  EXPECT_FALSE(Similar(labels, 1, 2));
  EXPECT_TRUE(Similar(labels, 3, 3));
  EXPECT_THROW(Similar(labels, 0, 4), ValidationError);
}

TEST(SimilarTest, SymmetricAndReflexive) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LabelMatrix labels = RandomLabels(seed, 25, 6);
    for (std::size_t i = 0; i < labels.n(); ++i) {
      EXPECT_TRUE(Similar(labels, i, i));
      for (std::size_t j = 0; j < labels.n(); ++j) {
        ASSERT_EQ(Similar(labels, i, j), Similar(labels, j, i));
      }
    }
  }
}

TEST(PositivesNegativesTest, ThreeItemExample) {
  const std::vector<std::size_t> pool = {0, 1, 2};
  const auto pn = SplitPositivesNegatives(ThreeItemLabels(), 0, pool);
  EXPECT_EQ(pn.positives, std::vector<std::size_t>{1});
  EXPECT_EQ(pn.negatives, std::vector<std::size_t>{2});
}

TEST(PositivesNegativesTest, SelfOnlyPoolIsEmpty) {
  const std::vector<std::size_t> pool = {1};
  const auto pn = SplitPositivesNegatives(ThreeItemLabels(), 1, pool);
  EXPECT_TRUE(pn.positives.empty());
  EXPECT_TRUE(pn.negatives.empty());
}

TEST(PositivesNegativesTest, SingleSharedLabelHasNoNegatives) {
  const LabelMatrix labels(1, {{0}, {0}, {0}, {0}});
  const std::vector<std::size_t> pool = {0, 1, 2, 3};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(SplitPositivesNegatives(labels, i, pool).negatives.empty());
  }
}

TEST(PositivesNegativesTest, PartitionsPoolWithoutSelf) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const LabelMatrix labels = RandomLabels(seed, 30, 5);
    const std::vector<std::size_t> pool = {29, 3, 7, 0, 12, 18, 5};
    for (std::size_t i = 0; i < labels.n(); ++i) {
      const auto pn = SplitPositivesNegatives(labels, i, pool);
      std::size_t expected = 0;
      for (std::size_t j : pool) expected += j != i ? 1 : 0;
      EXPECT_EQ(pn.positives.size() + pn.negatives.size(), expected);
      EXPECT_TRUE(std::is_sorted(pn.positives.begin(), pn.positives.end()));
      EXPECT_TRUE(std::is_sorted(pn.negatives.begin(), pn.negatives.end()));
      for (std::size_t j : pn.positives) EXPECT_TRUE(Similar(labels, i, j));
      for (std::size_t k : pn.negatives) EXPECT_FALSE(Similar(labels, i, k));
    }
  }
}

TEST(PositivesNegativesTest, RejectsBadPoolIndex) {
  const std::vector<std::size_t> pool = {0, 3};
  EXPECT_THROW(SplitPositivesNegatives(ThreeItemLabels(), 0, pool), ValidationError);
}

}  // namespace
}  // namespace jcch

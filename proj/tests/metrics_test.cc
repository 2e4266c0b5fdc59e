// Copyright 2026 The Fairaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "fairaudit/metrics.h"

#include <cstdint>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include "oracles.h"
#include "test_util.h"

namespace fairaudit {
namespace {

using ::fairaudit::testing::AddCell;
using ::fairaudit::testing::Bins;
using ::fairaudit::testing::MakePopulation;
using ::fairaudit::testing::StatusIs;
using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Optional;

// Two-bin height example: low bin 20% positive, high bin 80% in both groups.
std::vector<Record> StrideRecords() {
  std::vector<Record> records;
  AddCell(records, "men", 130, 50, 10);
  AddCell(records, "men", 190, 200, 160);
  AddCell(records, "women", 130, 100, 20);
  AddCell(records, "women", 190, 100, 80);
  return records;
}

TEST(CalibrationCurveTest, CountsPerGroupAndBin) {
  Population pop = MakePopulation(StrideRecords(), Bins({100, 160, 220}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  EXPECT_THAT(curve.groups(), ElementsAre("men", "women"));
  FA_ASSERT_OK_AND_ASSIGN(CalibrationCurve::Cell cell, curve.cell("men", 1));
  EXPECT_EQ(cell.count, 200);
  EXPECT_EQ(cell.positives, 160);
  EXPECT_THAT(curve.PScore("women", 0), Optional(0.2));
  EXPECT_THAT(curve.PScore("women", 1), Optional(0.8));
  EXPECT_EQ(curve.PScore("nobody", 0), std::nullopt);
  EXPECT_TRUE(curve.cells("nobody").empty());
  EXPECT_THAT(curve.cell("men", 2),
              StatusIs(absl::StatusCode::kOutOfRange, ""));
}

TEST(CalibrationCurveTest, EmptyCellsHaveNoPScore) {
  std::vector<Record> records;
  AddCell(records, "a", 0.5, 3, 1);
  AddCell(records, "b", 1.5, 2, 2);
  Population pop = MakePopulation(records, Bins({0, 1, 2}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  EXPECT_TRUE(curve.cells("a")[1].empty());
  EXPECT_EQ(curve.PScore("a", 1), std::nullopt);
  EXPECT_EQ(curve.PScore("b", 0), std::nullopt);
  // No bin is nonempty in both groups.
  EXPECT_EQ(*CalibrationGap(curve, "a", "b"), 0.0);
}

TEST(ConfusionForGroupTest, MatchesDirectCountOnStrideFixture) {
  const std::vector<Record> records = StrideRecords();
  Population pop = MakePopulation(records, Bins({100, 160, 220}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  for (double t : {0.0, 0.2, 0.5, 0.8, 0.81, 1.0}) {
    ThresholdPolicy policy = *ThresholdPolicy::Uniform(t);
    for (const std::string group : {"men", "women"}) {
      FA_ASSERT_OK_AND_ASSIGN(ConfusionMatrix cm,
                              ConfusionForGroup(pop, group, policy, curve));
      oracle::Counts expected =
          oracle::CountDirectly(records, {100, 160, 220}, group, t);
      EXPECT_EQ(cm.tp, expected.tp) << group << " t=" << t;
      EXPECT_EQ(cm.fp, expected.fp) << group << " t=" << t;
      EXPECT_EQ(cm.tn, expected.tn) << group << " t=" << t;
      EXPECT_EQ(cm.fn, expected.fn) << group << " t=" << t;
    }
  }
}

TEST(ConfusionForGroupTest, StrideRatesAtTheHighBin) {
  Population pop = MakePopulation(StrideRecords(), Bins({100, 160, 220}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  ThresholdPolicy policy = *ThresholdPolicy::Uniform(0.8);
  FA_ASSERT_OK_AND_ASSIGN(ConfusionMatrix women,
                          ConfusionForGroup(pop, "women", policy, curve));
  FA_ASSERT_OK_AND_ASSIGN(ConfusionMatrix men,
                          ConfusionForGroup(pop, "men", policy, curve));
  // Women: 20 of 100 negatives sit in the high bin; men: 40 of 80.
  EXPECT_EQ(women, (ConfusionMatrix{.tp = 80, .fp = 20, .tn = 80, .fn = 20}));
  EXPECT_EQ(men, (ConfusionMatrix{.tp = 160, .fp = 40, .tn = 40, .fn = 10}));
  EXPECT_EQ(FalsePositiveRate(women), 20.0 / 100.0);
  EXPECT_EQ(FalsePositiveRate(men), 40.0 / 80.0);
}

TEST(ConfusionForGroupTest, Errors) {
  Population pop = MakePopulation(StrideRecords(), Bins({100, 160, 220}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  EXPECT_THAT(ConfusionForGroup(pop, "children", ThresholdPolicy(), curve),
              StatusIs(absl::StatusCode::kNotFound, "children"));
  EXPECT_THAT(ConfusionForGroup(pop, "men",
                                *ThresholdPolicy::PerGroup({{"women", 0.5}}),
                                curve),
              StatusIs(absl::StatusCode::kNotFound, "men"));

  std::vector<Record> other;
  AddCell(other, "x", 130, 1, 0);
  AddCell(other, "y", 130, 1, 0);
  CalibrationCurve foreign =
      BuildCalibrationCurve(MakePopulation(other, Bins({100, 160, 220})));
  EXPECT_THAT(ConfusionForGroup(pop, "men", ThresholdPolicy(), foreign),
              StatusIs(absl::StatusCode::kFailedPrecondition, "men"));
}

TEST(RatesTest, UndefinedDenominators) {
  ConfusionMatrix all_positive{.tp = 3, .fp = 0, .tn = 0, .fn = 1};
  EXPECT_EQ(FalsePositiveRate(all_positive), std::nullopt);
  EXPECT_EQ(FalseNegativeRate(all_positive), 0.25);
  ConfusionMatrix never_acted{.tp = 0, .fp = 0, .tn = 4, .fn = 2};
  EXPECT_EQ(PositivePredictiveValue(never_acted), std::nullopt);
  EXPECT_EQ(FalseNegativeRate(never_acted), 1.0);
}

TEST(RatesTest, FalseNegativeRateIsMissesOverPositives) {
  // Distinguishes fn/(fn+tp) from fn/(fn+tn).
  ConfusionMatrix cm{.tp = 1345, .fp = 805, .tn = 990, .fn = 523};
  EXPECT_EQ(FalseNegativeRate(cm), 523.0 / (523 + 1345));
}

TEST(RatesTest, PublishedRiskTableFromCounts) {
  // Recomputes the published coarse table from its count anchors. The table
  // rounds twice (44.847% -> 44.85% -> 44.9%), hence the 0.001 slack.
  ConfusionMatrix black{.tp = 1345, .fp = 805, .tn = 990, .fn = 523};
  ConfusionMatrix white{.tp = 497, .fp = 349, .tn = 1139, .fn = 454};
  EXPECT_THAT(*FalsePositiveRate(black), DoubleNear(0.449, 0.001));
  EXPECT_THAT(*FalsePositiveRate(white), DoubleNear(0.235, 0.001));
  EXPECT_THAT(*FalseNegativeRate(black), DoubleNear(0.280, 0.001));
  EXPECT_THAT(*FalseNegativeRate(white), DoubleNear(0.477, 0.001));
  EXPECT_THAT(*PositivePredictiveValue(black), DoubleNear(0.63, 0.005));
  EXPECT_THAT(*PositivePredictiveValue(white), DoubleNear(0.59, 0.005));
}

TEST(BaseRateTest, PositiveFractionPerGroup) {
  Population pop = MakePopulation(StrideRecords(), Bins({100, 160, 220}));
  EXPECT_EQ(*BaseRate(pop, "men"), 170.0 / 250.0);
  EXPECT_EQ(*BaseRate(pop, "women"), 0.5);
  EXPECT_THAT(BaseRate(pop, "other"),
              StatusIs(absl::StatusCode::kNotFound, "other"));
}

TEST(ComputeGroupMetricsTest, OneEntryPerGroupInOrder) {
  Population pop = MakePopulation(StrideRecords(), Bins({100, 160, 220}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  FA_ASSERT_OK_AND_ASSIGN(
      std::vector<GroupMetrics> metrics,
      ComputeGroupMetrics(pop, *ThresholdPolicy::Uniform(0.5), curve));
  ASSERT_EQ(metrics.size(), 2);
  EXPECT_EQ(metrics[0].group, "men");
  EXPECT_EQ(metrics[0].fpr, 0.5);
  EXPECT_EQ(metrics[1].fpr, 0.2);
  EXPECT_EQ(metrics[1].ppv, 0.8);
  EXPECT_EQ(metrics[1].fnr, 0.2);
  EXPECT_EQ(metrics[1].base_rate, 0.5);
}

TEST(CalibrationGapTest, WorstSharedBin) {
  std::vector<Record> records;
  AddCell(records, "a", 0.5, 10, 2);
  AddCell(records, "a", 1.5, 10, 9);
  AddCell(records, "b", 0.5, 10, 5);
  AddCell(records, "b", 1.5, 10, 8);
  AddCell(records, "c", 0.5, 4, 1);
  Population pop = MakePopulation(records, Bins({0, 1, 2}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  EXPECT_DOUBLE_EQ(*CalibrationGap(curve, "a", "b"), 0.3);
  EXPECT_DOUBLE_EQ(*CalibrationGap(curve, "b", "c"), 0.25);
  EXPECT_DOUBLE_EQ(*CalibrationGap(curve, "a", "c"), 0.05);
  EXPECT_DOUBLE_EQ(MaxCalibrationGap(curve), 0.3);
  EXPECT_THAT(CalibrationGap(curve, "a", "z"),
              StatusIs(absl::StatusCode::kNotFound, "z"));
}

TEST(ChanceMiscalibrationBoundTest, ClosedForm) {
  EXPECT_DOUBLE_EQ(*ChanceMiscalibrationBound(100, 0.5, 0.1), 0.25);
  EXPECT_EQ(*ChanceMiscalibrationBound(4, 0.5, 0.1), 1.0);
  EXPECT_EQ(*ChanceMiscalibrationBound(10, 0.0, 0.1), 0.0);
}

TEST(ChanceMiscalibrationBoundTest, BoundsTheExactBinomialTail) {
  for (int64_t n : {5, 20, 100, 400}) {
    for (double p : {0.05, 0.2, 0.5, 0.8}) {
      for (double gap : {0.05, 0.1, 0.2, 0.3}) {
        const double exact = oracle::BinomialDeviationProbability(n, p, gap);
        FA_ASSERT_OK_AND_ASSIGN(double bound,
                                ChanceMiscalibrationBound(n, p, gap));
        EXPECT_GE(bound + 1e-12, exact) << n << " " << p << " " << gap;
      }
    }
  }
}

TEST(ChanceMiscalibrationBoundTest, RejectsBadArguments) {
  EXPECT_THAT(ChanceMiscalibrationBound(0, 0.5, 0.1),
              StatusIs(absl::StatusCode::kInvalidArgument, ""));
  EXPECT_THAT(ChanceMiscalibrationBound(10, 1.2, 0.1),
              StatusIs(absl::StatusCode::kInvalidArgument, ""));
  EXPECT_THAT(ChanceMiscalibrationBound(10, 0.5, 0.0),
              StatusIs(absl::StatusCode::kInvalidArgument, ""));
}

}  // namespace
}  // namespace fairaudit

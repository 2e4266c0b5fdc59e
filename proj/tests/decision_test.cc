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


#include "fairaudit/decision.h"

#include <cstdint>
#include <string>
#include <utility>
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

std::vector<Record> StrideRecords() {
  std::vector<Record> records;
  AddCell(records, "men", 130, 50, 10);
  AddCell(records, "men", 190, 200, 160);
  AddCell(records, "women", 130, 100, 20);
  AddCell(records, "women", 190, 100, 80);
  return records;
}

TEST(ExpectedValuesTest, LinearInCredence) {
  OutcomeValues v = *OutcomeValues::Create(3, -1, 2, 0);
  FA_ASSERT_OK_AND_ASSIGN(DecisionEV ev, ExpectedValues(0.25, v));
  EXPECT_DOUBLE_EQ(ev.act, 0.25 * 3 + 0.75 * -1);
  EXPECT_DOUBLE_EQ(ev.refrain, 0.75 * 2 + 0.25 * 0);
  EXPECT_THAT(ExpectedValues(1.01, v),
              StatusIs(absl::StatusCode::kInvalidArgument, "[0, 1]"));
  EXPECT_THAT(ExpectedValues(-0.01, v),
              StatusIs(absl::StatusCode::kInvalidArgument, ""));
}

TEST(OptimalThresholdTest, ClosedForm) {
  EXPECT_EQ(OptimalThreshold(OutcomeValues::Symmetric()), 0.5);
  // A false positive three times as costly as a false negative.
  EXPECT_EQ(OptimalThreshold(*OutcomeValues::Create(0, -3, 0, -1)), 0.75);
  EXPECT_EQ(OptimalThreshold(*OutcomeValues::Create(0, -1, 0, -3)), 0.25);
}

TEST(OptimalThresholdTest, AgreesWithGridCrossover) {
  const std::vector<oracle::Values> cases = {
      {1, 0, 1, 0}, {0, -3, 0, -1}, {10, -1, 4, 2}, {2.5, -7, 1, -0.5}};
  for (const oracle::Values& c : cases) {
    const double p_star =
        OptimalThreshold(*OutcomeValues::Create(c.tp, c.fp, c.tn, c.fn));
    std::optional<double> crossover = oracle::GridCrossover(c, 1e-3);
    ASSERT_TRUE(crossover.has_value());
    EXPECT_THAT(p_star, DoubleNear(*crossover, 1e-3));
  }
}

TEST(OptimalThresholdTest, EqualExpectationsAtTheThresholdAndActionWins) {
  OutcomeValues v = *OutcomeValues::Create(0, -3, 0, -1);
  const double p_star = OptimalThreshold(v);
  DecisionEV ev = *ExpectedValues(p_star, v);
  EXPECT_DOUBLE_EQ(ev.act, ev.refrain);
  EXPECT_EQ(Decide(p_star, p_star), Decision::kAct);
}

TEST(ApplyPolicyTest, OneDecisionPerRecordInOrder) {
  std::vector<Record> records;
  AddCell(records, "a", 0.5, 2, 1);  // p = 0.5
  AddCell(records, "b", 1.5, 4, 3);  // p = 0.75
  AddCell(records, "a", 1.5, 1, 1);  // p = 1
  Population pop = MakePopulation(records, Bins({0, 1, 2}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  FA_ASSERT_OK_AND_ASSIGN(
      std::vector<Decision> decisions,
      ApplyPolicy(pop, *ThresholdPolicy::Uniform(0.75), curve));
  EXPECT_THAT(decisions,
              ElementsAre(Decision::kRefrain, Decision::kRefrain,
                          Decision::kAct, Decision::kAct, Decision::kAct,
                          Decision::kAct, Decision::kAct));
  EXPECT_THAT(ApplyPolicy(pop, *ThresholdPolicy::PerGroup({{"a", 0.1}}), curve),
              StatusIs(absl::StatusCode::kNotFound, "'b'"));
}

TEST(AssessPolicyTest, DisvalueMatchesPerRecordSum) {
  Population pop = MakePopulation(StrideRecords(), Bins({100, 160, 220}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  const oracle::Values v{2, -1, 1, -4};
  OutcomeValues values = *OutcomeValues::Create(v.tp, v.fp, v.tn, v.fn);
  FA_ASSERT_OK_AND_ASSIGN(
      PolicyAssessment assessment,
      AssessPolicy(pop, *ThresholdPolicy::Uniform(0.5), curve, values));
  ASSERT_EQ(assessment.groups.size(), 2);
  const GroupAssessment& men = assessment.groups[0];
  EXPECT_EQ(men.acted, 200);
  EXPECT_EQ(men.refrained, 50);
  EXPECT_NEAR(men.expected_disvalue,
              oracle::DisvalueBySum({{50, 10}, {200, 160}}, {false, true}, v),
              1e-9);
  // Bins are exact, so realized outcomes match the expectation.
  EXPECT_NEAR(men.realized_disvalue, men.expected_disvalue, 1e-9);
  EXPECT_NEAR(men.realized_value, men.expected_value, 1e-9);
  EXPECT_NEAR(men.realized_value, 160 * 2 + 40 * -1 + 40 * 1 + 10 * -4, 1e-9);

  EXPECT_EQ(assessment.total.group, "total");
  EXPECT_EQ(assessment.total.acted, 300);
  EXPECT_NEAR(assessment.total.expected_disvalue,
              men.expected_disvalue + assessment.groups[1].expected_disvalue,
              1e-9);
}

// Exhaustive sweep: every pair of per-group thresholds drawn from the
// achievable cut points has expected disvalue at least that of uniform p*.
TEST(AssessPolicyTest, UniformOptimalThresholdMinimizesDisvalue) {
  Population pop = MakePopulation(StrideRecords(), Bins({100, 160, 220}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  for (const oracle::Values& v :
       {oracle::Values{1, 0, 1, 0}, oracle::Values{0, -3, 0, -1},
        oracle::Values{0, -1, 0, -9}}) {
    OutcomeValues values = *OutcomeValues::Create(v.tp, v.fp, v.tn, v.fn);
    const double baseline =
        AssessPolicy(pop, *ThresholdPolicy::Uniform(OptimalThreshold(values)),
                     curve, values)
            ->total.expected_disvalue;
    const std::vector<double> cuts = {0.0, 0.2, 0.8, 1.0};
    for (double t_men : cuts) {
      for (double t_women : cuts) {
        ThresholdPolicy policy =
            *ThresholdPolicy::PerGroup({{"men", t_men}, {"women", t_women}});
        const double d =
            AssessPolicy(pop, policy, curve, values)->total.expected_disvalue;
        EXPECT_GE(d + 1e-9, baseline) << t_men << " " << t_women;
      }
    }
  }
}

TEST(TranslateScoreCutTest, CalibratedCurveGivesUniformPolicy) {
  Population pop = MakePopulation(StrideRecords(), Bins({100, 160, 220}));
  CalibrationCurve curve = BuildCalibrationCurve(pop);
  FA_ASSERT_OK_AND_ASSIGN(ThresholdPolicy policy,
                          TranslateScoreCut(curve, 160));
  ASSERT_TRUE(policy.is_uniform());
  EXPECT_EQ(policy.uniform_threshold(), 0.8);
  // A cut inside the top bin still acts on the whole bin.
  EXPECT_EQ(TranslateScoreCut(curve, 200)->uniform_threshold(), 0.8);
  EXPECT_EQ(TranslateScoreCut(curve, 100)->uniform_threshold(), 0.2);
  EXPECT_THAT(TranslateScoreCut(curve, 99),
              StatusIs(absl::StatusCode::kInvalidArgument, "outside"));
}

TEST(TranslateScoreCutTest, MiscalibratedCurveGivesPerGroupThresholds) {
  std::vector<Record> records;
  AddCell(records, "a", 0.5, 10, 1);
  AddCell(records, "a", 1.5, 10, 6);
  AddCell(records, "b", 0.5, 10, 3);
  AddCell(records, "b", 1.5, 10, 9);
  Population pop = MakePopulation(records, Bins({0, 1, 2}));
  FA_ASSERT_OK_AND_ASSIGN(ThresholdPolicy policy,
                          TranslateScoreCut(BuildCalibrationCurve(pop), 1));
  ASSERT_FALSE(policy.is_uniform());
  EXPECT_EQ(*policy.ThresholdFor("a"), 0.6);
  EXPECT_EQ(*policy.ThresholdFor("b"), 0.9);
}

TEST(TranslateScoreCutTest, FailsWhenCurveIsNotMonotone) {
  std::vector<Record> records;
  AddCell(records, "a", 0.5, 10, 7);
  AddCell(records, "a", 1.5, 10, 5);
  AddCell(records, "b", 0.5, 10, 1);
  AddCell(records, "b", 1.5, 10, 5);
  Population pop = MakePopulation(records, Bins({0, 1, 2}));
  EXPECT_THAT(TranslateScoreCut(BuildCalibrationCurve(pop), 1),
              StatusIs(absl::StatusCode::kFailedPrecondition, "'a'"));
}

TEST(TranslateScoreCutTest, NoRecordsAboveTheCutMeansNeverAct) {
  std::vector<Record> records;
  AddCell(records, "a", 0.5, 10, 2);
  AddCell(records, "b", 0.5, 10, 2);
  AddCell(records, "b", 1.5, 10, 5);
  Population pop = MakePopulation(records, Bins({0, 1, 2}));
  FA_ASSERT_OK_AND_ASSIGN(ThresholdPolicy policy,
                          TranslateScoreCut(BuildCalibrationCurve(pop), 1));
  EXPECT_EQ(*policy.ThresholdFor("a"), 1.0);
  EXPECT_EQ(*policy.ThresholdFor("b"), 0.5);
}

}  // namespace
}  // namespace fairaudit

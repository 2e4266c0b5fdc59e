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

// Expected-value decision rules over the four outcomes.
//
// The decision-maker's credence for a record is the p_score of its bin in the
// calibration curve; nothing else enters. Expected disvalue is measured
// against perfect information: a record with credence p and chosen action a
// contributes  p * TP + (1 - p) * TN - EV_a,  i.e. the expected cost of the
// errors the action risks. This is zero only when the action is certain to
// be correct, and minimizing it is the same as maximizing expected value.

#ifndef FAIRAUDIT_DECISION_H_
#define FAIRAUDIT_DECISION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fairaudit/domain.h"
#include "fairaudit/metrics.h"

namespace fairaudit {

struct DecisionEV {
  double act = 0.0;
  double refrain = 0.0;
};

// act = p TP + (1-p) FP, refrain = (1-p) TN + p FN.
absl::StatusOr<DecisionEV> ExpectedValues(double p,
                                          const OutcomeValues& values);

// p* = (TN - FP) / ((TN - FP) + (TP - FN)). Acting is strictly better in
// expectation iff p > p*; at p == p* the two actions tie and the library
// resolves the tie toward acting.
double OptimalThreshold(const OutcomeValues& values);

// One decision per record, aligned with population.records().
absl::StatusOr<std::vector<Decision>> ApplyPolicy(const Population& population,
                                                  const ThresholdPolicy& policy,
                                                  const CalibrationCurve& curve);

struct GroupAssessment {
  std::string group;
  int64_t acted = 0;
  int64_t refrained = 0;
  // Sum of the chosen action's EV at each record's bin p_score.
  double expected_value = 0.0;
  // Sum of expected error cost relative to perfect information.
  double expected_disvalue = 0.0;
  // Sum of the actual outcome value of (decision, true outcome).
  double realized_value = 0.0;
  // Sum of realized error costs: TN - FP per false positive, TP - FN per
  // false negative.
  double realized_disvalue = 0.0;
};

struct PolicyAssessment {
  std::vector<GroupAssessment> groups;  // population.groups() order
  GroupAssessment total;                // group == "total"
};

// Expected and realized value of applying `policy`, per group and in total.
absl::StatusOr<PolicyAssessment> AssessPolicy(const Population& population,
                                              const ThresholdPolicy& policy,
                                              const CalibrationCurve& curve,
                                              const OutcomeValues& values);

// Translates a raw score cut ("act on scores >= cut") into per-group
// probability thresholds: the bin containing `cut` and every bin above it are
// acted on. Each group's threshold is the smallest p_score among its nonempty
// acted bins (1.0 if it has none). Fails when a group's curve is not monotone
// enough for the cut to be expressed as a p_score threshold. Collapses to a
// uniform policy when every group ends up with the same threshold.
absl::StatusOr<ThresholdPolicy> TranslateScoreCut(const CalibrationCurve& curve,
                                                  double cut);

}  // namespace fairaudit

#endif  // FAIRAUDIT_DECISION_H_

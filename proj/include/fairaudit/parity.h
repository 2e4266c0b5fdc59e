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

// False-positive-rate parity: what it takes to equalize FPR across groups,
// when a uniform threshold on a calibrated score must leave it unequal, and
// what risk of error an individual actually bears.

#ifndef FAIRAUDIT_PARITY_H_
#define FAIRAUDIT_PARITY_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "fairaudit/decision.h"
#include "fairaudit/domain.h"
#include "fairaudit/metrics.h"

namespace fairaudit {

// Which group's threshold stays at baseline while the others move.
enum class EqualizationAnchor {
  kHoldHighestFpr,  // other groups move their FPR up toward the highest
  kHoldLowestFpr,   // other groups move their FPR down toward the lowest
};

struct GroupEqualization {
  std::string group;
  double baseline_threshold = 0.0;
  double threshold = 0.0;
  double baseline_fpr = 0.0;
  double fpr = 0.0;
  int64_t baseline_acted = 0;
  int64_t acted = 0;
};

struct EqualizationResult {
  EqualizationAnchor anchor = EqualizationAnchor::kHoldHighestFpr;
  std::string anchor_group;
  std::vector<GroupEqualization> groups;  // population.groups() order
  ThresholdPolicy policy;                 // always per-group
  double residual_gap = 0.0;              // max pairwise |FPR_i - FPR_j|
  double tolerance = 0.0;
  bool exact_parity = false;              // residual_gap <= tolerance
  double baseline_expected_disvalue = 0.0;
  double equalized_expected_disvalue = 0.0;
  double disvalue_delta = 0.0;            // equalized - baseline
};

// Searches per-group thresholds over each group's achievable cut points (0,
// its distinct bin p_scores, and 1) to bring every group's FPR as close as
// possible to the anchor group's baseline FPR. Groups already within
// `tolerance` of the anchor keep their baseline threshold. Fails when a
// group has no negatives.
absl::StatusOr<EqualizationResult> EqualizeFpr(
    const Population& population, const CalibrationCurve& curve,
    const ThresholdPolicy& baseline, double tolerance,
    const OutcomeValues& values,
    EqualizationAnchor anchor = EqualizationAnchor::kHoldHighestFpr);

// Outcome of checking the FPR ordering for one pair of groups under one
// uniform threshold.
struct ImpossibilityVerdict {
  std::string higher_base_rate_group;
  std::string lower_base_rate_group;
  double calibration_gap = 0.0;
  double calib_tolerance = 0.0;
  bool calibrated = false;  // calibration_gap <= calib_tolerance
  std::map<std::string, double> base_rates;
  std::map<std::string, double> fpr;
  bool base_rates_differ = false;
  // Both groups have an acted bin, a refrained bin and some negatives.
  bool decisive = false;
  // Asserted only when calibrated, base_rates_differ and decisive:
  // FPR(higher base rate) >= FPR(lower base rate).
  bool ordering_holds = false;
  bool strict = false;  // ordering_holds with strict inequality
  std::string note;
};

// Checks the FPR ordering on a two-group population under `uniform_threshold`.
absl::StatusOr<ImpossibilityVerdict> CheckImpossibility(
    const Population& population, const CalibrationCurve& curve,
    double uniform_threshold, double calib_tolerance = 1e-9);

// Same check for any number of groups, pairing the highest-base-rate group
// with each other group.
absl::StatusOr<std::vector<ImpossibilityVerdict>> CheckImpossibilityPairwise(
    const Population& population, const CalibrationCurve& curve,
    double uniform_threshold, double calib_tolerance = 1e-9);

// Probability that the decision applied to `record` is wrong given its bin's
// p_score: 1 - p if acted on, p if not. Group enters only via the threshold.
absl::StatusOr<double> IndividualErrorRisk(const Record& record,
                                           const CalibrationCurve& curve,
                                           const ThresholdPolicy& policy);

struct LotteryResult {
  int64_t total = 0;
  int64_t quota = 0;
  // Every individual's exclusion probability, regardless of group.
  double probability = 0.0;
  // Per group: expected excluded / known negatives. Equal to `probability`.
  std::map<std::string, double> fair_lottery_ratio;
  std::map<std::string, double> expected_excluded;
};

// Equal lottery among individuals all known to be negative: `quota` of them
// must be excluded.
absl::StatusOr<LotteryResult> FairLottery(
    const std::map<std::string, int64_t>& group_counts, int64_t quota);

}  // namespace fairaudit

#endif  // FAIRAUDIT_PARITY_H_

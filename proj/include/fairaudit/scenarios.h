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

// Deterministic worked-example populations built from exact integer counts,
// and a seeded generator of bin-exact calibrated two-group populations.

#ifndef FAIRAUDIT_SCENARIOS_H_
#define FAIRAUDIT_SCENARIOS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fairaudit/domain.h"
#include "fairaudit/parity.h"

namespace fairaudit {

enum class ScenarioName {
  kStrideHeight,
  kSectionGrades,
  kCompasSynthetic,
  kCompasBenefit,
  kCertaintyLottery,
  kMiscalibratedCompas,
};

// "stride_height", "section_grades", ...
std::string_view ScenarioKey(ScenarioName name);
absl::StatusOr<ScenarioName> ParseScenarioName(std::string_view key);
const std::vector<ScenarioName>& AllScenarios();

// One published figure a scenario must reproduce.
//
// Keys name an observable of the canonical audit:
//   tp|fp|tn|fn|negatives|fpr|fnr|ppv|base_rate/<group>
//   p_score/<group>/<bin label>       error_risk/<group>/<bin label>
//   threshold/<group>                 equivalent_cut/<group>
//   threshold_raise/<group>           acted_change/<group>
//   lottery_probability/<group>
//   calibration_gap   ordering_holds (1 or 0)   disvalue_delta
struct ExpectedFigure {
  enum class Compare { kNear, kGreater, kLess };

  std::string key;
  double value = 0.0;
  Compare compare = Compare::kNear;
  double tolerance = 0.0;  // kNear only; 0 means exact
  // When set, the observable rendered as a one-decimal percentage must equal
  // this text exactly, e.g. "44.9%".
  std::string rendered;
};

struct ScenarioSpec {
  ScenarioName name = ScenarioName::kStrideHeight;
  std::string title;
  // Canonical threshold, in command-line syntax ("score>=160", "p=0.5").
  std::string threshold;
  // Run FPR equalization against the canonical policy with this anchor.
  std::optional<EqualizationAnchor> equalize;
  // Run a certainty-case lottery excluding this many individuals.
  std::optional<int64_t> lottery_quota;
  // Group whose curve is taken as correct when mapping other groups'
  // thresholds back to score cuts (equivalent_cut/<group>).
  std::optional<std::string> reference_group;
  std::vector<ExpectedFigure> expected;
  // Provenance of derived counts and known discrepancies, for the report.
  std::vector<std::string> notes;
};

struct Scenario {
  Population population;
  ScenarioSpec spec;
};

absl::StatusOr<Scenario> BuildScenario(ScenarioName name);
absl::StatusOr<Scenario> BuildScenario(std::string_view key);

// Two groups "a" and "b" with `n_per_group` records each, bin-exact
// calibrated: every bin has the same positive fraction in both groups. Bin
// p_scores increase with the bin index and stay strictly inside (0, 1). The
// group with the higher base rate has a monotone-likelihood-ratio shift
// toward higher bins (its count ratio to the other group strictly increases
// bin by bin); equal requested base rates give identical compositions.
// Base rates are met within 1/n_per_group. Deterministic in `seed`.
//
// Bin p_scores form the ladder (m0 + k) / d shared by both groups, so both
// base rates must lie strictly inside one ladder's span, which is at most
// (K - 1) / (K + 1) for K bins. Fails when `n_per_group` has no divisor d
// with K + 1 <= d <= 4K + 4 and n_per_group / d >= K, when no ladder spans
// both base rates, or when no attempt yields an ordered composition (close
// base rates over many sparsely filled bins).
absl::StatusOr<Population> RandomCalibratedPopulation(uint64_t seed,
                                                      int64_t n_per_group,
                                                      const BinScheme& bins,
                                                      double base_rate_a,
                                                      double base_rate_b);

}  // namespace fairaudit

#endif  // FAIRAUDIT_SCENARIOS_H_

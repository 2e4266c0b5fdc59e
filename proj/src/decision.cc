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

#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fairaudit {

absl::StatusOr<DecisionEV> ExpectedValues(double p,
                                          const OutcomeValues& values) {
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("credence must lie in [0, 1], got %g", p));
  }
  DecisionEV ev;
  ev.act = p * values.tp() + (1.0 - p) * values.fp();
  ev.refrain = (1.0 - p) * values.tn() + p * values.fn();
  return ev;
}

double OptimalThreshold(const OutcomeValues& values) {
  const double negative_stake = values.tn() - values.fp();
  const double positive_stake = values.tp() - values.fn();
  return negative_stake / (negative_stake + positive_stake);
}

absl::StatusOr<std::vector<Decision>> ApplyPolicy(const Population& population,
                                                  const ThresholdPolicy& policy,
                                                  const CalibrationCurve& curve) {
  if (auto s = policy.Covers(population); !s.ok()) return s;
  std::map<std::string, double, std::less<>> thresholds;
  for (const std::string& g : population.groups()) {
    thresholds[g] = *policy.ThresholdFor(g);
  }
  const auto& records = population.records();
  std::vector<Decision> decisions;
  decisions.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    auto p = curve.PScore(records[i].group, population.bin_of_record(i));
    if (!p.has_value()) {
      return absl::InternalError(absl::StrCat(
          "record '", records[i].id,
          "' falls in a bin that is empty in the calibration curve"));
    }
    decisions.push_back(Decide(*p, thresholds.find(records[i].group)->second));
  }
  return decisions;
}

absl::StatusOr<PolicyAssessment> AssessPolicy(const Population& population,
                                              const ThresholdPolicy& policy,
                                              const CalibrationCurve& curve,
                                              const OutcomeValues& values) {
  auto decisions = ApplyPolicy(population, policy, curve);
  if (!decisions.ok()) return decisions.status();

  std::map<std::string, GroupAssessment, std::less<>> by_group;
  for (const std::string& g : population.groups()) by_group[g].group = g;

  const auto& records = population.records();
  for (size_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    GroupAssessment& ga = by_group.find(r.group)->second;
    const double p = *curve.PScore(r.group, population.bin_of_record(i));
    const DecisionEV ev = *ExpectedValues(p, values);
    const double perfect = p * values.tp() + (1.0 - p) * values.tn();
    const bool act = (*decisions)[i] == Decision::kAct;
    const bool positive = r.outcome == Outcome::kPositive;

    const double chosen = act ? ev.act : ev.refrain;
    ga.expected_value += chosen;
    ga.expected_disvalue += perfect - chosen;

    double realized;
    double regret = 0.0;
    if (act) {
      realized = positive ? values.tp() : values.fp();
      if (!positive) regret = values.tn() - values.fp();
      ++ga.acted;
    } else {
      realized = positive ? values.fn() : values.tn();
      if (positive) regret = values.tp() - values.fn();
      ++ga.refrained;
    }
    ga.realized_value += realized;
    ga.realized_disvalue += regret;
  }

  PolicyAssessment out;
  out.total.group = "total";
  for (const std::string& g : population.groups()) {
    const GroupAssessment& ga = by_group.find(g)->second;
    out.total.acted += ga.acted;
    out.total.refrained += ga.refrained;
    out.total.expected_value += ga.expected_value;
    out.total.expected_disvalue += ga.expected_disvalue;
    out.total.realized_value += ga.realized_value;
    out.total.realized_disvalue += ga.realized_disvalue;
    out.groups.push_back(ga);
  }
  return out;
}

absl::StatusOr<ThresholdPolicy> TranslateScoreCut(const CalibrationCurve& curve,
                                                  double cut) {
  const BinScheme& bins = curve.bins();
  auto first_acted = BinOf(cut, bins);
  if (!first_acted.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "score cut cannot be translated: ", first_acted.status().message()));
  }
  std::map<std::string, double> thresholds;
  for (const std::string& g : curve.groups()) {
    const auto& cells = curve.cells(g);
    double threshold = 1.0;
    bool any_acted = false;
    for (size_t b = *first_acted; b < cells.size(); ++b) {
      if (auto p = cells[b].p_score()) {
        threshold = any_acted ? std::min(threshold, *p) : *p;
        any_acted = true;
      }
    }
    for (size_t b = 0; b < *first_acted; ++b) {
      auto p = cells[b].p_score();
      if (p && *p >= threshold) {
        return absl::FailedPreconditionError(absl::StrFormat(
            "score cut %g cannot be expressed as a p_score threshold for group "
            "'%s': bin %s below the cut has p_score %g >= %g",
            cut, g, bins.label(b), *p, threshold));
      }
    }
    thresholds[g] = threshold;
  }
  const double first = thresholds.begin()->second;
  bool uniform = true;
  for (const auto& [g, t] : thresholds) uniform = uniform && t == first;
  if (uniform) return ThresholdPolicy::Uniform(first);
  return ThresholdPolicy::PerGroup(std::move(thresholds));
}

}  // namespace fairaudit

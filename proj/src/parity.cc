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

#include "fairaudit/parity.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fairaudit {

namespace {

// FPR and acted count of one group as a function of its threshold.
class GroupErrorProfile {
 public:
  GroupErrorProfile(const CalibrationCurve& curve, const std::string& group)
      : cells_(curve.cells(group)) {
    for (const auto& c : cells_) negatives_ += c.count - c.positives;
  }

  int64_t negatives() const { return negatives_; }

  double Fpr(double threshold) const {
    int64_t fp = 0;
    for (const auto& c : cells_) {
      if (auto p = c.p_score(); p && Decide(*p, threshold) == Decision::kAct) {
        fp += c.count - c.positives;
      }
    }
    return static_cast<double>(fp) / static_cast<double>(negatives_);
  }

  int64_t Acted(double threshold) const {
    int64_t acted = 0;
    for (const auto& c : cells_) {
      if (auto p = c.p_score(); p && Decide(*p, threshold) == Decision::kAct) {
        acted += c.count;
      }
    }
    return acted;
  }

  // 0, every distinct p_score of a nonempty bin, and 1, ascending.
  std::vector<double> CutPoints() const {
    std::set<double> cuts = {0.0, 1.0};
    for (const auto& c : cells_) {
      if (auto p = c.p_score()) cuts.insert(*p);
    }
    return {cuts.begin(), cuts.end()};
  }

 private:
  const std::vector<CalibrationCurve::Cell>& cells_;
  int64_t negatives_ = 0;
};

}  // namespace

absl::StatusOr<EqualizationResult> EqualizeFpr(const Population& population,
                                               const CalibrationCurve& curve,
                                               const ThresholdPolicy& baseline,
                                               double tolerance,
                                               const OutcomeValues& values,
                                               EqualizationAnchor anchor) {
  if (!(tolerance > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("tolerance must be > 0, got %g", tolerance));
  }
  if (auto s = baseline.Covers(population); !s.ok()) return s;

  const auto& groups = population.groups();
  std::vector<GroupErrorProfile> profiles;
  EqualizationResult result;
  result.anchor = anchor;
  result.tolerance = tolerance;
  for (const std::string& g : groups) {
    profiles.emplace_back(curve, g);
    if (profiles.back().negatives() == 0) {
      return absl::FailedPreconditionError(absl::StrCat(
          "group '", g, "' has no negatives; its FPR is undefined"));
    }
    GroupEqualization ge;
    ge.group = g;
    ge.baseline_threshold = *baseline.ThresholdFor(g);
    ge.baseline_fpr = profiles.back().Fpr(ge.baseline_threshold);
    ge.baseline_acted = profiles.back().Acted(ge.baseline_threshold);
    result.groups.push_back(ge);
  }

  size_t anchor_index = 0;
  for (size_t i = 1; i < groups.size(); ++i) {
    const double fpr = result.groups[i].baseline_fpr;
    const double best = result.groups[anchor_index].baseline_fpr;
    if (anchor == EqualizationAnchor::kHoldHighestFpr ? fpr > best
                                                      : fpr < best) {
      anchor_index = i;
    }
  }
  result.anchor_group = groups[anchor_index];
  const double target = result.groups[anchor_index].baseline_fpr;

  std::map<std::string, double> thresholds;
  for (size_t i = 0; i < groups.size(); ++i) {
    GroupEqualization& ge = result.groups[i];
    ge.threshold = ge.baseline_threshold;
    if (i != anchor_index && std::abs(ge.baseline_fpr - target) > tolerance) {
      // Closest FPR first, then the smallest move away from baseline, then the
      // higher threshold.
      auto key = [&](double t) {
        return std::make_tuple(std::abs(profiles[i].Fpr(t) - target),
                               std::abs(t - ge.baseline_threshold), -t);
      };
      for (double t : profiles[i].CutPoints()) {
        if (key(t) < key(ge.threshold)) ge.threshold = t;
      }
    }
    ge.fpr = profiles[i].Fpr(ge.threshold);
    ge.acted = profiles[i].Acted(ge.threshold);
    thresholds[ge.group] = ge.threshold;
  }

  auto [lo, hi] = std::minmax_element(
      result.groups.begin(), result.groups.end(),
      [](const auto& a, const auto& b) { return a.fpr < b.fpr; });
  result.residual_gap = hi->fpr - lo->fpr;
  result.exact_parity = result.residual_gap <= tolerance;

  auto policy = ThresholdPolicy::PerGroup(std::move(thresholds));
  if (!policy.ok()) return policy.status();
  result.policy = *policy;

  auto before = AssessPolicy(population, baseline, curve, values);
  if (!before.ok()) return before.status();
  auto after = AssessPolicy(population, result.policy, curve, values);
  if (!after.ok()) return after.status();
  result.baseline_expected_disvalue = before->total.expected_disvalue;
  result.equalized_expected_disvalue = after->total.expected_disvalue;
  result.disvalue_delta =
      result.equalized_expected_disvalue - result.baseline_expected_disvalue;
  return result;
}

namespace {

absl::StatusOr<ImpossibilityVerdict> VerdictForPair(
    const Population& population, const CalibrationCurve& curve,
    double threshold, double calib_tolerance, const std::string& first,
    const std::string& second) {
  auto policy = ThresholdPolicy::Uniform(threshold);
  if (!policy.ok()) return policy.status();
  if (!(calib_tolerance >= 0.0)) {
    return absl::InvalidArgumentError("calibration tolerance must be >= 0");
  }

  ImpossibilityVerdict v;
  v.calib_tolerance = calib_tolerance;
  bool decisive = true;
  for (const std::string& g : {first, second}) {
    auto cm = ConfusionForGroup(population, g, *policy, curve);
    if (!cm.ok()) return cm.status();
    auto fpr = FalsePositiveRate(*cm);
    if (!fpr.has_value()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "group '", g, "' has no negatives; its FPR is undefined"));
    }
    v.fpr[g] = *fpr;
    v.base_rates[g] = static_cast<double>(cm->positives()) /
                      static_cast<double>(cm->total());
    bool acted_bin = false;
    bool refrained_bin = false;
    for (const auto& c : curve.cells(g)) {
      auto p = c.p_score();
      if (!p) continue;
      (Decide(*p, threshold) == Decision::kAct ? acted_bin : refrained_bin) =
          true;
    }
    decisive = decisive && acted_bin && refrained_bin;
  }
  v.decisive = decisive;

  const bool second_higher = v.base_rates[second] > v.base_rates[first];
  v.higher_base_rate_group = second_higher ? second : first;
  v.lower_base_rate_group = second_higher ? first : second;
  v.base_rates_differ = v.base_rates[first] != v.base_rates[second];

  auto gap = CalibrationGap(curve, first, second);
  if (!gap.ok()) return gap.status();
  v.calibration_gap = *gap;
  v.calibrated = *gap <= calib_tolerance;

  const double fpr_hi = v.fpr[v.higher_base_rate_group];
  const double fpr_lo = v.fpr[v.lower_base_rate_group];
  if (!v.calibrated) {
    v.note = absl::StrFormat(
        "not calibrated (gap %g > tolerance %g); ordering not asserted",
        v.calibration_gap, calib_tolerance);
  } else if (!v.base_rates_differ) {
    v.note = "base rates are equal; ordering not asserted";
  } else if (!v.decisive) {
    v.note =
        "threshold acts on every bin or on none for some group; ordering not "
        "asserted";
  } else {
    v.ordering_holds = fpr_hi >= fpr_lo;
    v.strict = fpr_hi > fpr_lo;
    v.note = v.ordering_holds
                 ? absl::StrFormat(
                       "calibrated with unequal base rates: FPR of '%s' (%g) "
                       ">= FPR of '%s' (%g)",
                       v.higher_base_rate_group, fpr_hi,
                       v.lower_base_rate_group, fpr_lo)
                 : absl::StrFormat(
                       "ordering violated: FPR of higher-base-rate group '%s' "
                       "(%g) < FPR of '%s' (%g)",
                       v.higher_base_rate_group, fpr_hi,
                       v.lower_base_rate_group, fpr_lo);
  }
  return v;
}

}  // namespace

absl::StatusOr<ImpossibilityVerdict> CheckImpossibility(
    const Population& population, const CalibrationCurve& curve,
    double uniform_threshold, double calib_tolerance) {
  const auto& groups = population.groups();
  if (groups.size() != 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "impossibility check needs exactly 2 groups, got ", groups.size(),
        "; use CheckImpossibilityPairwise"));
  }
  return VerdictForPair(population, curve, uniform_threshold, calib_tolerance,
                        groups[0], groups[1]);
}

absl::StatusOr<std::vector<ImpossibilityVerdict>> CheckImpossibilityPairwise(
    const Population& population, const CalibrationCurve& curve,
    double uniform_threshold, double calib_tolerance) {
  const auto& groups = population.groups();
  std::string highest = groups.front();
  double highest_rate = *BaseRate(population, highest);
  for (const std::string& g : groups) {
    const double rate = *BaseRate(population, g);
    if (rate > highest_rate) {
      highest = g;
      highest_rate = rate;
    }
  }
  std::vector<ImpossibilityVerdict> out;
  for (const std::string& g : groups) {
    if (g == highest) continue;
    auto v = VerdictForPair(population, curve, uniform_threshold,
                            calib_tolerance, highest, g);
    if (!v.ok()) return v.status();
    out.push_back(*std::move(v));
  }
  return out;
}

absl::StatusOr<double> IndividualErrorRisk(const Record& record,
                                           const CalibrationCurve& curve,
                                           const ThresholdPolicy& policy) {
  auto bin = BinOf(record.score, curve.bins());
  if (!bin.ok()) return bin.status();
  auto cell = curve.cell(record.group, *bin);
  if (!cell.ok()) return cell.status();
  auto p = cell->p_score();
  if (!p.has_value()) {
    return absl::FailedPreconditionError(
        absl::StrCat("bin ", curve.bins().label(*bin), " is empty for group '",
                     record.group, "'"));
  }
  auto threshold = policy.ThresholdFor(record.group);
  if (!threshold.ok()) return threshold.status();
  return Decide(*p, *threshold) == Decision::kAct ? 1.0 - *p : *p;
}

absl::StatusOr<LotteryResult> FairLottery(
    const std::map<std::string, int64_t>& group_counts, int64_t quota) {
  LotteryResult out;
  for (const auto& [g, n] : group_counts) {
    if (n < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative count for group '", g, "'"));
    }
    out.total += n;
  }
  if (out.total == 0) {
    return absl::InvalidArgumentError("lottery has no participants");
  }
  if (quota < 0 || quota > out.total) {
    return absl::InvalidArgumentError(absl::StrCat(
        "exclusion quota ", quota, " must lie in [0, ", out.total, "]"));
  }
  out.quota = quota;
  out.probability =
      static_cast<double>(quota) / static_cast<double>(out.total);
  for (const auto& [g, n] : group_counts) {
    out.expected_excluded[g] = out.probability * static_cast<double>(n);
    out.fair_lottery_ratio[g] = out.probability;
  }
  return out;
}

}  // namespace fairaudit

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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "string_view.h"

namespace fairaudit {

namespace {

std::optional<double> Ratio(int64_t num, int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

const std::vector<CalibrationCurve::Cell>& EmptyCells() {
  static const auto* const kEmpty = new std::vector<CalibrationCurve::Cell>();
  return *kEmpty;
}

}  // namespace

std::optional<double> CalibrationCurve::Cell::p_score() const {
  return Ratio(positives, count);
}

bool CalibrationCurve::HasGroup(std::string_view group) const {
  return cells_.find(group) != cells_.end();
}

absl::StatusOr<CalibrationCurve::Cell> CalibrationCurve::cell(
    std::string_view group, size_t bin) const {
  auto it = cells_.find(group);
  if (it == cells_.end()) {
    return absl::NotFoundError(
        absl::StrCat("calibration curve has no group '", Sv(group), "'"));
  }
  if (bin >= it->second.size()) {
    return absl::OutOfRangeError(absl::StrCat("bin index ", bin,
                                              " out of range for ",
                                              it->second.size(), " bins"));
  }
  return it->second[bin];
}

std::optional<double> CalibrationCurve::PScore(std::string_view group,
                                               size_t bin) const {
  auto c = cell(group, bin);
  if (!c.ok()) return std::nullopt;
  return c->p_score();
}

const std::vector<CalibrationCurve::Cell>& CalibrationCurve::cells(
    std::string_view group) const {
  auto it = cells_.find(group);
  return it == cells_.end() ? EmptyCells() : it->second;
}

CalibrationCurve BuildCalibrationCurve(const Population& population) {
  CalibrationCurve curve(population.bins());
  curve.groups_ = population.groups();
  for (const std::string& g : population.groups()) {
    curve.cells_[g].resize(population.bins().size());
  }
  const auto& records = population.records();
  for (size_t i = 0; i < records.size(); ++i) {
    auto& cell = curve.cells_[records[i].group][population.bin_of_record(i)];
    ++cell.count;
    if (records[i].outcome == Outcome::kPositive) ++cell.positives;
  }
  return curve;
}

absl::StatusOr<ConfusionMatrix> ConfusionForGroup(const Population& population,
                                                  std::string_view group,
                                                  const ThresholdPolicy& policy,
                                                  const CalibrationCurve& curve) {
  if (!population.HasGroup(group)) {
    return absl::NotFoundError(absl::StrCat("unknown group '", Sv(group), "'"));
  }
  auto threshold = policy.ThresholdFor(group);
  if (!threshold.ok()) return threshold.status();
  if (!curve.HasGroup(group)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "calibration curve does not cover group '", Sv(group), "'"));
  }

  ConfusionMatrix cm;
  const auto& records = population.records();
  for (size_t i = 0; i < records.size(); ++i) {
    const Record& r = records[i];
    if (r.group != group) continue;
    auto p = curve.PScore(group, population.bin_of_record(i));
    if (!p.has_value()) {
      return absl::InternalError(absl::StrCat(
          "record '", r.id, "' falls in a bin that is empty in the curve; the "
          "curve was not built from this population"));
    }
    const bool act = Decide(*p, *threshold) == Decision::kAct;
    const bool positive = r.outcome == Outcome::kPositive;
    if (act && positive) {
      ++cm.tp;
    } else if (act) {
      ++cm.fp;
    } else if (positive) {
      ++cm.fn;
    } else {
      ++cm.tn;
    }
  }
  return cm;
}

std::optional<double> FalsePositiveRate(const ConfusionMatrix& cm) {
  return Ratio(cm.fp, cm.fp + cm.tn);
}

std::optional<double> FalseNegativeRate(const ConfusionMatrix& cm) {
  return Ratio(cm.fn, cm.fn + cm.tp);
}

std::optional<double> PositivePredictiveValue(const ConfusionMatrix& cm) {
  return Ratio(cm.tp, cm.tp + cm.fp);
}

absl::StatusOr<double> BaseRate(const Population& population,
                                std::string_view group) {
  if (!population.HasGroup(group)) {
    return absl::NotFoundError(absl::StrCat("unknown group '", Sv(group), "'"));
  }
  int64_t n = 0;
  int64_t positives = 0;
  for (const Record& r : population.records()) {
    if (r.group != group) continue;
    ++n;
    if (r.outcome == Outcome::kPositive) ++positives;
  }
  return static_cast<double>(positives) / static_cast<double>(n);
}

absl::StatusOr<std::vector<GroupMetrics>> ComputeGroupMetrics(
    const Population& population, const ThresholdPolicy& policy,
    const CalibrationCurve& curve) {
  std::vector<GroupMetrics> out;
  out.reserve(population.groups().size());
  for (const std::string& g : population.groups()) {
    auto cm = ConfusionForGroup(population, g, policy, curve);
    if (!cm.ok()) return cm.status();
    GroupMetrics m;
    m.group = g;
    m.confusion = *cm;
    m.fpr = FalsePositiveRate(*cm);
    m.fnr = FalseNegativeRate(*cm);
    m.ppv = PositivePredictiveValue(*cm);
    m.base_rate = static_cast<double>(cm->positives()) /
                  static_cast<double>(cm->total());
    out.push_back(std::move(m));
  }
  return out;
}

absl::StatusOr<double> CalibrationGap(const CalibrationCurve& curve,
                                      std::string_view group_a,
                                      std::string_view group_b) {
  for (std::string_view g : {group_a, group_b}) {
    if (!curve.HasGroup(g)) {
      return absl::NotFoundError(absl::StrCat("unknown group '", Sv(g), "'"));
    }
  }
  const auto& a = curve.cells(group_a);
  const auto& b = curve.cells(group_b);
  double gap = 0.0;
  for (size_t bin = 0; bin < a.size(); ++bin) {
    auto pa = a[bin].p_score();
    auto pb = b[bin].p_score();
    if (pa && pb) gap = std::max(gap, std::abs(*pa - *pb));
  }
  return gap;
}

double MaxCalibrationGap(const CalibrationCurve& curve) {
  double gap = 0.0;
  const auto& groups = curve.groups();
  for (size_t i = 0; i < groups.size(); ++i) {
    for (size_t j = i + 1; j < groups.size(); ++j) {
      gap = std::max(gap, *CalibrationGap(curve, groups[i], groups[j]));
    }
  }
  return gap;
}

absl::StatusOr<double> ChanceMiscalibrationBound(int64_t n, double p,
                                                 double gap) {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("p must lie in [0, 1], got %g", p));
  }
  if (!(gap > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gap must be > 0, got %g", gap));
  }
  const double bound =
      p * (1.0 - p) / (static_cast<double>(n) * gap * gap);
  return std::min(1.0, bound);
}

}  // namespace fairaudit

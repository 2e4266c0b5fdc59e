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

#include "fairaudit/domain.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "string_view.h"

namespace fairaudit {

absl::StatusOr<BinScheme> BinScheme::Create(std::vector<double> edges,
                                            std::vector<std::string> labels) {
  if (edges.size() < 3) {
    return absl::InvalidArgumentError(absl::StrCat(
        "a bin scheme needs at least 2 bins (3 edges), got ", edges.size(),
        " edges"));
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("bin edge ", i, " is not finite"));
    }
    if (i > 0 && !(edges[i] > edges[i - 1])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "bin edges must be strictly increasing: edge %d (%g) <= edge %d (%g)",
          i, edges[i], i - 1, edges[i - 1]));
    }
  }
  if (!labels.empty() && labels.size() != edges.size() - 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", edges.size() - 1, " bin labels, got ",
                     labels.size()));
  }
  return BinScheme(std::move(edges), std::move(labels));
}

absl::StatusOr<BinScheme> BinScheme::IntegerScale(int lo, int hi) {
  if (hi <= lo) {
    return absl::InvalidArgumentError(
        absl::StrCat("integer scale needs lo < hi, got ", lo, "..", hi));
  }
  std::vector<double> edges;
  std::vector<std::string> labels;
  for (int s = lo; s <= hi; ++s) {
    edges.push_back(s - 0.5);
    labels.push_back(absl::StrCat(s));
  }
  edges.push_back(hi + 0.5);
  return Create(std::move(edges), std::move(labels));
}

std::string BinScheme::label(size_t bin) const {
  if (!labels_.empty()) return labels_[bin];
  const bool last = bin + 1 == size();
  return absl::StrFormat("[%g, %g%s", edges_[bin], edges_[bin + 1],
                         last ? "]" : ")");
}

bool BinScheme::Contains(double score) const {
  return score >= lower() && score <= upper();
}

absl::StatusOr<size_t> BinOf(double score, const BinScheme& bins) {
  if (!bins.Contains(score)) {
    return absl::OutOfRangeError(absl::StrFormat(
        "score %g outside declared range [%g, %g]", score, bins.lower(),
        bins.upper()));
  }
  const auto& edges = bins.edges();
  // First edge strictly greater than the score closes the containing bin.
  auto it = std::upper_bound(edges.begin(), edges.end(), score);
  size_t bin = static_cast<size_t>(it - edges.begin()) - 1;
  return std::min(bin, bins.size() - 1);
}

bool Population::HasGroup(std::string_view group) const {
  return std::binary_search(groups_.begin(), groups_.end(), group);
}

int64_t Population::GroupSize(std::string_view group) const {
  return std::count_if(records_.begin(), records_.end(),
                       [&](const Record& r) { return r.group == group; });
}

absl::StatusOr<Population> ValidatePopulation(std::vector<Record> records,
                                              BinScheme bins,
                                              ActionValence valence) {
  if (records.empty()) {
    return absl::InvalidArgumentError("population has no records");
  }
  std::set<std::string> groups;
  std::vector<size_t> record_bins;
  record_bins.reserve(records.size());
  for (const Record& r : records) {
    if (r.group.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("empty group label on record '", r.id, "'"));
    }
    auto bin = BinOf(r.score, bins);
    if (!bin.ok()) {
      return absl::OutOfRangeError(absl::StrCat(
          "score out of range on record '", r.id, "': ", bin.status().message()));
    }
    record_bins.push_back(*bin);
    groups.insert(r.group);
  }
  if (groups.size() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "fewer than two groups: every record belongs to group '",
        *groups.begin(), "'"));
  }
  return Population(std::move(records),
                    std::vector<std::string>(groups.begin(), groups.end()),
                    std::move(record_bins), std::move(bins), valence);
}

absl::StatusOr<OutcomeValues> OutcomeValues::Create(double tp, double fp,
                                                    double tn, double fn) {
  for (double v : {tp, fp, tn, fn}) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("outcome values must be finite");
    }
  }
  if (!(tn > fp)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "refraining must be strictly better on negatives: need TN > FP, got "
        "TN=%g FP=%g",
        tn, fp));
  }
  if (!(tp > fn)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "acting must be strictly better on positives: need TP > FN, got "
        "TP=%g FN=%g",
        tp, fn));
  }
  return OutcomeValues(tp, fp, tn, fn);
}

namespace {

absl::Status CheckThreshold(double t, std::string_view what) {
  if (!(t >= 0.0 && t <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("threshold for %s must lie in [0, 1], got %g", Sv(what), t));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ThresholdPolicy> ThresholdPolicy::Uniform(double threshold) {
  if (auto s = CheckThreshold(threshold, "all groups"); !s.ok()) return s;
  ThresholdPolicy policy;
  policy.uniform_ = true;
  policy.uniform_threshold_ = threshold;
  return policy;
}

absl::StatusOr<ThresholdPolicy> ThresholdPolicy::PerGroup(
    std::map<std::string, double> thresholds) {
  if (thresholds.empty()) {
    return absl::InvalidArgumentError("per-group policy has no groups");
  }
  for (const auto& [group, t] : thresholds) {
    if (auto s = CheckThreshold(t, absl::StrCat("group '", group, "'"));
        !s.ok()) {
      return s;
    }
  }
  ThresholdPolicy policy;
  policy.uniform_ = false;
  policy.per_group_ = std::move(thresholds);
  return policy;
}

absl::StatusOr<double> ThresholdPolicy::ThresholdFor(
    std::string_view group) const {
  if (uniform_) return uniform_threshold_;
  auto it = per_group_.find(std::string(group));
  if (it == per_group_.end()) {
    return absl::NotFoundError(
        absl::StrCat("policy has no threshold for group '", Sv(group), "'"));
  }
  return it->second;
}

absl::Status ThresholdPolicy::Covers(const Population& population) const {
  for (const std::string& g : population.groups()) {
    if (auto t = ThresholdFor(g); !t.ok()) return t.status();
  }
  return absl::OkStatus();
}

}  // namespace fairaudit

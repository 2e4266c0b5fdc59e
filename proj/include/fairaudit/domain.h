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

// Core value types shared by every fairaudit module: scored records, bin
// schemes, validated populations, confusion matrices, outcome utilities and
// threshold policies. Everything here is immutable after construction.

#ifndef FAIRAUDIT_DOMAIN_H_
#define FAIRAUDIT_DOMAIN_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace fairaudit {

// Whether the individual actually has the predicted property (rearrested,
// too tall, deserving a B, ...).
enum class Outcome { kNegative, kPositive };

// The action taken on an individual: act (detain, exclude, assign B, give a
// benefit) or refrain.
enum class Decision { kRefrain, kAct };

// Whether taking the action harms or benefits its subject. Only affects the
// narrative of reports, never the arithmetic.
enum class ActionValence { kHarmsSubject, kBenefitsSubject };

struct Record {
  std::string id;
  std::string group;
  double score = 0.0;
  Outcome outcome = Outcome::kNegative;

  friend bool operator==(const Record&, const Record&) = default;
};

// Ordered, contiguous score intervals [e0, e1), [e1, e2), ..., [ek-1, ek].
// Every bin is half-open except the last, which is closed on top, so the
// declared score range is [e0, ek].
class BinScheme {
 public:
  // `edges` must be strictly increasing with at least three entries (two
  // bins). `labels` is either empty or has one entry per bin.
  static absl::StatusOr<BinScheme> Create(std::vector<double> edges,
                                          std::vector<std::string> labels = {});

  // One bin per integer score in [lo, hi], with edges at half-integers and
  // the integer itself as label.
  static absl::StatusOr<BinScheme> IntegerScale(int lo, int hi);

  size_t size() const { return edges_.size() - 1; }
  double lower() const { return edges_.front(); }
  double upper() const { return edges_.back(); }
  double bin_lower(size_t bin) const { return edges_[bin]; }
  double bin_upper(size_t bin) const { return edges_[bin + 1]; }
  const std::vector<double>& edges() const { return edges_; }
  // Explicit label, or "[lo, hi)" when none was given.
  std::string label(size_t bin) const;
  bool has_labels() const { return !labels_.empty(); }

  bool Contains(double score) const;

  friend bool operator==(const BinScheme&, const BinScheme&) = default;

 private:
  BinScheme(std::vector<double> edges, std::vector<std::string> labels)
      : edges_(std::move(edges)), labels_(std::move(labels)) {}

  std::vector<double> edges_;
  std::vector<std::string> labels_;
};

// Index of the unique bin containing `score`; OutOfRange when the score is
// outside the scheme's declared range.
absl::StatusOr<size_t> BinOf(double score, const BinScheme& bins);

// A validated collection of records. Construct with ValidatePopulation().
class Population {
 public:
  const std::vector<Record>& records() const { return records_; }
  // Distinct group labels, sorted lexicographically for determinism only.
  const std::vector<std::string>& groups() const { return groups_; }
  const BinScheme& bins() const { return bins_; }
  ActionValence valence() const { return valence_; }
  bool action_benefits_subject() const {
    return valence_ == ActionValence::kBenefitsSubject;
  }

  // Bin index of records()[i].
  size_t bin_of_record(size_t i) const { return record_bins_[i]; }
  bool HasGroup(std::string_view group) const;
  int64_t GroupSize(std::string_view group) const;

  friend bool operator==(const Population&, const Population&) = default;

 private:
  friend absl::StatusOr<Population> ValidatePopulation(std::vector<Record>,
                                                       BinScheme,
                                                       ActionValence);
  Population(std::vector<Record> records, std::vector<std::string> groups,
             std::vector<size_t> record_bins, BinScheme bins,
             ActionValence valence)
      : records_(std::move(records)),
        groups_(std::move(groups)),
        record_bins_(std::move(record_bins)),
        bins_(std::move(bins)),
        valence_(valence) {}

  std::vector<Record> records_;
  std::vector<std::string> groups_;
  std::vector<size_t> record_bins_;
  BinScheme bins_;
  ActionValence valence_;
};

// Checks that records are nonempty, every group label is nonempty, every
// score lies in the bin scheme's range and there are at least two groups.
// Errors name the offending record or group.
absl::StatusOr<Population> ValidatePopulation(std::vector<Record> records,
                                              BinScheme bins,
                                              ActionValence valence);

struct ConfusionMatrix {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t tn = 0;
  int64_t fn = 0;

  int64_t total() const { return tp + fp + tn + fn; }
  int64_t negatives() const { return fp + tn; }
  int64_t positives() const { return tp + fn; }

  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;
};

// Utilities of the four decision outcomes. Requires tn > fp and tp > fn so
// that an interior optimal threshold exists.
class OutcomeValues {
 public:
  static absl::StatusOr<OutcomeValues> Create(double tp, double fp, double tn,
                                              double fn);
  // (tp, fp, tn, fn) = (1, 0, 1, 0): every error costs one unit.
  static OutcomeValues Symmetric() { return OutcomeValues(1, 0, 1, 0); }

  double tp() const { return tp_; }
  double fp() const { return fp_; }
  double tn() const { return tn_; }
  double fn() const { return fn_; }

  friend bool operator==(const OutcomeValues&, const OutcomeValues&) = default;

 private:
  OutcomeValues(double tp, double fp, double tn, double fn)
      : tp_(tp), fp_(fp), tn_(tn), fn_(fn) {}

  double tp_;
  double fp_;
  double tn_;
  double fn_;
};

// Maps groups to probability thresholds in [0, 1]. A record is acted on iff
// the p_score of its bin is >= its group's threshold.
class ThresholdPolicy {
 public:
  // Uniform threshold 0: acts on everyone.
  ThresholdPolicy() = default;

  static absl::StatusOr<ThresholdPolicy> Uniform(double threshold);
  static absl::StatusOr<ThresholdPolicy> PerGroup(
      std::map<std::string, double> thresholds);

  bool is_uniform() const { return uniform_; }
  // Only meaningful when is_uniform().
  double uniform_threshold() const { return uniform_threshold_; }
  const std::map<std::string, double>& per_group() const { return per_group_; }

  absl::StatusOr<double> ThresholdFor(std::string_view group) const;
  // OK iff every group of `population` has a threshold.
  absl::Status Covers(const Population& population) const;

  friend bool operator==(const ThresholdPolicy&,
                         const ThresholdPolicy&) = default;

 private:
  bool uniform_ = true;
  double uniform_threshold_ = 0.0;
  std::map<std::string, double> per_group_;
};

// The closed-at-threshold decision rule used everywhere.
inline Decision Decide(double p_score, double threshold) {
  return p_score >= threshold ? Decision::kAct : Decision::kRefrain;
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_DOMAIN_H_

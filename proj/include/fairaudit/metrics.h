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

#ifndef FAIRAUDIT_METRICS_H_
#define FAIRAUDIT_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fairaudit/domain.h"

namespace fairaudit {

// Error rates of one group under one policy. Rates whose denominator is
// empty are std::nullopt.
struct GroupMetrics {
  std::string group;
  ConfusionMatrix confusion;
  std::optional<double> fpr;
  std::optional<double> fnr;
  std::optional<double> ppv;
  double base_rate = 0.0;

  friend bool operator==(const GroupMetrics&, const GroupMetrics&) = default;
};

// Per (group, bin) record counts and positive fractions (p_score).
class CalibrationCurve {
 public:
  struct Cell {
    int64_t count = 0;
    int64_t positives = 0;

    bool empty() const { return count == 0; }
    // nullopt for empty cells.
    std::optional<double> p_score() const;

    friend bool operator==(const Cell&, const Cell&) = default;
  };

  const BinScheme& bins() const { return bins_; }
  const std::vector<std::string>& groups() const { return groups_; }
  bool HasGroup(std::string_view group) const;

  absl::StatusOr<Cell> cell(std::string_view group, size_t bin) const;
  // nullopt when the group is unknown or the cell is empty.
  std::optional<double> PScore(std::string_view group, size_t bin) const;
  // All cells of a group in bin order; empty vector for unknown groups.
  const std::vector<Cell>& cells(std::string_view group) const;

  friend bool operator==(const CalibrationCurve&,
                         const CalibrationCurve&) = default;

 private:
  friend CalibrationCurve BuildCalibrationCurve(const Population&);
  explicit CalibrationCurve(BinScheme bins) : bins_(std::move(bins)) {}

  BinScheme bins_;
  std::vector<std::string> groups_;
  std::map<std::string, std::vector<Cell>, std::less<>> cells_;
};

CalibrationCurve BuildCalibrationCurve(const Population& population);

// Classifies each record of `group` by (decision, outcome). A record is
// acted on iff the p_score of its bin is >= the group's threshold.
absl::StatusOr<ConfusionMatrix> ConfusionForGroup(const Population& population,
                                                  std::string_view group,
                                                  const ThresholdPolicy& policy,
                                                  const CalibrationCurve& curve);

// fp / (fp + tn).
std::optional<double> FalsePositiveRate(const ConfusionMatrix& cm);
// fn / (fn + tp): misses as a share of actual positives.
std::optional<double> FalseNegativeRate(const ConfusionMatrix& cm);
// tp / (tp + fp).
std::optional<double> PositivePredictiveValue(const ConfusionMatrix& cm);

absl::StatusOr<double> BaseRate(const Population& population,
                                std::string_view group);

// Metrics for every group of the population, in population.groups() order.
absl::StatusOr<std::vector<GroupMetrics>> ComputeGroupMetrics(
    const Population& population, const ThresholdPolicy& policy,
    const CalibrationCurve& curve);

// Worst-case |p_score_a - p_score_b| over bins nonempty in both groups; 0 when
// no bin is shared.
absl::StatusOr<double> CalibrationGap(const CalibrationCurve& curve,
                                      std::string_view group_a,
                                      std::string_view group_b);

// Largest CalibrationGap over all group pairs.
double MaxCalibrationGap(const CalibrationCurve& curve);

// Chebyshev upper bound min(1, p(1-p) / (n gap^2)) on the probability that an
// observed positive fraction over n records deviates from the true rate p by
// at least `gap` purely by chance.
absl::StatusOr<double> ChanceMiscalibrationBound(int64_t n, double p,
                                                 double gap);

}  // namespace fairaudit

#endif  // FAIRAUDIT_METRICS_H_

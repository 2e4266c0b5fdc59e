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


// Reference computations used to freeze derived values. Each one recomputes
// its quantity from first principles (record lists, closed forms, brute-force
// sums) without calling the library code it checks.

#ifndef FAIRAUDIT_TESTS_ORACLES_H_
#define FAIRAUDIT_TESTS_ORACLES_H_

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairaudit/domain.h"

namespace fairaudit::oracle {

// Utilities as plain numbers so the oracle does not depend on validation.
struct Values {
  double tp, fp, tn, fn;
};

// Smallest point of the grid {0, step, 2 step, ..., 1} at which acting is at
// least as good as refraining, found by evaluating both expectations
// directly. nullopt if acting never wins on the grid.
inline std::optional<double> GridCrossover(const Values& v, double step) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= n; ++i) {
    const double p = i * step;
    const double act = p * v.tp + (1 - p) * v.fp;
    const double refrain = (1 - p) * v.tn + p * v.fn;
    if (act >= refrain) return p;
  }
  return std::nullopt;
}

// P(|X/n - p| >= gap) for X ~ Binomial(n, p), summed term by term in log
// space.
inline double BinomialDeviationProbability(int64_t n, double p, double gap) {
  double total = 0.0;
  for (int64_t k = 0; k <= n; ++k) {
    if (std::fabs(static_cast<double>(k) / n - p) + 1e-15 < gap) continue;
    if ((p == 0.0 && k > 0) || (p == 1.0 && k < n)) continue;
    double log_term = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(n - k + 1.0);
    if (k > 0) log_term += k * std::log(p);
    if (k < n) log_term += (n - k) * std::log1p(-p);
    total += std::exp(log_term);
  }
  return total;
}

// Confusion counts of `group` when records are acted on iff the positive
// fraction of their (group, bin) reaches `threshold`. Bins are found by a
// linear scan of `edges`; p_scores by counting records directly.
struct Counts {
  int64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline size_t LinearBin(double score, const std::vector<double>& edges) {
  for (size_t b = 0; b + 2 < edges.size(); ++b) {
    if (score < edges[b + 1]) return b;
  }
  return edges.size() - 2;
}

inline Counts CountDirectly(const std::vector<Record>& records,
                            const std::vector<double>& edges,
                            const std::string& group, double threshold) {
  std::map<size_t, std::pair<int64_t, int64_t>> cells;  // bin -> (n, pos)
  for (const Record& r : records) {
    if (r.group != group) continue;
    auto& cell = cells[LinearBin(r.score, edges)];
    ++cell.first;
    if (r.outcome == Outcome::kPositive) ++cell.second;
  }
  Counts c;
  for (const Record& r : records) {
    if (r.group != group) continue;
    const auto& cell = cells[LinearBin(r.score, edges)];
    const double p = static_cast<double>(cell.second) / cell.first;
    const bool act = p >= threshold;
    const bool positive = r.outcome == Outcome::kPositive;
    if (act && positive) ++c.tp;
    if (act && !positive) ++c.fp;
    if (!act && !positive) ++c.tn;
    if (!act && positive) ++c.fn;
  }
  return c;
}

// Expected disvalue of acting on `acted` and refraining on the rest, where
// each cell is (count, positives) and outcomes follow the cell's fraction.
// Sums per-record losses against perfect information.
inline double DisvalueBySum(
    const std::vector<std::pair<int64_t, int64_t>>& cells,
    const std::vector<bool>& acted, const Values& v) {
  double total = 0.0;
  for (size_t i = 0; i < cells.size(); ++i) {
    const int64_t negatives = cells[i].first - cells[i].second;
    if (acted[i]) {
      total += negatives * (v.tn - v.fp);  // acted on a negative
    } else {
      total += cells[i].second * (v.tp - v.fn);  // refrained on a positive
    }
  }
  return total;
}

}  // namespace fairaudit::oracle

#endif  // FAIRAUDIT_TESTS_ORACLES_H_

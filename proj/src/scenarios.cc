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

#include "fairaudit/scenarios.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "string_view.h"

namespace fairaudit {

namespace {

using Compare = ExpectedFigure::Compare;

constexpr std::array<std::pair<ScenarioName, std::string_view>, 6> kKeys = {{
    {ScenarioName::kStrideHeight, "stride_height"},
    {ScenarioName::kSectionGrades, "section_grades"},
    {ScenarioName::kCompasSynthetic, "compas_synthetic"},
    {ScenarioName::kCompasBenefit, "compas_benefit"},
    {ScenarioName::kCertaintyLottery, "certainty_lottery"},
    {ScenarioName::kMiscalibratedCompas, "miscalibrated_compas"},
}};

ExpectedFigure Exact(std::string key, double value) {
  return {std::move(key), value, Compare::kNear, 0.0, ""};
}

ExpectedFigure Near(std::string key, double value, double tolerance,
                    std::string rendered = "") {
  return {std::move(key), value, Compare::kNear, tolerance,
          std::move(rendered)};
}

ExpectedFigure Greater(std::string key, double value) {
  return {std::move(key), value, Compare::kGreater, 0.0, ""};
}

ExpectedFigure Less(std::string key, double value) {
  return {std::move(key), value, Compare::kLess, 0.0, ""};
}

// Appends `count` records of one (group, bin) cell, the first `positives` of
// them positive. Scores cycle through integer offsets inside the bin so that
// exported files look like real data while staying in the same bin.
class RecordBuilder {
 public:
  explicit RecordBuilder(const BinScheme& bins) : bins_(bins) {}

  void Add(const std::string& group, size_t bin, int64_t count,
           int64_t positives) {
    const double lo = bins_.bin_lower(bin);
    const double hi = bins_.bin_upper(bin);
    const int64_t span = std::max<int64_t>(1, static_cast<int64_t>(hi - lo));
    for (int64_t i = 0; i < count; ++i) {
      Record r;
      r.id = absl::StrFormat("%s-%05d", group, ++next_id_[group]);
      r.group = group;
      // Integer scales have unit-width bins centred on the integer.
      r.score = (hi - lo) <= 1.0 ? (lo + hi) / 2.0
                                 : lo + static_cast<double>(i % span);
      r.outcome = i < positives ? Outcome::kPositive : Outcome::kNegative;
      records_.push_back(std::move(r));
    }
  }

  std::vector<Record> Take() { return std::move(records_); }

 private:
  const BinScheme& bins_;
  std::map<std::string, int> next_id_;
  std::vector<Record> records_;
};

// (count, positives) per bin for one group.
using CellCounts = std::vector<std::pair<int64_t, int64_t>>;

absl::StatusOr<Population> FromCells(
    const BinScheme& bins, const std::vector<std::pair<std::string, CellCounts>>& groups,
    ActionValence valence) {
  RecordBuilder builder(bins);
  for (const auto& [group, cells] : groups) {
    for (size_t b = 0; b < cells.size(); ++b) {
      builder.Add(group, b, cells[b].first, cells[b].second);
    }
  }
  return ValidatePopulation(builder.Take(), bins, valence);
}

absl::StatusOr<Scenario> StrideHeight() {
  auto bins = BinScheme::Create({100, 160, 220}, {"low", "high"});
  if (!bins.ok()) return bins.status();
  // Published: women 20 false positives among 100 not-TTFS, men 40 among 80,
  // and the high bin (stride >= 160) is TTFS 80% of the time. The positives
  // are completed from 80%/20% calibration of the two bins:
  //   women: high = 20 / 0.2 = 100 -> tp 80; low tn 80 at 20% -> fn 20
  //   men:   high = 40 / 0.2 = 200 -> tp 160; low tn 40 at 20% -> fn 10
  auto population = FromCells(*bins,
                              {{"men", {{50, 10}, {200, 160}}},
                               {"women", {{100, 20}, {100, 80}}}},
                              ActionValence::kHarmsSubject);
  if (!population.ok()) return population.status();

  ScenarioSpec spec;
  spec.name = ScenarioName::kStrideHeight;
  spec.title = "Stride-height predictor: exclusion from a spelunking trip";
  spec.threshold = "score>=160";
  spec.equalize = EqualizationAnchor::kHoldLowestFpr;
  spec.expected = {
      Exact("fp/women", 20),        Exact("negatives/women", 100),
      Exact("fp/men", 40),          Exact("negatives/men", 80),
      Exact("fpr/women", 0.20),     Exact("fpr/men", 0.50),
      Exact("tp/women", 80),        Exact("tn/women", 80),
      Exact("fn/women", 20),        Exact("tp/men", 160),
      Exact("tn/men", 40),          Exact("fn/men", 10),
      Exact("p_score/men/high", 0.80), Exact("p_score/women/high", 0.80),
      Exact("calibration_gap", 0.0), Exact("ordering_holds", 1),
      Greater("threshold_raise/men", 0.0), Greater("disvalue_delta", 0.0),
  };
  spec.notes = {
      "False positives and not-TTFS counts per sex are the published figures; "
      "positives per bin are completed from 80%/20% bin calibration "
      "(women tp=80 fn=20, men tp=160 fn=10).",
      "Equalization holds women's FPR fixed: lowering women's threshold "
      "cannot get closer than the baseline on two bins, so men's exclusion "
      "threshold is raised instead.",
  };
  return Scenario{*std::move(population), std::move(spec)};
}

absl::StatusOr<Scenario> SectionGrades() {
  auto bins =
      BinScheme::Create({0, 40, 70, 100}, {"clear A", "borderline", "B"});
  if (!bins.ok()) return bins.status();
  // Positive = a true B paper; acting = assigning a B. Published: section 1
  // has 10 true B and 20 true A papers, section 2 has 20 and 10; each section
  // gets as many Bs as it has true Bs and a B is right 80% of the time.
  // The papers graded A are split into "clear A" (never a true B) and
  // "borderline" (a true B half the time) so every bin is calibrated:
  //   section 1: 16 clear A, 4 borderline (2 true B), 10 B (8 true B)
  //   section 2:  2 clear A, 8 borderline (4 true B), 20 B (16 true B)
  auto population = FromCells(*bins,
                              {{"section 1", {{16, 0}, {4, 2}, {10, 8}}},
                               {"section 2", {{2, 0}, {8, 4}, {20, 16}}}},
                              ActionValence::kHarmsSubject);
  if (!population.ok()) return population.status();

  ScenarioSpec spec;
  spec.name = ScenarioName::kSectionGrades;
  spec.title = "Section grades: a calibrated grader and two discussion sections";
  spec.threshold = "score>=70";
  spec.expected = {
      Exact("fp/section 1", 2),
      Exact("fp/section 2", 4),
      Exact("negatives/section 1", 20),
      Exact("negatives/section 2", 10),
      Exact("fpr/section 1", 0.10),
      Exact("fpr/section 2", 0.40),
      Exact("tp/section 2", 16),
      Exact("tn/section 2", 6),
      Exact("fn/section 2", 4),
      Exact("ppv/section 2", 0.80),
      Exact("p_score/section 1/B", 0.80),
      Exact("p_score/section 2/B", 0.80),
      Near("error_risk/section 1/B", 0.20, 1e-12),
      Near("error_risk/section 2/B", 0.20, 1e-12),
      Exact("calibration_gap", 0.0),
      Exact("ordering_holds", 1),
  };
  spec.notes = {
      "Papers graded A are split into 'clear A' (p=0) and 'borderline' "
      "(p=0.5) so that the grader is calibrated in every bin, not only for B.",
      "A true-A student given a B in either section bore the same 20% risk "
      "of that error.",
  };
  return Scenario{*std::move(population), std::move(spec)};
}

// Decile cells reconstructed from the published aggregates: FP 805 of 1795
// and 349 of 1488 not rearrested, FNR 28.0% / 47.7%, base rates 51% / 39%.
// Deciles share p_score = 1/5, 1/4, 1/3, 3/7, 1/2, 4/7, 5/8, 2/3, 3/4, 4/5.
const std::vector<std::pair<std::string, CellCounts>>& CompasCells() {
  static const auto* const kCells =
      new std::vector<std::pair<std::string, CellCounts>>{
          {"black",
           {{110, 22},
            {344, 86},
            {408, 136},
            {651, 279},
            {496, 248},
            {441, 252},
            {384, 240},
            {333, 222},
            {276, 207},
            {220, 176}}},
          {"white",
           {{510, 102},
            {436, 109},
            {360, 120},
            {287, 123},
            {304, 152},
            {189, 108},
            {152, 95},
            {114, 76},
            {72, 54},
            {15, 12}}},
      };
  return *kCells;
}

std::vector<ExpectedFigure> CompasTableFigures() {
  return {
      Exact("fp/black", 805),
      Exact("negatives/black", 1795),
      Exact("fp/white", 349),
      Exact("negatives/white", 1488),
      Near("fpr/black", 0.449, 0.005, "44.9%"),
      Near("fpr/white", 0.235, 0.005, "23.5%"),
      Near("fnr/black", 0.280, 0.005, "28.0%"),
      Near("fnr/white", 0.477, 0.005, "47.7%"),
      Near("base_rate/black", 0.51, 0.005),
      Near("base_rate/white", 0.39, 0.005),
  };
}

std::vector<std::string> CompasNotes() {
  return {
      "Synthetic reconstruction of published aggregates, not the original "
      "dataset. Coarse counts: black tp=1345 fp=805 tn=990 fn=523, white "
      "tp=497 fp=349 tn=1139 fn=454; positives chosen as the integers "
      "closest to the published base rates that keep FNR on its published "
      "rounding.",
      "Residuals: FPR 0.44847 vs 0.449 and 0.23454 vs 0.235; FNR 0.27998 vs "
      "0.280 and 0.47739 vs 0.477; base rate 0.50996 vs 0.51 and 0.38991 vs "
      "0.39.",
      "Deciles are calibrated exactly across groups; the 'high risk' label "
      "corresponds to scores 5-10, i.e. p_score >= 1/2.",
  };
}

absl::StatusOr<Scenario> Compas(ScenarioName name) {
  auto bins = BinScheme::IntegerScale(1, 10);
  if (!bins.ok()) return bins.status();
  const bool benefit = name == ScenarioName::kCompasBenefit;
  auto population = FromCells(*bins, CompasCells(),
                              benefit ? ActionValence::kBenefitsSubject
                                      : ActionValence::kHarmsSubject);
  if (!population.ok()) return population.status();

  ScenarioSpec spec;
  spec.name = name;
  spec.threshold = "score>=5";
  spec.expected = CompasTableFigures();
  spec.notes = CompasNotes();
  spec.expected.push_back(Exact("ordering_holds", 1));
  if (benefit) {
    spec.title =
        "COMPAS + benefit: a cash transfer for those at high risk of rearrest";
    spec.equalize = EqualizationAnchor::kHoldLowestFpr;
    spec.expected.push_back(Greater("threshold_raise/black", 0.0));
    spec.expected.push_back(Less("acted_change/black", 0.0));
    spec.notes.push_back(
        "Acting benefits the subject here: equalizing FPR by raising the "
        "higher-base-rate group's threshold withholds the benefit from black "
        "defendants at the same estimated risk as white defendants who "
        "receive it.");
  } else {
    spec.title = "COMPAS (synthetic): pretrial detention at scores 5-10";
    spec.equalize = EqualizationAnchor::kHoldHighestFpr;
    spec.expected.push_back(Greater("disvalue_delta", 0.0));
  }
  return Scenario{*std::move(population), std::move(spec)};
}

absl::StatusOr<Scenario> CertaintyLottery() {
  auto bins = BinScheme::Create({0, 1, 2}, {"below 6 ft", "6 ft or taller"});
  if (!bins.ok()) return bins.status();
  // Everyone is known to be below 6 ft (negative) and sits in a p=0 bin.
  auto population = FromCells(
      *bins, {{"men", {{50, 0}, {0, 0}}}, {"women", {{100, 0}, {0, 0}}}},
      ActionValence::kHarmsSubject);
  if (!population.ok()) return population.status();

  ScenarioSpec spec;
  spec.name = ScenarioName::kCertaintyLottery;
  spec.title = "Certainty + lottery: 30 of 150 known-short people excluded";
  spec.threshold = "p=1";
  spec.lottery_quota = 30;
  spec.expected = {
      Exact("lottery_probability/men", 0.20),
      Exact("lottery_probability/women", 0.20),
      Exact("negatives/men", 50),
      Exact("negatives/women", 100),
  };
  spec.notes = {
      "30 of 150 is 20%; the 25% figure stated with this worked example is an "
      "arithmetic slip and is not reproduced.",
      "Under certainty an equal lottery equalizes excluded / not-TTFS across "
      "groups; under risk the same ratio is the FPR and cannot be equalized "
      "without differential thresholds.",
  };
  return Scenario{*std::move(population), std::move(spec)};
}

absl::StatusOr<Scenario> MiscalibratedCompas() {
  auto bins = BinScheme::IntegerScale(1, 10);
  if (!bins.ok()) return bins.status();
  // 100 defendants per score and group. White p_score s/10 (0.95 at 10);
  // black scores read two points high: p_black(s) = p_white(s - 2).
  CellCounts white;
  CellCounts black;
  const std::array<int64_t, 10> white_positives = {10, 20, 30, 40, 50,
                                                   60, 70, 80, 90, 95};
  for (int s = 1; s <= 10; ++s) {
    white.push_back({100, white_positives[s - 1]});
    black.push_back({100, s <= 2 ? 0 : white_positives[s - 3]});
  }
  auto population = FromCells(*bins, {{"black", black}, {"white", white}},
                              ActionValence::kHarmsSubject);
  if (!population.ok()) return population.status();

  ScenarioSpec spec;
  spec.name = ScenarioName::kMiscalibratedCompas;
  spec.title = "Miscalibrated scores: score 8 means 80% for white, 60% for black";
  spec.threshold = "score>=8";
  spec.reference_group = "white";
  spec.expected = {
      Exact("p_score/white/8", 0.80),
      Exact("p_score/black/8", 0.60),
      Near("calibration_gap", 0.20, 1e-12),
      Exact("threshold/white", 0.80),
      Exact("threshold/black", 0.60),
      Near("error_risk/white/8", 0.20, 1e-12),
      Near("error_risk/black/8", 0.40, 1e-12),
      Exact("equivalent_cut/white", 8),
      Exact("equivalent_cut/black", 6),
  };
  spec.notes = {
      "Detaining everyone at score 8 or above on these scores is the same "
      "procedure as calibrated scores with detention at 6 or above for black "
      "defendants and 8 or above for white defendants.",
  };
  return Scenario{*std::move(population), std::move(spec)};
}

}  // namespace

std::string_view ScenarioKey(ScenarioName name) {
  for (const auto& [n, key] : kKeys) {
    if (n == name) return key;
  }
  return "unknown";
}

absl::StatusOr<ScenarioName> ParseScenarioName(std::string_view key) {
  for (const auto& [n, k] : kKeys) {
    if (k == key) return n;
  }
  std::string known;
  for (const auto& [n, k] : kKeys) absl::StrAppend(&known, known.empty() ? "" : ", ", Sv(k));
  return absl::NotFoundError(
      absl::StrCat("unknown scenario '", Sv(key), "' (known: ", known, ")"));
}

const std::vector<ScenarioName>& AllScenarios() {
  static const auto* const kAll = [] {
    auto* v = new std::vector<ScenarioName>();
    for (const auto& [n, k] : kKeys) v->push_back(n);
    return v;
  }();
  return *kAll;
}

absl::StatusOr<Scenario> BuildScenario(ScenarioName name) {
  switch (name) {
    case ScenarioName::kStrideHeight:
      return StrideHeight();
    case ScenarioName::kSectionGrades:
      return SectionGrades();
    case ScenarioName::kCompasSynthetic:
    case ScenarioName::kCompasBenefit:
      return Compas(name);
    case ScenarioName::kCertaintyLottery:
      return CertaintyLottery();
    case ScenarioName::kMiscalibratedCompas:
      return MiscalibratedCompas();
  }
  return absl::InternalError("unhandled scenario");
}

absl::StatusOr<Scenario> BuildScenario(std::string_view key) {
  auto name = ParseScenarioName(key);
  if (!name.ok()) return name.status();
  return BuildScenario(*name);
}

namespace {

constexpr int kMaxAttempts = 64;

// Integer unit counts per bin, summing to `units`, whose mean bin value
// m0 + k equals target / units exactly. Shape: `log_weights` tilted
// exponentially in the bin index.
std::optional<std::vector<int64_t>> Compose(const std::vector<double>& log_weights,
                                            int64_t units, int64_t m0,
                                            int64_t target) {
  const size_t k_bins = log_weights.size();
  const double mean = static_cast<double>(target) / static_cast<double>(units) -
                      static_cast<double>(m0);
  auto shares = [&](double theta) {
    std::vector<double> s(k_bins);
    double top = -INFINITY;
    for (size_t k = 0; k < k_bins; ++k) {
      s[k] = log_weights[k] + theta * static_cast<double>(k);
      top = std::max(top, s[k]);
    }
    double z = 0.0;
    for (double& v : s) z += (v = std::exp(v - top));
    for (double& v : s) v /= z;
    return s;
  };
  auto mean_index = [&](double theta) {
    auto s = shares(theta);
    double m = 0.0;
    for (size_t k = 0; k < k_bins; ++k) m += s[k] * static_cast<double>(k);
    return m;
  };
  double lo = -60.0;
  double hi = 60.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_index(mid) < mean ? lo : hi) = mid;
  }
  auto s = shares(0.5 * (lo + hi));

  std::vector<double> ideal(k_bins);
  std::vector<int64_t> c(k_bins);
  int64_t assigned = 0;
  for (size_t k = 0; k < k_bins; ++k) {
    ideal[k] = s[k] * static_cast<double>(units);
    c[k] = std::max<int64_t>(1, static_cast<int64_t>(std::floor(ideal[k])));
    assigned += c[k];
  }
  // Largest remainder up to `units`, trimming the fullest bins if the floor
  // of one unit per bin overshot.
  while (assigned < units) {
    size_t best = 0;
    for (size_t k = 1; k < k_bins; ++k) {
      if (ideal[k] - c[k] > ideal[best] - c[best]) best = k;
    }
    ++c[best];
    ++assigned;
  }
  while (assigned > units) {
    size_t best = k_bins;
    for (size_t k = 0; k < k_bins; ++k) {
      if (c[k] > 1 && (best == k_bins || c[k] - ideal[k] > c[best] - ideal[best])) {
        best = k;
      }
    }
    if (best == k_bins) return std::nullopt;
    --c[best];
    --assigned;
  }

  // Hit the positive count exactly by moving single units between adjacent
  // bins; each move changes the total by one.
  int64_t total = 0;
  for (size_t k = 0; k < k_bins; ++k) {
    total += c[k] * (m0 + static_cast<int64_t>(k));
  }
  while (total != target) {
    const bool up = total < target;
    size_t best = k_bins;
    double best_gain = -INFINITY;
    for (size_t k = 0; k + 1 < k_bins; ++k) {
      const size_t from = up ? k : k + 1;
      const size_t to = up ? k + 1 : k;
      if (c[from] <= 1) continue;
      const double gain = (c[from] - ideal[from]) - (c[to] - ideal[to]);
      if (gain > best_gain) {
        best_gain = gain;
        best = k;
      }
    }
    if (best == k_bins) return std::nullopt;
    if (up) {
      --c[best];
      ++c[best + 1];
      ++total;
    } else {
      --c[best + 1];
      ++c[best];
      --total;
    }
  }
  return c;
}

bool StrictlyIncreasingRatio(const std::vector<int64_t>& higher,
                             const std::vector<int64_t>& lower) {
  for (size_t k = 0; k + 1 < higher.size(); ++k) {
    if (!(higher[k] * lower[k + 1] < higher[k + 1] * lower[k])) return false;
  }
  return true;
}

// Total shortfall from a strictly increasing ratio higher[k] / lower[k]; 0
// when the order holds.
int64_t OrderViolation(const std::vector<int64_t>& higher,
                       const std::vector<int64_t>& lower) {
  int64_t total = 0;
  for (size_t k = 0; k + 1 < higher.size(); ++k) {
    total += std::max<int64_t>(
        0, higher[k] * lower[k + 1] - higher[k + 1] * lower[k] + 1);
  }
  return total;
}

// Greedy local search toward a strictly increasing ratio. Each move shifts
// one unit up across boundary i and one unit down across boundary j within
// a single group, which keeps both its unit total and its positive total.
bool RepairLikelihoodOrder(std::vector<int64_t>& higher,
                           std::vector<int64_t>& lower) {
  const size_t k_bins = higher.size();
  int64_t violation = OrderViolation(higher, lower);
  for (int step = 0; violation > 0 && step < 64 * static_cast<int>(k_bins);
       ++step) {
    int64_t best = violation;
    std::vector<int64_t>* best_group = nullptr;
    size_t best_i = 0;
    size_t best_j = 0;
    for (std::vector<int64_t>* group : {&higher, &lower}) {
      std::vector<int64_t>& c = *group;
      for (size_t i = 0; i + 1 < k_bins; ++i) {
        for (size_t j = 0; j + 1 < k_bins; ++j) {
          if (i == j) continue;
          --c[i];
          ++c[i + 1];
          --c[j + 1];
          ++c[j];
          const bool valid = c[i] >= 1 && c[j + 1] >= 1;
          const int64_t v = valid ? OrderViolation(higher, lower) : best;
          ++c[i];
          --c[i + 1];
          ++c[j + 1];
          --c[j];
          if (v < best) {
            best = v;
            best_group = group;
            best_i = i;
            best_j = j;
          }
        }
      }
    }
    if (best_group == nullptr) return false;
    std::vector<int64_t>& c = *best_group;
    --c[best_i];
    ++c[best_i + 1];
    --c[best_j + 1];
    ++c[best_j];
    violation = best;
  }
  return violation == 0;
}

}  // namespace

absl::StatusOr<Population> RandomCalibratedPopulation(uint64_t seed,
                                                      int64_t n_per_group,
                                                      const BinScheme& bins,
                                                      double base_rate_a,
                                                      double base_rate_b) {
  for (double br : {base_rate_a, base_rate_b}) {
    if (!(br > 0.0 && br < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("base rates must lie in (0, 1), got %g", br));
    }
  }
  const int64_t k_bins = static_cast<int64_t>(bins.size());
  std::vector<int64_t> denominators;
  for (int64_t d = k_bins + 1; d <= 4 * k_bins + 4; ++d) {
    if (n_per_group > 0 && n_per_group % d == 0 && n_per_group / d >= k_bins) {
      denominators.push_back(d);
    }
  }
  if (denominators.empty()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "n_per_group=%d cannot be split into integral calibrated cells for %d "
        "bins: it needs a divisor d in [%d, %d] with n/d >= %d",
        n_per_group, k_bins, k_bins + 1, 4 * k_bins + 4, k_bins));
  }
  const int64_t target_a = std::llround(base_rate_a * n_per_group);
  const int64_t target_b = std::llround(base_rate_b * n_per_group);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(std::log(0.5), std::log(1.5));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    // p_score of bin k is (m0 + k) / denominator. Later attempts fall back to
    // the widest p_score range.
    int64_t denominator = denominators.front();
    int64_t m0 = 1;
    if (attempt < kMaxAttempts / 2) {
      denominator = denominators[std::uniform_int_distribution<size_t>(
          0, denominators.size() - 1)(rng)];
      m0 = std::uniform_int_distribution<int64_t>(1, denominator - k_bins)(rng);
    }
    std::vector<double> log_weights(k_bins);
    for (double& w : log_weights) w = weight(rng);

    const int64_t units = n_per_group / denominator;
    const int64_t min_total = units * m0;
    const int64_t max_total = units * (m0 + k_bins - 1);
    auto interior = [&](int64_t t) { return t > min_total && t < max_total; };
    if (!interior(target_a) || !interior(target_b)) {
      if (attempt >= kMaxAttempts / 2) break;
      continue;
    }

    auto units_a = Compose(log_weights, units, m0, target_a);
    if (!units_a) continue;
    std::optional<std::vector<int64_t>> units_b = units_a;
    if (target_b != target_a) {
      units_b = Compose(log_weights, units, m0, target_b);
      if (!units_b) continue;
      const bool a_higher = target_a > target_b;
      std::vector<int64_t>& higher = a_higher ? *units_a : *units_b;
      std::vector<int64_t>& lower = a_higher ? *units_b : *units_a;
      if (!RepairLikelihoodOrder(higher, lower) ||
          !StrictlyIncreasingRatio(higher, lower)) {
        continue;
      }
    }

    RecordBuilder builder(bins);
    for (const auto& [group, cells] :
         {std::pair{std::string("a"), *units_a}, std::pair{std::string("b"), *units_b}}) {
      for (int64_t k = 0; k < k_bins; ++k) {
        builder.Add(group, k, cells[k] * denominator, cells[k] * (m0 + k));
      }
    }
    return ValidatePopulation(builder.Take(), bins, ActionValence::kHarmsSubject);
  }
  return absl::FailedPreconditionError(absl::StrFormat(
      "no calibrated composition found for base rates %g and %g with "
      "n_per_group=%d over %d bins",
      base_rate_a, base_rate_b, n_per_group, k_bins));
}

}  // namespace fairaudit

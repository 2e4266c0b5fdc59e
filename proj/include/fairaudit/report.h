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

#ifndef FAIRAUDIT_REPORT_H_
#define FAIRAUDIT_REPORT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "fairaudit/decision.h"
#include "fairaudit/domain.h"
#include "fairaudit/metrics.h"
#include "fairaudit/parity.h"
#include "json.hpp"

namespace fairaudit {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportVersion = 1;

enum class ReportFormat { kJson, kMarkdown };

// "json", "md" or "markdown".
absl::StatusOr<ReportFormat> ParseReportFormat(std::string_view text);

struct CalibrationCellReport {
  std::string group;
  std::string bin;
  int64_t count = 0;
  int64_t positives = 0;
  std::optional<double> p_score;
};

// Result of comparing one expected figure with the computed value.
struct FigureCheck {
  std::string key;
  std::string expected;
  std::string actual;
  bool pass = false;
};

// Everything an audit, scenario or equalize run produced. Values are stored
// at full precision; rounding happens only in RenderReport().
struct AuditReport {
  std::string command;
  std::string source;  // input path or scenario key
  std::string title;
  ActionValence valence = ActionValence::kHarmsSubject;

  OutcomeValues values = OutcomeValues::Symmetric();
  bool values_defaulted = true;
  double optimal_threshold = 0.5;

  std::string threshold_spec;
  ThresholdPolicy policy;

  std::vector<GroupMetrics> groups;
  std::vector<std::string> bin_labels;
  std::vector<CalibrationCellReport> calibration;
  double calibration_gap = 0.0;
  double calib_tolerance = 0.0;

  std::vector<ImpossibilityVerdict> impossibility;
  PolicyAssessment assessment;
  std::optional<EqualizationResult> equalization;
  std::optional<LotteryResult> lottery;
  // Per group: the score cut on the reference group's curve that the group's
  // threshold is equivalent to.
  std::map<std::string, double> equivalent_cut;

  std::vector<FigureCheck> checks;
  std::vector<std::string> notes;

  bool checks_passed() const;
};

// One-decimal percentage, e.g. 0.2345 -> "23.5%". Rounds half up to
// hundredths of a percent first and then to tenths, the convention of the
// published error-rate tables (805/1795 = 44.847% -> 44.85% -> "44.9%").
std::string FormatPercent(double rate);

// Full-precision JSON with a stable key order.
nlohmann::ordered_json ReportToJson(const AuditReport& report);

std::string RenderReport(const AuditReport& report, ReportFormat format);

}  // namespace fairaudit

#endif  // FAIRAUDIT_REPORT_H_

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


// The three fairaudit commands as library functions, plus the argv-level
// dispatcher used by the fairaudit binary.

#ifndef FAIRAUDIT_CLI_H_
#define FAIRAUDIT_CLI_H_

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairaudit/domain.h"
#include "fairaudit/ingest.h"
#include "fairaudit/metrics.h"
#include "fairaudit/parity.h"
#include "fairaudit/report.h"

namespace fairaudit {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitAssertionFailure = 3,
  kExitInternalError = 4,
};

// kExitInternalError for kInternal, kUnknown and kDataLoss; kExitInputError
// for every other non-OK code.
int ExitCodeFor(const absl::Status& status);

// "TP,FP,TN,FN", e.g. "1,0,1,0".
absl::StatusOr<OutcomeValues> ParseOutcomeValues(std::string_view text);

// Resolves a threshold spec against a calibration curve:
//   ""          uniform optimal threshold p* of `values`
//   "p=X"       uniform probability threshold X
//   "score>=X"  raw score cut X, translated per group through the curve
absl::StatusOr<ThresholdPolicy> ResolveThresholdSpec(
    std::string_view spec, const CalibrationCurve& curve,
    const OutcomeValues& values);

// Full audit of an already validated population. `values` nullopt means the
// symmetric default, which the report flags.
absl::StatusOr<AuditReport> AuditPopulation(
    const Population& population, const std::optional<OutcomeValues>& values,
    std::string_view threshold_spec, double calib_tolerance);

absl::StatusOr<AuditReport> CmdAudit(const DatasetConfig& config,
                                     const std::optional<OutcomeValues>& values,
                                     std::string_view threshold_spec,
                                     double calib_tolerance = 1e-9);

// Builds the named scenario, audits it canonically and evaluates every
// expected figure into report.checks. A failed check is reported, not
// returned as an error; see AuditReport::checks_passed().
absl::StatusOr<AuditReport> CmdScenario(std::string_view name);

absl::StatusOr<AuditReport> CmdEqualize(
    const DatasetConfig& config, const std::optional<OutcomeValues>& values,
    std::string_view baseline_threshold_spec, double tolerance,
    EqualizationAnchor anchor, double calib_tolerance = 1e-9);

// Parses argv, runs one subcommand and writes the rendered report to `out`
// (or --out). Diagnostics go to `err`. Returns an ExitCode.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace fairaudit

#endif  // FAIRAUDIT_CLI_H_

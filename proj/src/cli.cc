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


#include "fairaudit/cli.h"

#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "fairaudit/decision.h"
#include "fairaudit/scenarios.h"
#include "string_view.h"

namespace fairaudit {
namespace {

constexpr double kScenarioTolerance = 1e-9;

absl::StatusOr<double> ParseNumber(absl::string_view text,
                                   absl::string_view what) {
  double value = 0.0;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(text), &value) ||
      !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse ", what, " '", text, "' as a number"));
  }
  return value;
}

std::string Describe(double value) { return absl::StrFormat("%.6g", value); }

const GroupMetrics* FindGroup(const AuditReport& report,
                              std::string_view group) {
  for (const GroupMetrics& g : report.groups) {
    if (g.group == group) return &g;
  }
  return nullptr;
}

absl::StatusOr<size_t> BinByLabel(const BinScheme& bins,
                                  std::string_view label) {
  for (size_t b = 0; b < bins.size(); ++b) {
    if (bins.label(b) == label) return b;
  }
  return absl::NotFoundError(absl::StrCat("no bin labelled '", Sv(label), "'"));
}

// The score a bin stands for: its label when the label names a score inside
// the bin, otherwise its lower edge.
double BinScore(const BinScheme& bins, size_t b) {
  double labelled = 0.0;
  if (bins.has_labels() && absl::SimpleAtod(bins.label(b), &labelled) &&
      labelled >= bins.bin_lower(b) && labelled <= bins.bin_upper(b)) {
    return labelled;
  }
  return bins.bin_lower(b);
}

// Lowest-scoring nonempty bin of `reference` whose p_score reaches
// `threshold`, as a score.
std::optional<double> EquivalentCut(const CalibrationCurve& curve,
                                    std::string_view reference,
                                    double threshold) {
  for (size_t b = 0; b < curve.bins().size(); ++b) {
    std::optional<double> p = curve.PScore(reference, b);
    if (p.has_value() && *p >= threshold) return BinScore(curve.bins(), b);
  }
  return std::nullopt;
}

// Computes one scenario observable; see ExpectedFigure for the key grammar.
absl::StatusOr<double> Observe(const Scenario& scenario,
                               const CalibrationCurve& curve,
                               const AuditReport& report,
                               std::string_view key) {
  std::vector<std::string> parts = absl::StrSplit(Sv(key), '/');
  const std::string& name = parts[0];
  auto missing = [&]() {
    return absl::NotFoundError(
        absl::StrCat("observable '", Sv(key), "' is not available"));
  };

  if (parts.size() == 1) {
    if (name == "calibration_gap") return report.calibration_gap;
    if (name == "ordering_holds") {
      if (report.impossibility.empty()) return missing();
      for (const ImpossibilityVerdict& v : report.impossibility) {
        if (!v.ordering_holds) return 0.0;
      }
      return 1.0;
    }
    if (name == "disvalue_delta") {
      if (!report.equalization.has_value()) return missing();
      return report.equalization->disvalue_delta;
    }
    return missing();
  }

  const std::string& group = parts[1];
  if (parts.size() == 3) {
    absl::StatusOr<size_t> bin = BinByLabel(curve.bins(), parts[2]);
    if (!bin.ok()) return bin.status();
    if (name == "p_score") {
      std::optional<double> p = curve.PScore(group, *bin);
      if (!p.has_value()) return missing();
      return *p;
    }
    if (name == "error_risk") {
      const Population& pop = scenario.population;
      for (size_t i = 0; i < pop.records().size(); ++i) {
        if (pop.records()[i].group == group && pop.bin_of_record(i) == *bin) {
          return IndividualErrorRisk(pop.records()[i], curve, report.policy);
        }
      }
      return missing();
    }
    return missing();
  }
  if (parts.size() != 2) return missing();

  if (const GroupMetrics* g = FindGroup(report, group); g != nullptr) {
    const ConfusionMatrix& c = g->confusion;
    if (name == "tp") return static_cast<double>(c.tp);
    if (name == "fp") return static_cast<double>(c.fp);
    if (name == "tn") return static_cast<double>(c.tn);
    if (name == "fn") return static_cast<double>(c.fn);
    if (name == "negatives") return static_cast<double>(c.negatives());
    if (name == "base_rate") return g->base_rate;
    auto rate = [&](const std::optional<double>& r) -> absl::StatusOr<double> {
      if (!r.has_value()) return missing();
      return *r;
    };
    if (name == "fpr") return rate(g->fpr);
    if (name == "fnr") return rate(g->fnr);
    if (name == "ppv") return rate(g->ppv);
  }
  if (name == "threshold") return report.policy.ThresholdFor(group);
  if (name == "equivalent_cut") {
    auto it = report.equivalent_cut.find(group);
    if (it == report.equivalent_cut.end()) return missing();
    return it->second;
  }
  if (name == "threshold_raise" || name == "acted_change") {
    if (!report.equalization.has_value()) return missing();
    for (const GroupEqualization& g : report.equalization->groups) {
      if (g.group != group) continue;
      if (name == "threshold_raise") return g.threshold - g.baseline_threshold;
      return static_cast<double>(g.acted - g.baseline_acted);
    }
    return missing();
  }
  if (name == "lottery_probability") {
    if (!report.lottery.has_value()) return missing();
    auto it = report.lottery->fair_lottery_ratio.find(group);
    if (it == report.lottery->fair_lottery_ratio.end()) return missing();
    return it->second;
  }
  return missing();
}

FigureCheck Evaluate(const ExpectedFigure& figure,
                     const absl::StatusOr<double>& actual) {
  FigureCheck check;
  check.key = figure.key;
  switch (figure.compare) {
    case ExpectedFigure::Compare::kNear:
      check.expected = figure.tolerance == 0.0
                           ? Describe(figure.value)
                           : absl::StrCat(Describe(figure.value), " +/- ",
                                          Describe(figure.tolerance));
      break;
    case ExpectedFigure::Compare::kGreater:
      check.expected = absl::StrCat("> ", Describe(figure.value));
      break;
    case ExpectedFigure::Compare::kLess:
      check.expected = absl::StrCat("< ", Describe(figure.value));
      break;
  }
  if (!figure.rendered.empty()) {
    absl::StrAppend(&check.expected, " (", figure.rendered, ")");
  }
  if (!actual.ok()) {
    check.actual = std::string(actual.status().message());
    check.pass = false;
    return check;
  }
  const double x = *actual;
  check.actual = Describe(x);
  switch (figure.compare) {
    case ExpectedFigure::Compare::kNear:
      check.pass = std::fabs(x - figure.value) <= figure.tolerance;
      break;
    case ExpectedFigure::Compare::kGreater:
      check.pass = x > figure.value;
      break;
    case ExpectedFigure::Compare::kLess:
      check.pass = x < figure.value;
      break;
  }
  if (!figure.rendered.empty()) {
    const std::string rendered = FormatPercent(x);
    absl::StrAppend(&check.actual, " (", rendered, ")");
    check.pass = check.pass && rendered == figure.rendered;
  }
  return check;
}

void AddEqualizationNotes(const Population& population,
                          const EqualizationResult& e,
                          std::vector<std::string>& notes) {
  for (const GroupEqualization& g : e.groups) {
    if (g.group == e.anchor_group || g.threshold == g.baseline_threshold) {
      continue;
    }
    const int64_t change = g.acted - g.baseline_acted;
    const std::string direction =
        g.threshold > g.baseline_threshold ? "raised" : "lowered";
    std::string effect;
    if (population.action_benefits_subject()) {
      effect = change < 0
                   ? absl::StrCat(-change, " fewer members receive the benefit")
                   : absl::StrCat(change, " more members receive the benefit");
    } else {
      effect = change < 0
                   ? absl::StrCat(-change, " fewer members are acted against")
                   : absl::StrCat(change, " more members are acted against");
    }
    notes.push_back(absl::StrFormat(
        "Equalizing FPR %s the threshold for %s from %.4f to %.4f: %s.",
        direction, g.group, g.baseline_threshold, g.threshold, effect));
  }
  if (e.disvalue_delta > 0) {
    notes.push_back(absl::StrFormat(
        "The equalized policy increases total expected disvalue by %.4f.",
        e.disvalue_delta));
  }
}

absl::StatusOr<AuditReport> Equalize(const Population& population,
                                     AuditReport report, double tolerance,
                                     EqualizationAnchor anchor) {
  const CalibrationCurve curve = BuildCalibrationCurve(population);
  absl::StatusOr<EqualizationResult> eq = EqualizeFpr(
      population, curve, report.policy, tolerance, report.values, anchor);
  if (!eq.ok()) return eq.status();
  AddEqualizationNotes(population, *eq, report.notes);
  report.equalization = *std::move(eq);
  return report;
}

absl::Status WriteOutput(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::UnavailableError(
        absl::StrCat("cannot open '", path, "' for writing"));
  }
  file << text;
  file.close();
  if (!file) {
    return absl::UnavailableError(absl::StrCat("failed writing '", path, "'"));
  }
  return absl::OkStatus();
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInternal:
    case absl::StatusCode::kUnknown:
    case absl::StatusCode::kDataLoss:
      return kExitInternalError;
    default:
      return kExitInputError;
  }
}

absl::StatusOr<OutcomeValues> ParseOutcomeValues(std::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(Sv(text), ',');
  if (parts.size() != 4) {
    return absl::InvalidArgumentError(absl::StrCat(
        "--values needs four comma-separated numbers TP,FP,TN,FN; got '",
        Sv(text), "'"));
  }
  double v[4];
  for (int i = 0; i < 4; ++i) {
    absl::StatusOr<double> x = ParseNumber(parts[i], "outcome value");
    if (!x.ok()) return x.status();
    v[i] = *x;
  }
  return OutcomeValues::Create(v[0], v[1], v[2], v[3]);
}

absl::StatusOr<ThresholdPolicy> ResolveThresholdSpec(
    std::string_view spec, const CalibrationCurve& curve,
    const OutcomeValues& values) {
  absl::string_view text = absl::StripAsciiWhitespace(Sv(spec));
  if (text.empty()) return ThresholdPolicy::Uniform(OptimalThreshold(values));
  if (absl::ConsumePrefix(&text, "p=")) {
    absl::StatusOr<double> p = ParseNumber(text, "probability threshold");
    if (!p.ok()) return p.status();
    return ThresholdPolicy::Uniform(*p);
  }
  if (absl::ConsumePrefix(&text, "score>=")) {
    absl::StatusOr<double> cut = ParseNumber(text, "score cut");
    if (!cut.ok()) return cut.status();
    return TranslateScoreCut(curve, *cut);
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "threshold spec '", Sv(spec), "' must look like 'p=0.75' or 'score>=5'"));
}

absl::StatusOr<AuditReport> AuditPopulation(
    const Population& population, const std::optional<OutcomeValues>& values,
    std::string_view threshold_spec, double calib_tolerance) {
  if (!(calib_tolerance >= 0.0) || !std::isfinite(calib_tolerance)) {
    return absl::InvalidArgumentError("tolerance must be finite and >= 0");
  }
  AuditReport report;
  report.command = "audit";
  report.valence = population.valence();
  report.values = values.value_or(OutcomeValues::Symmetric());
  report.values_defaulted = !values.has_value();
  report.optimal_threshold = OptimalThreshold(report.values);
  report.threshold_spec = std::string(threshold_spec);

  const CalibrationCurve curve = BuildCalibrationCurve(population);
  absl::StatusOr<ThresholdPolicy> policy =
      ResolveThresholdSpec(threshold_spec, curve, report.values);
  if (!policy.ok()) return policy.status();
  report.policy = *policy;

  absl::StatusOr<std::vector<GroupMetrics>> metrics =
      ComputeGroupMetrics(population, report.policy, curve);
  if (!metrics.ok()) return metrics.status();
  report.groups = *std::move(metrics);

  const BinScheme& bins = population.bins();
  for (size_t b = 0; b < bins.size(); ++b) {
    report.bin_labels.push_back(bins.label(b));
  }
  for (const std::string& group : curve.groups()) {
    const std::vector<CalibrationCurve::Cell>& cells = curve.cells(group);
    for (size_t b = 0; b < cells.size(); ++b) {
      report.calibration.push_back({group, bins.label(b), cells[b].count,
                                    cells[b].positives, cells[b].p_score()});
    }
  }
  report.calibration_gap = MaxCalibrationGap(curve);
  report.calib_tolerance = calib_tolerance;

  if (report.policy.is_uniform()) {
    absl::StatusOr<std::vector<ImpossibilityVerdict>> verdicts =
        CheckImpossibilityPairwise(population, curve,
                                   report.policy.uniform_threshold(),
                                   calib_tolerance);
    if (verdicts.ok()) {
      report.impossibility = *std::move(verdicts);
    } else {
      report.notes.push_back(absl::StrCat(
          "FPR ordering check skipped: ", verdicts.status().message()));
    }
  } else {
    report.notes.push_back(
        "FPR ordering check skipped: the policy uses per-group thresholds.");
  }

  absl::StatusOr<PolicyAssessment> assessment =
      AssessPolicy(population, report.policy, curve, report.values);
  if (!assessment.ok()) return assessment.status();
  report.assessment = *std::move(assessment);

  if (report.values_defaulted) {
    report.notes.push_back(
        "No outcome values were given. Using the symmetric default "
        "TP=1, FP=0, TN=1, FN=0 (p* = 0.5). Thresholds encode value "
        "judgements; pass --values TP,FP,TN,FN to state yours.");
  }
  return report;
}

absl::StatusOr<AuditReport> CmdAudit(const DatasetConfig& config,
                                     const std::optional<OutcomeValues>& values,
                                     std::string_view threshold_spec,
                                     double calib_tolerance) {
  absl::StatusOr<Population> population = IngestCsv(config);
  if (!population.ok()) return population.status();
  absl::StatusOr<AuditReport> report =
      AuditPopulation(*population, values, threshold_spec, calib_tolerance);
  if (!report.ok()) return report.status();
  report->source = config.path;
  return report;
}

absl::StatusOr<AuditReport> CmdScenario(std::string_view name) {
  absl::StatusOr<Scenario> scenario = BuildScenario(name);
  if (!scenario.ok()) return scenario.status();
  const Population& population = scenario->population;
  const ScenarioSpec& spec = scenario->spec;

  absl::StatusOr<AuditReport> report = AuditPopulation(
      population, std::nullopt, spec.threshold, kScenarioTolerance);
  if (!report.ok()) return report.status();
  report->command = "scenario";
  report->source = std::string(ScenarioKey(spec.name));
  report->title = spec.title;

  if (spec.equalize.has_value()) {
    report = Equalize(population, *std::move(report), kScenarioTolerance,
                      *spec.equalize);
    if (!report.ok()) return report.status();
  }
  if (spec.lottery_quota.has_value()) {
    std::map<std::string, int64_t> negatives;
    for (const GroupMetrics& g : report->groups) {
      if (g.confusion.positives() != 0) {
        return absl::FailedPreconditionError(absl::StrCat(
            "lottery requires every individual to be known negative; group ",
            g.group, " has positives"));
      }
      negatives[g.group] = g.confusion.negatives();
    }
    absl::StatusOr<LotteryResult> lottery =
        FairLottery(negatives, *spec.lottery_quota);
    if (!lottery.ok()) return lottery.status();
    report->lottery = *std::move(lottery);
  }

  const CalibrationCurve curve = BuildCalibrationCurve(population);
  if (spec.reference_group.has_value()) {
    const std::string& reference = *spec.reference_group;
    for (const std::string& group : population.groups()) {
      absl::StatusOr<double> t = report->policy.ThresholdFor(group);
      if (!t.ok()) return t.status();
      std::optional<double> cut = EquivalentCut(curve, reference, *t);
      if (!cut.has_value()) continue;
      report->equivalent_cut[group] = *cut;
      if (group != reference) {
        report->notes.push_back(absl::StrFormat(
            "Measured against %s's curve, the threshold %.4f applied to %s "
            "amounts to acting at score %g or above.",
            reference, *t, group, *cut));
      }
    }
  }

  for (const ExpectedFigure& figure : spec.expected) {
    report->checks.push_back(
        Evaluate(figure, Observe(*scenario, curve, *report, figure.key)));
  }
  report->notes.insert(report->notes.end(), spec.notes.begin(),
                       spec.notes.end());
  return report;
}

absl::StatusOr<AuditReport> CmdEqualize(
    const DatasetConfig& config, const std::optional<OutcomeValues>& values,
    std::string_view baseline_threshold_spec, double tolerance,
    EqualizationAnchor anchor, double calib_tolerance) {
  absl::StatusOr<Population> population = IngestCsv(config);
  if (!population.ok()) return population.status();
  absl::StatusOr<AuditReport> report = AuditPopulation(
      *population, values, baseline_threshold_spec, calib_tolerance);
  if (!report.ok()) return report.status();
  report->command = "equalize";
  report->source = config.path;
  return Equalize(*population, *std::move(report), tolerance, anchor);
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  try {
    CLI::App app{"fairaudit: calibration and error-rate audits of scored "
                 "populations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    std::string format = "md";
    std::string out_path;

    struct DataOptions {
      std::string input;
      std::string id_col = "id";
      std::string group_col = "group";
      std::string score_col = "score";
      std::string outcome_col = "outcome";
      std::string bins;
      std::string threshold;
      std::string values;
      double tolerance = 1e-9;
      double calib_tolerance = 1e-9;
      bool benefit = false;
      std::string direction = "auto";
    } data;

    auto add_common = [&](CLI::App* sub) {
      sub->add_option("--format", format, "Report format: json or md")
          ->check(CLI::IsMember({"json", "md", "markdown"}));
      sub->add_option("--out", out_path, "Write the report here");
    };
    auto add_data = [&](CLI::App* sub) {
      sub->add_option("--input", data.input, "CSV file")->required();
      sub->add_option("--id-col", data.id_col, "Record id column");
      sub->add_option("--group-col", data.group_col, "Group column");
      sub->add_option("--score-col", data.score_col, "Score column");
      sub->add_option("--outcome-col", data.outcome_col,
                      "Outcome column (0/1)");
      sub->add_option("--bins", data.bins,
                      "Bin scheme: int:LO:HI, E0,...,Ek or E0,...,Ek/L1,...,Lk")
          ->required();
      sub->add_option("--threshold", data.threshold,
                      "p=X or score>=X (default: uniform p*)");
      sub->add_option("--values", data.values,
                      "Outcome values TP,FP,TN,FN (default 1,0,1,0)");
      sub->add_flag("--benefit", data.benefit,
                    "The action benefits its subject");
      add_common(sub);
    };

    CLI::App* audit = app.add_subcommand("audit", "Audit a CSV population");
    add_data(audit);
    audit->add_option("--tolerance", data.calib_tolerance,
                      "Calibration tolerance for the FPR ordering check");

    std::string scenario_name;
    CLI::App* scenario = app.add_subcommand(
        "scenario", "Reproduce a built-in worked example");
    scenario->add_option("name", scenario_name, "Scenario name")->required();
    add_common(scenario);

    CLI::App* equalize = app.add_subcommand(
        "equalize", "Equalize false positive rates across groups");
    add_data(equalize);
    equalize->add_option("--tolerance", data.tolerance,
                         "Acceptable residual FPR gap");
    equalize->add_option("--calib-tolerance", data.calib_tolerance,
                         "Calibration tolerance for the FPR ordering check");
    equalize
        ->add_option("--direction", data.direction,
                     "auto, hold-highest or hold-lowest")
        ->check(CLI::IsMember({"auto", "hold-highest", "hold-lowest"}));

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitInputError;
    }

    absl::StatusOr<AuditReport> report;
    if (scenario->parsed()) {
      report = CmdScenario(scenario_name);
    } else {
      absl::StatusOr<BinScheme> bins = ParseBinSpec(data.bins);
      if (!bins.ok()) {
        err << "error: " << bins.status().message() << "\n";
        return ExitCodeFor(bins.status());
      }
      std::optional<OutcomeValues> values;
      if (!data.values.empty()) {
        absl::StatusOr<OutcomeValues> parsed = ParseOutcomeValues(data.values);
        if (!parsed.ok()) {
          err << "error: " << parsed.status().message() << "\n";
          return ExitCodeFor(parsed.status());
        }
        values = *parsed;
      }
      const DatasetConfig config{
          .path = data.input,
          .id_column = data.id_col,
          .group_column = data.group_col,
          .score_column = data.score_col,
          .outcome_column = data.outcome_col,
          .bins = *std::move(bins),
          .valence = data.benefit ? ActionValence::kBenefitsSubject
                                  : ActionValence::kHarmsSubject,
      };
      if (audit->parsed()) {
        report =
            CmdAudit(config, values, data.threshold, data.calib_tolerance);
      } else {
        EqualizationAnchor anchor = EqualizationAnchor::kHoldHighestFpr;
        if (data.direction == "hold-lowest" ||
            (data.direction == "auto" && data.benefit)) {
          anchor = EqualizationAnchor::kHoldLowestFpr;
        }
        report = CmdEqualize(config, values, data.threshold, data.tolerance,
                             anchor, data.calib_tolerance);
      }
    }
    if (!report.ok()) {
      err << "error: " << report.status().message() << "\n";
      return ExitCodeFor(report.status());
    }

    absl::StatusOr<ReportFormat> parsed_format = ParseReportFormat(format);
    if (!parsed_format.ok()) {
      err << "error: " << parsed_format.status().message() << "\n";
      return kExitInputError;
    }
    const std::string text = RenderReport(*report, *parsed_format);
    if (out_path.empty()) {
      out << text;
    } else if (absl::Status s = WriteOutput(out_path, text); !s.ok()) {
      err << "error: " << s.message() << "\n";
      return kExitInputError;
    }

    if (!report->checks_passed()) {
      int failed = 0;
      for (const FigureCheck& c : report->checks) failed += c.pass ? 0 : 1;
      err << "scenario " << scenario_name << ": " << failed
          << " expected figure(s) not reproduced\n";
      return kExitAssertionFailure;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace fairaudit

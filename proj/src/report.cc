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


#include "fairaudit/report.h"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "string_view.h"

namespace fairaudit {
namespace {

using Json = nlohmann::ordered_json;

Json OptionalNumber(const std::optional<double>& value) {
  if (!value.has_value()) return nullptr;
  return *value;
}

std::string PercentOrDash(const std::optional<double>& rate) {
  return rate.has_value() ? FormatPercent(*rate) : "n/a";
}

std::string Fixed(double value, int digits = 4) {
  return absl::StrFormat("%.*f", digits, value);
}

std::string ValenceNarrative(ActionValence valence) {
  if (valence == ActionValence::kBenefitsSubject) {
    return "Acting benefits the subject. A false negative withholds a "
           "deserved benefit, and a higher threshold for a group means fewer "
           "of its members receive it.";
  }
  return "Acting harms the subject. A false positive imposes the burden on "
         "someone without the predicted property.";
}

std::string DescribePolicy(const ThresholdPolicy& policy) {
  if (policy.is_uniform()) {
    return absl::StrCat("uniform threshold p_score >= ",
                        Fixed(policy.uniform_threshold()));
  }
  std::vector<std::string> parts;
  for (const auto& [group, t] : policy.per_group()) {
    parts.push_back(absl::StrCat(group, ": p_score >= ", Fixed(t)));
  }
  return absl::StrCat("per-group thresholds (", absl::StrJoin(parts, "; "),
                      ")");
}

Json PolicyToJson(const ThresholdPolicy& policy) {
  Json j;
  if (policy.is_uniform()) {
    j["kind"] = "uniform";
    j["threshold"] = policy.uniform_threshold();
  } else {
    j["kind"] = "per_group";
    Json thresholds = Json::object();
    for (const auto& [group, t] : policy.per_group()) thresholds[group] = t;
    j["thresholds"] = thresholds;
  }
  return j;
}

Json AssessmentToJson(const GroupAssessment& a) {
  Json j;
  j["group"] = a.group;
  j["acted"] = a.acted;
  j["refrained"] = a.refrained;
  j["expected_value"] = a.expected_value;
  j["expected_disvalue"] = a.expected_disvalue;
  j["realized_value"] = a.realized_value;
  j["realized_disvalue"] = a.realized_disvalue;
  return j;
}

std::string_view AnchorName(EqualizationAnchor anchor) {
  return anchor == EqualizationAnchor::kHoldHighestFpr ? "hold_highest_fpr"
                                                       : "hold_lowest_fpr";
}

// Markdown table with one header row.
std::string Table(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::string out = absl::StrCat("| ", absl::StrJoin(header, " | "), " |\n|");
  for (size_t i = 0; i < header.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& row : rows) {
    absl::StrAppend(&out, "| ", absl::StrJoin(row, " | "), " |\n");
  }
  return out;
}

std::string RenderMarkdown(const AuditReport& r) {
  std::string md;
  absl::StrAppend(&md, "# ", r.title.empty() ? "Fairness audit" : r.title,
                  "\n\n");
  absl::StrAppend(&md, "- Tool: fairaudit ", Sv(kToolVersion), " (report version ",
                  kReportVersion, ")\n");
  absl::StrAppend(&md, "- Command: `", r.command, "` on `", r.source, "`\n");
  absl::StrAppend(&md, "- Action: ", ValenceNarrative(r.valence), "\n");
  absl::StrAppend(
      &md, "- Outcome values: TP=", r.values.tp(), ", FP=", r.values.fp(),
      ", TN=", r.values.tn(), ", FN=", r.values.fn(),
      r.values_defaulted ? " (DEFAULT symmetric values, not chosen by you)"
                         : "",
      "; optimal threshold p* = ", Fixed(r.optimal_threshold), "\n");
  absl::StrAppend(&md, "- Policy: ", DescribePolicy(r.policy));
  if (!r.threshold_spec.empty()) {
    absl::StrAppend(&md, " from `", r.threshold_spec, "`");
  }
  md += "\n\n";

  // Error rates, one column per group.
  std::vector<std::string> header = {"Measure"};
  for (const GroupMetrics& g : r.groups) header.push_back(g.group);
  std::vector<std::vector<std::string>> rows;
  auto add_row = [&](std::string name, auto cell) {
    std::vector<std::string> row = {std::move(name)};
    for (const GroupMetrics& g : r.groups) row.push_back(cell(g));
    rows.push_back(std::move(row));
  };
  add_row("Records", [](const GroupMetrics& g) {
    return absl::StrCat(g.confusion.total());
  });
  add_row("Base rate",
          [](const GroupMetrics& g) { return FormatPercent(g.base_rate); });
  add_row("False positive rate",
          [](const GroupMetrics& g) { return PercentOrDash(g.fpr); });
  add_row("False negative rate",
          [](const GroupMetrics& g) { return PercentOrDash(g.fnr); });
  add_row("Positive predictive value",
          [](const GroupMetrics& g) { return PercentOrDash(g.ppv); });
  add_row("TP / FP / TN / FN", [](const GroupMetrics& g) {
    const ConfusionMatrix& c = g.confusion;
    return absl::StrCat(c.tp, " / ", c.fp, " / ", c.tn, " / ", c.fn);
  });
  add_row("Threshold", [&](const GroupMetrics& g) {
    absl::StatusOr<double> t = r.policy.ThresholdFor(g.group);
    return t.ok() ? Fixed(*t) : std::string("n/a");
  });
  md += "## Error rates by group\n\n";
  md += Table(header, rows);

  // Calibration: rows are bins, two columns per group.
  md += "\n## Calibration\n\n";
  std::vector<std::string> cal_header = {"Bin"};
  for (const GroupMetrics& g : r.groups) {
    cal_header.push_back(absl::StrCat(g.group, " n (positive)"));
    cal_header.push_back(absl::StrCat(g.group, " p_score"));
  }
  std::vector<std::vector<std::string>> cal_rows;
  for (const std::string& label : r.bin_labels) {
    std::vector<std::string> row = {label};
    for (const GroupMetrics& g : r.groups) {
      const CalibrationCellReport* found = nullptr;
      for (const CalibrationCellReport& c : r.calibration) {
        if (c.group == g.group && c.bin == label) found = &c;
      }
      if (found == nullptr) {
        row.insert(row.end(), {"0", "n/a"});
        continue;
      }
      row.push_back(absl::StrCat(found->count, " (", found->positives, ")"));
      row.push_back(found->p_score.has_value() ? Fixed(*found->p_score)
                                               : std::string("n/a"));
    }
    cal_rows.push_back(std::move(row));
  }
  md += Table(cal_header, cal_rows);
  absl::StrAppend(&md, "\nLargest calibration gap between groups: ",
                  Fixed(r.calibration_gap), " (tolerance ",
                  absl::StrFormat("%g", r.calib_tolerance), ")\n");

  if (!r.impossibility.empty()) {
    md += "\n## Calibration versus equal false positive rates\n\n";
    for (const ImpossibilityVerdict& v : r.impossibility) {
      absl::StrAppend(
          &md, "- ", v.higher_base_rate_group, " (base rate ",
          FormatPercent(v.base_rates.at(v.higher_base_rate_group)),
          ", FPR ", FormatPercent(v.fpr.at(v.higher_base_rate_group)),
          ") vs ", v.lower_base_rate_group, " (base rate ",
          FormatPercent(v.base_rates.at(v.lower_base_rate_group)), ", FPR ",
          FormatPercent(v.fpr.at(v.lower_base_rate_group)), "): ", v.note,
          "\n");
    }
  }

  md += "\n## Policy assessment\n\n";
  std::vector<std::vector<std::string>> assess_rows;
  auto assess_row = [](const GroupAssessment& a) {
    return std::vector<std::string>{
        a.group,
        absl::StrCat(a.acted),
        absl::StrCat(a.refrained),
        Fixed(a.expected_value),
        Fixed(a.expected_disvalue),
        Fixed(a.realized_value),
        Fixed(a.realized_disvalue)};
  };
  for (const GroupAssessment& a : r.assessment.groups) {
    assess_rows.push_back(assess_row(a));
  }
  assess_rows.push_back(assess_row(r.assessment.total));
  md += Table({"Group", "Acted", "Refrained", "Expected value",
               "Expected disvalue", "Realized value", "Realized disvalue"},
              assess_rows);
  md += "\nDisvalue is the loss relative to deciding with perfect "
        "information.\n";

  if (r.equalization.has_value()) {
    const EqualizationResult& e = *r.equalization;
    md += "\n## False positive rate equalization\n\n";
    absl::StrAppend(&md, "Anchor: `", Sv(AnchorName(e.anchor)), "`, group ",
                    e.anchor_group, " keeps its threshold.\n\n");
    std::vector<std::vector<std::string>> eq_rows;
    for (const GroupEqualization& g : e.groups) {
      eq_rows.push_back({g.group, Fixed(g.baseline_threshold),
                         Fixed(g.threshold), FormatPercent(g.baseline_fpr),
                         FormatPercent(g.fpr), absl::StrCat(g.baseline_acted),
                         absl::StrCat(g.acted)});
    }
    md += Table({"Group", "Baseline threshold", "Threshold", "Baseline FPR",
                 "FPR", "Baseline acted", "Acted"},
                eq_rows);
    absl::StrAppend(&md, "\nResidual FPR gap: ", Fixed(e.residual_gap),
                    e.exact_parity ? " (parity reached)"
                                   : " (parity not reachable on these bins)",
                    "\n");
    absl::StrAppend(&md, "Expected disvalue: ",
                    Fixed(e.baseline_expected_disvalue), " -> ",
                    Fixed(e.equalized_expected_disvalue), " (change ",
                    absl::StrFormat("%+.4f", e.disvalue_delta), ")\n");
  }

  if (!r.equivalent_cut.empty()) {
    md += "\n## Equivalent score cuts\n\n";
    for (const auto& [group, cut] : r.equivalent_cut) {
      absl::StrAppend(&md, "- ", group, ": acts like a cut at score ",
                      absl::StrFormat("%g", cut),
                      " on the reference group's curve\n");
    }
  }

  if (r.lottery.has_value()) {
    const LotteryResult& l = *r.lottery;
    md += "\n## Lottery among known negatives\n\n";
    absl::StrAppend(&md, "Excluding ", l.quota, " of ", l.total,
                    " gives everyone probability ", FormatPercent(l.probability),
                    ".\n\n");
    std::vector<std::vector<std::string>> lot_rows;
    for (const auto& [group, ratio] : l.fair_lottery_ratio) {
      lot_rows.push_back({group, Fixed(l.expected_excluded.at(group), 2),
                          FormatPercent(ratio)});
    }
    md += Table({"Group", "Expected excluded", "Exclusion rate"}, lot_rows);
  }

  if (!r.checks.empty()) {
    md += "\n## Figure checks\n\n";
    std::vector<std::vector<std::string>> check_rows;
    for (const FigureCheck& c : r.checks) {
      check_rows.push_back(
          {absl::StrCat("`", c.key, "`"), c.expected, c.actual,
           c.pass ? "pass" : "FAIL"});
    }
    md += Table({"Figure", "Expected", "Actual", "Result"}, check_rows);
  }

  if (!r.notes.empty()) {
    md += "\n## Notes\n\n";
    for (const std::string& note : r.notes) absl::StrAppend(&md, "- ", note, "\n");
  }
  return md;
}

}  // namespace

absl::StatusOr<ReportFormat> ParseReportFormat(std::string_view text) {
  const std::string lower = absl::AsciiStrToLower(Sv(text));
  if (lower == "json") return ReportFormat::kJson;
  if (lower == "md" || lower == "markdown") return ReportFormat::kMarkdown;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown report format '", Sv(text), "'; use json or md"));
}

bool AuditReport::checks_passed() const {
  for (const FigureCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string FormatPercent(double rate) {
  const int64_t hundredths = std::llround(std::floor(rate * 10000.0 + 0.5));
  const int64_t tenths = (hundredths + 5) / 10;
  return absl::StrFormat("%d.%d%%", tenths / 10, tenths % 10);
}

Json ReportToJson(const AuditReport& r) {
  Json j;
  j["report_version"] = kReportVersion;
  j["tool_version"] = std::string(kToolVersion);
  j["command"] = r.command;
  j["source"] = r.source;
  j["title"] = r.title;
  j["action_benefits_subject"] =
      r.valence == ActionValence::kBenefitsSubject;
  j["narrative"] = ValenceNarrative(r.valence);

  Json values;
  values["tp"] = r.values.tp();
  values["fp"] = r.values.fp();
  values["tn"] = r.values.tn();
  values["fn"] = r.values.fn();
  values["defaulted"] = r.values_defaulted;
  values["optimal_threshold"] = r.optimal_threshold;
  j["values"] = values;

  Json policy = PolicyToJson(r.policy);
  policy["spec"] = r.threshold_spec;
  j["policy"] = policy;

  Json groups = Json::array();
  for (const GroupMetrics& g : r.groups) {
    Json jg;
    jg["group"] = g.group;
    jg["records"] = g.confusion.total();
    jg["tp"] = g.confusion.tp;
    jg["fp"] = g.confusion.fp;
    jg["tn"] = g.confusion.tn;
    jg["fn"] = g.confusion.fn;
    jg["base_rate"] = g.base_rate;
    jg["fpr"] = OptionalNumber(g.fpr);
    jg["fnr"] = OptionalNumber(g.fnr);
    jg["ppv"] = OptionalNumber(g.ppv);
    absl::StatusOr<double> t = r.policy.ThresholdFor(g.group);
    jg["threshold"] = t.ok() ? Json(*t) : Json(nullptr);
    groups.push_back(jg);
  }
  j["groups"] = groups;

  Json calibration;
  calibration["bins"] = r.bin_labels;
  Json cells = Json::array();
  for (const CalibrationCellReport& c : r.calibration) {
    Json jc;
    jc["group"] = c.group;
    jc["bin"] = c.bin;
    jc["count"] = c.count;
    jc["positives"] = c.positives;
    jc["p_score"] = OptionalNumber(c.p_score);
    cells.push_back(jc);
  }
  calibration["cells"] = cells;
  calibration["gap"] = r.calibration_gap;
  calibration["tolerance"] = r.calib_tolerance;
  j["calibration"] = calibration;

  Json impossibility = Json::array();
  for (const ImpossibilityVerdict& v : r.impossibility) {
    Json jv;
    jv["higher_base_rate_group"] = v.higher_base_rate_group;
    jv["lower_base_rate_group"] = v.lower_base_rate_group;
    jv["calibration_gap"] = v.calibration_gap;
    jv["calibrated"] = v.calibrated;
    jv["base_rates"] = v.base_rates;
    jv["fpr"] = v.fpr;
    jv["base_rates_differ"] = v.base_rates_differ;
    jv["decisive"] = v.decisive;
    jv["ordering_holds"] = v.ordering_holds;
    jv["strict"] = v.strict;
    jv["note"] = v.note;
    impossibility.push_back(jv);
  }
  j["impossibility"] = impossibility;

  Json assessment;
  Json assessed = Json::array();
  for (const GroupAssessment& a : r.assessment.groups) {
    assessed.push_back(AssessmentToJson(a));
  }
  assessment["groups"] = assessed;
  assessment["total"] = AssessmentToJson(r.assessment.total);
  j["assessment"] = assessment;

  if (r.equalization.has_value()) {
    const EqualizationResult& e = *r.equalization;
    Json je;
    je["anchor"] = std::string(AnchorName(e.anchor));
    je["anchor_group"] = e.anchor_group;
    Json eg = Json::array();
    for (const GroupEqualization& g : e.groups) {
      Json x;
      x["group"] = g.group;
      x["baseline_threshold"] = g.baseline_threshold;
      x["threshold"] = g.threshold;
      x["baseline_fpr"] = g.baseline_fpr;
      x["fpr"] = g.fpr;
      x["baseline_acted"] = g.baseline_acted;
      x["acted"] = g.acted;
      eg.push_back(x);
    }
    je["groups"] = eg;
    je["policy"] = PolicyToJson(e.policy);
    je["residual_gap"] = e.residual_gap;
    je["tolerance"] = e.tolerance;
    je["exact_parity"] = e.exact_parity;
    je["baseline_expected_disvalue"] = e.baseline_expected_disvalue;
    je["equalized_expected_disvalue"] = e.equalized_expected_disvalue;
    je["disvalue_delta"] = e.disvalue_delta;
    j["equalization"] = je;
  } else {
    j["equalization"] = nullptr;
  }

  if (r.lottery.has_value()) {
    Json jl;
    jl["total"] = r.lottery->total;
    jl["quota"] = r.lottery->quota;
    jl["probability"] = r.lottery->probability;
    jl["fair_lottery_ratio"] = r.lottery->fair_lottery_ratio;
    jl["expected_excluded"] = r.lottery->expected_excluded;
    j["lottery"] = jl;
  } else {
    j["lottery"] = nullptr;
  }

  j["equivalent_cut"] = Json(r.equivalent_cut);

  Json checks = Json::array();
  for (const FigureCheck& c : r.checks) {
    Json jc;
    jc["key"] = c.key;
    jc["expected"] = c.expected;
    jc["actual"] = c.actual;
    jc["pass"] = c.pass;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["checks_passed"] = r.checks_passed();
  j["notes"] = r.notes;
  return j;
}

std::string RenderReport(const AuditReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    return ReportToJson(report).dump(2) + "\n";
  }
  return RenderMarkdown(report);
}

}  // namespace fairaudit

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

#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include "fairaudit/cli.h"
#include "json.hpp"
#include "test_util.h"

namespace fairaudit {
namespace {

using ::fairaudit::testing::StatusIs;
using ::testing::HasSubstr;
using Json = nlohmann::json;

AuditReport Compas() {
  absl::StatusOr<AuditReport> report = CmdScenario("compas_synthetic");
  EXPECT_TRUE(report.ok()) << report.status();
  return *std::move(report);
}

TEST(FormatPercentTest, OneDecimalRounding) {
  EXPECT_EQ(FormatPercent(0.0), "0.0%");
  EXPECT_EQ(FormatPercent(1.0), "100.0%");
  EXPECT_EQ(FormatPercent(0.2), "20.0%");
  EXPECT_EQ(FormatPercent(0.1), "10.0%");
  EXPECT_EQ(FormatPercent(0.4), "40.0%");
  EXPECT_EQ(FormatPercent(0.12344), "12.3%");
  EXPECT_EQ(FormatPercent(0.12346), "12.4%");
  EXPECT_EQ(FormatPercent(0.9996), "100.0%");
}

TEST(FormatPercentTest, PublishedTableFromCounts) {
  // 805/1795 = 44.847%: rounds to 44.85% and then 44.9%.
  EXPECT_EQ(FormatPercent(805.0 / 1795), "44.9%");
  EXPECT_EQ(FormatPercent(349.0 / 1488), "23.5%");
  EXPECT_EQ(FormatPercent(523.0 / 1868), "28.0%");
  EXPECT_EQ(FormatPercent(454.0 / 951), "47.7%");
}

TEST(ParseReportFormatTest, KnownNames) {
  EXPECT_EQ(*ParseReportFormat("json"), ReportFormat::kJson);
  EXPECT_EQ(*ParseReportFormat("md"), ReportFormat::kMarkdown);
  EXPECT_EQ(*ParseReportFormat("Markdown"), ReportFormat::kMarkdown);
  EXPECT_THAT(ParseReportFormat("html"),
              StatusIs(absl::StatusCode::kInvalidArgument, "html"));
}

TEST(RenderReportTest, JsonHasVersionsAndGroups) {
  const Json j = Json::parse(RenderReport(Compas(), ReportFormat::kJson));
  EXPECT_EQ(j.at("report_version"), kReportVersion);
  EXPECT_EQ(j.at("tool_version"), std::string(kToolVersion));
  ASSERT_TRUE(j.contains("groups"));
  EXPECT_EQ(j.at("groups").size(), 2);
  EXPECT_EQ(j.at("values").at("defaulted"), true);
  EXPECT_EQ(j.at("action_benefits_subject"), false);
  EXPECT_EQ(j.at("checks_passed"), true);
}

TEST(RenderReportTest, JsonValuesReparseExactly) {
  const AuditReport report = Compas();
  const Json j = Json::parse(RenderReport(report, ReportFormat::kJson));
  ASSERT_EQ(j.at("groups").size(), report.groups.size());
  for (size_t i = 0; i < report.groups.size(); ++i) {
    const GroupMetrics& g = report.groups[i];
    const Json& jg = j.at("groups")[i];
    EXPECT_EQ(jg.at("group"), g.group);
    EXPECT_EQ(jg.at("fp").get<int64_t>(), g.confusion.fp);
    EXPECT_EQ(jg.at("fpr").get<double>(), *g.fpr);
    EXPECT_EQ(jg.at("fnr").get<double>(), *g.fnr);
    EXPECT_EQ(jg.at("ppv").get<double>(), *g.ppv);
    EXPECT_EQ(jg.at("base_rate").get<double>(), g.base_rate);
  }
  const Json& eq = j.at("equalization");
  EXPECT_EQ(eq.at("disvalue_delta").get<double>(),
            report.equalization->disvalue_delta);
  EXPECT_EQ(eq.at("groups")[1].at("threshold").get<double>(),
            report.equalization->groups[1].threshold);
  EXPECT_EQ(j.at("calibration").at("gap").get<double>(),
            report.calibration_gap);
}

TEST(RenderReportTest, UndefinedRatesRenderAsNull) {
  AuditReport report = Compas();
  report.groups[0].fpr.reset();
  const Json j = Json::parse(RenderReport(report, ReportFormat::kJson));
  EXPECT_TRUE(j.at("groups")[0].at("fpr").is_null());
  EXPECT_THAT(RenderReport(report, ReportFormat::kMarkdown), HasSubstr("n/a"));
}

TEST(RenderReportTest, MarkdownGroupColumnsShowPublishedRates) {
  const std::string md = RenderReport(Compas(), ReportFormat::kMarkdown);
  EXPECT_THAT(md, HasSubstr("| Measure | black | white |"));
  EXPECT_THAT(md, HasSubstr("| False positive rate | 44.9% | 23.5% |"));
  EXPECT_THAT(md, HasSubstr("| False negative rate | 28.0% | 47.7% |"));
  EXPECT_THAT(md, HasSubstr(std::string(kToolVersion)));
  EXPECT_THAT(md, HasSubstr("DEFAULT symmetric values"));
}

TEST(RenderReportTest, Deterministic) {
  const AuditReport report = Compas();
  EXPECT_EQ(RenderReport(report, ReportFormat::kJson),
            RenderReport(report, ReportFormat::kJson));
  EXPECT_EQ(RenderReport(report, ReportFormat::kMarkdown),
            RenderReport(report, ReportFormat::kMarkdown));
  EXPECT_EQ(RenderReport(Compas(), ReportFormat::kMarkdown),
            RenderReport(report, ReportFormat::kMarkdown));
}

// Rounding the json rates to one decimal percent reproduces the markdown.
TEST(RenderReportTest, MarkdownAgreesWithRoundedJson) {
  for (const std::string name :
       {"stride_height", "section_grades", "compas_synthetic",
        "compas_benefit", "certainty_lottery", "miscalibrated_compas"}) {
    FA_ASSERT_OK_AND_ASSIGN(AuditReport report, CmdScenario(name));
    const Json j = Json::parse(RenderReport(report, ReportFormat::kJson));
    const std::string md = RenderReport(report, ReportFormat::kMarkdown);
    for (const auto& [label, key] :
         std::vector<std::pair<std::string, std::string>>{
             {"Base rate", "base_rate"},
             {"False positive rate", "fpr"},
             {"False negative rate", "fnr"},
             {"Positive predictive value", "ppv"}}) {
      std::string row = "| " + label + " |";
      for (const Json& g : j.at("groups")) {
        row += " " +
               (g.at(key).is_null() ? std::string("n/a")
                                    : FormatPercent(g.at(key).get<double>())) +
               " |";
      }
      EXPECT_THAT(md, HasSubstr(row)) << name;
    }
  }
}

TEST(RenderReportTest, NarrativeFollowsValence) {
  FA_ASSERT_OK_AND_ASSIGN(AuditReport benefit, CmdScenario("compas_benefit"));
  const Json j = Json::parse(RenderReport(benefit, ReportFormat::kJson));
  EXPECT_EQ(j.at("action_benefits_subject"), true);
  EXPECT_THAT(j.at("narrative").get<std::string>(), HasSubstr("benefit"));
  EXPECT_THAT(RenderReport(benefit, ReportFormat::kMarkdown),
              HasSubstr("fewer members receive the benefit"));
}

TEST(RenderReportTest, LotteryNoteMentionsTheSlip) {
  FA_ASSERT_OK_AND_ASSIGN(AuditReport report, CmdScenario("certainty_lottery"));
  const std::string md = RenderReport(report, ReportFormat::kMarkdown);
  EXPECT_THAT(md, HasSubstr("20.0%"));
  EXPECT_THAT(md, HasSubstr("25%"));
  const Json j = Json::parse(RenderReport(report, ReportFormat::kJson));
  EXPECT_EQ(j.at("lottery").at("probability").get<double>(), 0.2);
}

}  // namespace
}  // namespace fairaudit

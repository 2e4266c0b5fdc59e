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

#include "fairaudit/ingest.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "string_view.h"

namespace fairaudit {

namespace {

absl::StatusOr<double> ParseDouble(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    return absl::InvalidArgumentError(absl::StrCat("not a number: '", text, "'"));
  }
  return value;
}

absl::StatusOr<int> ParseInt(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    return absl::InvalidArgumentError(
        absl::StrCat("not an integer: '", text, "'"));
  }
  return value;
}

// Splits one CSV line. Fields may be double-quoted; "" inside quotes is a
// literal quote.
absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) return absl::InvalidArgumentError("unterminated quoted field");
  return fields;
}

std::string QuoteCsv(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string FormatScore(double score) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), score);
  return std::string(buf, ptr);
}

}  // namespace

absl::StatusOr<BinScheme> ParseBinSpec(std::string_view spec_text) {
  absl::string_view spec = Sv(spec_text);
  if (absl::ConsumePrefix(&spec, "int:")) {
    std::vector<absl::string_view> parts = absl::StrSplit(spec, ':');
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(
          "integer bin spec must look like int:LO:HI");
    }
    auto lo = ParseInt(parts[0]);
    if (!lo.ok()) return lo.status();
    auto hi = ParseInt(parts[1]);
    if (!hi.ok()) return hi.status();
    return BinScheme::IntegerScale(*lo, *hi);
  }
  std::vector<absl::string_view> halves = absl::StrSplit(spec, '/');
  if (halves.size() > 2) {
    return absl::InvalidArgumentError("bin spec has more than one '/'");
  }
  std::vector<double> edges;
  for (absl::string_view e : absl::StrSplit(halves[0], ',')) {
    auto v = ParseDouble(e);
    if (!v.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad bin edge: ", v.status().message()));
    }
    edges.push_back(*v);
  }
  std::vector<std::string> labels;
  if (halves.size() == 2) {
    for (absl::string_view l : absl::StrSplit(halves[1], ',')) {
      labels.emplace_back(absl::StripAsciiWhitespace(l));
    }
  }
  return BinScheme::Create(std::move(edges), std::move(labels));
}

absl::StatusOr<Population> IngestCsv(const DatasetConfig& config) {
  if (!config.valence.has_value()) {
    return absl::InvalidArgumentError(
        "dataset config must state whether acting benefits or harms the "
        "subject");
  }
  std::ifstream in(config.path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrCat("cannot open '", config.path, "' for reading"));
  }

  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", config.path, "' is empty; expected a header row"));
  }
  if (absl::StartsWith(line, "\xEF\xBB\xBF")) line.erase(0, 3);  // UTF-8 BOM
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = SplitCsvLine(line);
  if (!header.ok()) return header.status();
  std::map<std::string, size_t> column_index;
  for (size_t i = 0; i < header->size(); ++i) {
    column_index[std::string(absl::StripAsciiWhitespace((*header)[i]))] = i;
  }
  size_t cols[4];
  const std::string* names[4] = {&config.id_column, &config.group_column,
                                 &config.score_column, &config.outcome_column};
  for (int i = 0; i < 4; ++i) {
    auto it = column_index.find(*names[i]);
    if (it == column_index.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "missing column '", *names[i], "' in header of '", config.path, "'"));
    }
    cols[i] = it->second;
  }

  std::vector<Record> records;
  int64_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    ++row;
    auto row_error = [&](absl::string_view what) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", row, " of '", config.path, "': ", what));
    };
    auto fields = SplitCsvLine(line);
    if (!fields.ok()) return row_error(fields.status().message());
    if (fields->size() != header->size()) {
      return row_error(absl::StrCat("expected ", header->size(),
                                    " fields, got ", fields->size()));
    }
    Record r;
    r.id = (*fields)[cols[0]];
    r.group = (*fields)[cols[1]];
    auto score = ParseDouble((*fields)[cols[2]]);
    if (!score.ok()) {
      return row_error(absl::StrCat("unparseable score: ",
                                    score.status().message()));
    }
    r.score = *score;
    absl::string_view outcome = absl::StripAsciiWhitespace((*fields)[cols[3]]);
    if (outcome == "1") {
      r.outcome = Outcome::kPositive;
    } else if (outcome == "0") {
      r.outcome = Outcome::kNegative;
    } else {
      return row_error(
          absl::StrCat("outcome must be 0 or 1, got '", outcome, "'"));
    }
    if (!config.bins.Contains(r.score)) {
      return row_error(absl::StrCat("score ", FormatScore(r.score),
                                    " outside declared range [",
                                    FormatScore(config.bins.lower()), ", ",
                                    FormatScore(config.bins.upper()), "]"));
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("'", config.path, "' has no data rows"));
  }
  auto population =
      ValidatePopulation(std::move(records), config.bins, *config.valence);
  if (!population.ok()) {
    return absl::Status(population.status().code(),
                        absl::StrCat("'", config.path, "': ",
                                     population.status().message()));
  }
  return population;
}

absl::Status ExportCsv(const Population& population, const std::string& path) {
  if (path.empty()) {
    return absl::InvalidArgumentError("export path is empty");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot open '", path, "' for writing"));
  }
  out << "id,group,score,outcome\n";
  for (const Record& r : population.records()) {
    out << QuoteCsv(r.id) << ',' << QuoteCsv(r.group) << ','
        << FormatScore(r.score) << ','
        << (r.outcome == Outcome::kPositive ? '1' : '0') << '\n';
  }
  out.flush();
  if (!out) {
    return absl::DataLossError(absl::StrCat("write to '", path, "' failed"));
  }
  return absl::OkStatus();
}

}  // namespace fairaudit

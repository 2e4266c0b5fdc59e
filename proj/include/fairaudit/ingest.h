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

// Comma-separated scored populations: header row, one record per line,
// outcome encoded 0/1 (1 = the predicted property occurred).

#ifndef FAIRAUDIT_INGEST_H_
#define FAIRAUDIT_INGEST_H_

#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairaudit/domain.h"

namespace fairaudit {

struct DatasetConfig {
  std::string path;
  std::string id_column = "id";
  std::string group_column = "group";
  std::string score_column = "score";
  std::string outcome_column = "outcome";
  BinScheme bins;
  // Required; ingest fails rather than assume a valence.
  std::optional<ActionValence> valence;
};

// Parses a bin scheme description:
//   "int:LO:HI"              one bin per integer score in [LO, HI]
//   "E0,E1,...,Ek"           explicit edges
//   "E0,E1,...,Ek/L1,...,Lk" explicit edges with bin labels
absl::StatusOr<BinScheme> ParseBinSpec(std::string_view spec);

// Reads and validates a population. Rows that fail to parse abort the
// ingest; errors name the 1-based data row (the header is not counted).
absl::StatusOr<Population> IngestCsv(const DatasetConfig& config);

// Writes header "id,group,score,outcome" and one row per record, in record
// order. Scores are written in shortest round-trip form.
absl::Status ExportCsv(const Population& population, const std::string& path);

}  // namespace fairaudit

#endif  // FAIRAUDIT_INGEST_H_

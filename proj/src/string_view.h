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


// Conversions between std::string_view and absl::string_view. The abseil
// release this builds against keeps its own string_view type.

#ifndef FAIRAUDIT_SRC_STRING_VIEW_H_
#define FAIRAUDIT_SRC_STRING_VIEW_H_

#include <string_view>

#include "absl/strings/string_view.h"

namespace fairaudit {

inline absl::string_view Sv(std::string_view s) { return {s.data(), s.size()}; }
inline std::string_view StdSv(absl::string_view s) {
  return {s.data(), s.size()};
}

}  // namespace fairaudit

#endif  // FAIRAUDIT_SRC_STRING_VIEW_H_

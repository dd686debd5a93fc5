//
// Copyright 2026 The xtars Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef XTARS_LOG_H_
#define XTARS_LOG_H_

#include <string_view>

#include "json.hpp"

namespace xtars {

enum class LogLevel { kDebug, kInfo, kWarn, kError };

// Writes one JSON object per line to stderr. Thread-safe.
void log_event(LogLevel level, std::string_view event, const nlohmann::ordered_json& fields = {});

void set_log_level(LogLevel level);
LogLevel parse_log_level(std::string_view name);

}  // namespace xtars

#endif  // XTARS_LOG_H_

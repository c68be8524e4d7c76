/*
 * Copyright 2026 The Sentinel Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Parser for the TOML subset used by config files: [tables], [dotted.tables],
// [[arrays.of.tables]], bare/quoted/dotted keys, basic and literal strings,
// integers, floats, booleans, arrays (multi-line allowed) and inline tables.
// Dates and multi-line strings are not supported.

#ifndef SENTINEL_PIPELINE_TOML_H_
#define SENTINEL_PIPELINE_TOML_H_

#include <string>
#include <string_view>

#include "json.hpp"

namespace sentinel::pipeline {

// Throws ParseError with the 1-based line number.
nlohmann::json ParseToml(std::string_view text);

// Throws kNotFound when the file cannot be read.
nlohmann::json ParseTomlFile(const std::string& path);

}  // namespace sentinel::pipeline

#endif  // SENTINEL_PIPELINE_TOML_H_

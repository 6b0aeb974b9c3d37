// Copyright 2026 The SchemaForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "schemaforge/data_node.hpp"

namespace schemaforge {

/// Parses RFC 8259 JSON. Object key order is preserved; duplicate keys are
/// rejected. Throws ParseError with line/column.
DataNode parse_json(std::string_view text);

enum class JsonStyle { Compact, Pretty };

/// Compact output has no insignificant whitespace. Pretty output indents by
/// two spaces.
std::string serialize_json(const DataNode& doc, JsonStyle style = JsonStyle::Compact);

/// Byte length of serialize_json(doc, JsonStyle::Compact) without building it.
std::size_t compact_size(const DataNode& doc);

/// Appends a JSON string literal (with quotes) for `text`.
void append_json_string(std::string& out, std::string_view text);

}  // namespace schemaforge

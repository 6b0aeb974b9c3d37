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

#include <string>
#include <string_view>

#include "schemaforge/data_node.hpp"

namespace schemaforge {

/// Parses the first YAML document under the YAML 1.2 core schema: plain
/// `yes`/`no` are strings, quoted scalars are always strings, aliases are
/// expanded. Throws ParseError, or UnsupportedError for non-scalar mapping
/// keys and non-finite numbers.
DataNode from_yaml(std::string_view text);

/// Block-style YAML. Strings that would read back as another type are quoted.
std::string to_yaml(const DataNode& doc);

/// XML to DataNode:
///   - the root element becomes a single-key object {name: value};
///   - attributes are stored under "@name", text under "#text";
///   - repeated sibling elements collapse into an array at the position of
///     the first occurrence;
///   - an element with only text becomes that (trimmed) string, an empty
///     element becomes null. Text is never converted to numbers.
/// Throws ParseError for malformed input.
DataNode from_xml(std::string_view text);

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
};

/// RFC 4180 CSV to an array of row objects. With header=false the keys are
/// "col1", "col2", ... Unquoted cells are sniffed: integers (sign + digits),
/// decimals, exact `true`/`false`; an empty unquoted cell is null; anything
/// else, and every quoted cell, stays a string. Throws ParseError for ragged
/// rows, unterminated quotes and duplicate header names.
DataNode from_csv(std::string_view text, const CsvOptions& options = {});

}  // namespace schemaforge

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
#include <vector>

#include "schemaforge/data_node.hpp"
#include "schemaforge/doc_path.hpp"
#include "schemaforge/errors.hpp"

namespace schemaforge {

inline constexpr std::string_view kSchemaDialect = "https://json-schema.org/draft/2020-12/schema";

/// A JSON Schema document (an object or a boolean schema).
///
/// The document is kept verbatim: keywords the validator does not know are
/// preserved and ignored. Construction does not validate; use
/// validate_schema for that.
class SchemaNode {
 public:
  SchemaNode() : doc_(ObjectMap{}) {}
  explicit SchemaNode(DataNode doc) : doc_(std::move(doc)) {}

  const DataNode& doc() const noexcept { return doc_; }
  const DataNode* keyword(std::string_view name) const { return doc_.get(name); }

  friend bool operator==(const SchemaNode& a, const SchemaNode& b) { return a.doc_ == b.doc_; }

 private:
  DataNode doc_;
};

/// Returns `schema` with "$schema" set to the 2020-12 dialect as its first key.
SchemaNode with_dialect(const SchemaNode& schema);

struct Violation {
  DocPath instance_path;
  DocPath schema_path;
  std::string keyword;
  std::string message;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;

  void add(Violation violation) {
    valid = false;
    violations.push_back(std::move(violation));
  }
  /// {"valid": bool, "violations": [{"instancePath", "schemaPath", "keyword", "message"}]}
  DataNode to_data() const;
  /// One "pointer: message" line per violation.
  std::string to_text() const;
};

/// A schema could not be used (dangling or cyclic $ref during validation).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A merged schema failed validate_schema.
class SchemaRejected : public Error {
 public:
  explicit SchemaRejected(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Validates `doc` against `schema`. Supported keywords: type, properties,
/// required, items, enum, const, anyOf, oneOf, allOf, $ref, $defs,
/// additionalProperties, patternProperties, minimum, maximum, minLength,
/// maxLength, pattern. title, description and format never produce
/// violations. Throws SchemaError for a $ref that cannot be resolved.
ValidationReport validate_instance(const DataNode& doc, const SchemaNode& schema);

/// Structural checks on a candidate schema: legal type names, schema-valued
/// keywords, well-formed required/enum/bounds, supported regexes, and every
/// $ref of the form "#/$defs/<name>..." resolving inside the candidate.
ValidationReport validate_schema(const DataNode& candidate);

/// The sub-schema at `path` plus the transitive closure of root $defs it
/// references, as a standalone schema. The empty path returns the schema.
/// Throws NotFoundError, or SchemaError for a dangling reference.
SchemaNode select_subschema(const SchemaNode& schema, const DocPath& path);

/// Replaces the sub-schema at `path`. The replacement's own $defs move to the
/// root $defs; a name already taken by a different definition gets the
/// smallest free numeric suffix (compound -> compound2) and the
/// replacement's $refs are rewritten. Throws NotFoundError, or
/// SchemaRejected when the replacement or the merged result is invalid.
SchemaNode merge_subschema(const SchemaNode& schema, const DocPath& path, const SchemaNode& replacement);

/// Checks a pattern against the supported regex subset (ECMAScript without
/// lookbehind, named groups or backreferences). Returns an error message, or
/// an empty string when the pattern is acceptable.
std::string check_pattern(std::string_view pattern);

}  // namespace schemaforge

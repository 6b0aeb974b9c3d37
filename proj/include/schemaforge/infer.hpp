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

#include "schemaforge/data_node.hpp"
#include "schemaforge/schema.hpp"

namespace schemaforge {

enum class RequiredMode {
  /// A property is required when every sibling object has it.
  Intersection,
  /// Every observed property is required.
  AllPresent,
};

struct InferenceOptions {
  bool detect_integer = true;
  RequiredMode required_mode = RequiredMode::Intersection;
  /// When false, array items become an anyOf of the distinct element
  /// schemas instead of being unified.
  bool merge_array_items = true;
};

/// Infers a schema that `doc` validates against. Object schemas list the
/// observed properties in document order; array element schemas are unified
/// with merge_schemas. No format or enum detection.
SchemaNode infer_schema(const DataNode& doc, const InferenceOptions& options = {});

/// Least schema (in the inference shape) accepting everything `a` or `b`
/// accepts: integer and number unify to number, objects merge property-wise,
/// arrays merge items, anything else becomes a de-duplicated anyOf.
SchemaNode merge_schemas(const SchemaNode& a, const SchemaNode& b, const InferenceOptions& options = {});

}  // namespace schemaforge

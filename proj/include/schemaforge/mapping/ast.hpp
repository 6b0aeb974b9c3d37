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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "schemaforge/decimal.hpp"

namespace schemaforge::mapping {

/// Byte range in the expression source.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;

  std::size_t end() const noexcept { return offset + length; }
  bool contains(const Span& other) const noexcept { return other.offset >= offset && other.end() <= end(); }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class NodeKind {
  Path,       // children: steps (at least one)
  Name,       // text: field name
  Wildcard,   // *
  Context,    // $
  Root,       // $$
  Variable,   // text: variable name without '$'
  String,     // text
  Number,     // number
  Boolean,    // boolean
  Null,
  Object,     // children: key0, value0, key1, value1, ...
  Array,      // children: items
  Binary,     // text: operator; children: lhs, rhs
  Negate,     // children: operand
  Condition,  // children: condition, then[, else]
  Call,       // text: function name without '$'; children: arguments
  Lambda,     // params; children: body
  Block,      // children: expressions
  Bind,       // text: variable name; children: value
  Group,      // children: base, key0, value0, ...
};

std::string_view node_kind_name(NodeKind kind);

struct Node {
  NodeKind kind = NodeKind::Null;
  Span span;
  std::string text;
  Decimal number;
  bool boolean = false;
  std::vector<Node> children;
  /// Predicates applied to this node's result, in order (`x[p1][p2]`).
  std::vector<Node> stages;
  /// Lambda parameter names without '$'.
  std::vector<std::string> params;
  /// `x[]`: keep a singleton result as an array.
  bool keep_array = false;
  /// Array constructor used as the first or last step of a path: its result
  /// is not flattened into the surrounding sequence.
  bool cons_array = false;
};

/// Equality ignoring spans.
bool structurally_equal(const Node& a, const Node& b);

/// A parsed mapping expression. Immutable and cheap to copy; one instance
/// can be evaluated from several threads at once.
class MappingAst {
 public:
  MappingAst(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::make_shared<const std::string>(std::move(source))) {}

  const Node& root() const noexcept { return *root_; }
  const std::string& source() const noexcept { return *source_; }

 private:
  std::shared_ptr<const Node> root_;
  std::shared_ptr<const std::string> source_;
};

/// Renders an expression back to source text that parses to a structurally
/// equal tree.
std::string to_source(const Node& node);

}  // namespace schemaforge::mapping

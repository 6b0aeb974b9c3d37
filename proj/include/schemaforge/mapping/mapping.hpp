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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schemaforge/data_node.hpp"
#include "schemaforge/errors.hpp"
#include "schemaforge/mapping/ast.hpp"

namespace schemaforge::mapping {

/// 1-based line and column of a byte offset.
struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};
Position position_of(std::string_view source, std::size_t offset);

class MappingSyntaxError : public Error {
 public:
  MappingSyntaxError(Span span, Position position, std::string message)
      : Error(std::to_string(position.line) + ":" + std::to_string(position.column) + " " + message),
        span_(span), position_(position), detail_(std::move(message)) {}

  const Span& span() const noexcept { return span_; }
  const Position& position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Span span_;
  Position position_;
  std::string detail_;
};

/// Raised while evaluating: type errors, division by zero, exhausted limits.
class EvaluationError : public Error {
 public:
  EvaluationError(Span span, std::string message)
      : Error(message + " (at offset " + std::to_string(span.offset) + ")"), span_(span), detail_(std::move(message)) {}

  const Span& span() const noexcept { return span_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Span span_;
  std::string detail_;
};

/// Parses a mapping expression. Whitespace and /* */ comments are ignored.
/// Throws MappingSyntaxError.
MappingAst parse_mapping(std::string_view source);

struct Diagnostic {
  Span span;
  Position position;
  std::string message;
};

struct SyntaxReport {
  bool valid = true;
  std::vector<Diagnostic> diagnostics;

  /// One "line:col message" line per diagnostic.
  std::string to_text() const;
  DataNode to_data() const;
};

/// Parses without evaluating and checks every `$name(...)` call against the
/// function table (name and arity). Calls to variables bound in the
/// expression itself are accepted.
SyntaxReport validate_syntax(std::string_view source);

enum class ArgKind { Any, Function };

struct FunctionInfo {
  std::string name;  // without '$'
  std::size_t min_arity = 0;
  std::size_t max_arity = 0;
  /// When called with one argument fewer than min_arity, the context value
  /// is passed as the first argument (`names.$uppercase()`).
  bool context_default = false;
  std::vector<ArgKind> params;
};

const std::vector<FunctionInfo>& registered_functions();
/// Accepts the name with or without the leading '$'.
const FunctionInfo* find_function(std::string_view name);

struct EvalOptions {
  std::size_t max_depth = 256;
  std::uint64_t max_steps = 10'000'000;
};

/// Evaluates `ast` against `input`. Returns nullopt when the expression
/// produces no value. Throws EvaluationError.
std::optional<DataNode> evaluate_mapping(const MappingAst& ast, const DataNode& input, const EvalOptions& options = {});

}  // namespace schemaforge::mapping

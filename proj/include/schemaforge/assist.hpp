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

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schemaforge/data_node.hpp"
#include "schemaforge/doc_path.hpp"
#include "schemaforge/gateway.hpp"
#include "schemaforge/mapping/mapping.hpp"
#include "schemaforge/schema.hpp"
#include "schemaforge/truncate.hpp"

namespace schemaforge {

/// The exact sentence opening every schema-authoring system prompt.
inline constexpr std::string_view kRoleSentence = "You are a JSON Schema expert";

enum class PromptKind { SchemaCreate, SchemaModify, SchemaQuery, DataCreate, DataModify, DataQuery, MappingGenerate };

std::string_view prompt_kind_name(PromptKind kind);
std::optional<PromptKind> parse_prompt_kind(std::string_view name);
bool is_schema_kind(PromptKind kind);  // create or modify
bool is_query_kind(PromptKind kind);

/// Text of an embedded asset under assets/prompts; throws Error if unknown.
std::string_view prompt_asset(std::string_view name);

/// Replaces {{name}} placeholders. Throws Error naming any placeholder left
/// without a value.
std::string render_template(std::string_view text, const std::vector<std::pair<std::string, std::string>>& values);

struct PromptInputs {
  std::optional<std::string> description;
  std::optional<DataNode> schema;
  std::optional<DocPath> context_path;
  std::optional<DataNode> document;
  std::optional<DataNode> target_schema;
  std::optional<std::string> remarks;
  /// Latest proposal of the running conversation, sent back as context.
  std::optional<std::string> prior_proposal;
  TruncationConfig truncation;
};

class MissingInputError : public PreconditionError {
 public:
  explicit MissingInputError(std::string field)
      : PreconditionError("missing input: " + field), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct TruncationSummary {
  std::size_t final_n = 0;
  std::size_t iterations = 0;
  std::size_t bytes = 0;
  bool budget_met = true;
};

struct PromptBundle {
  PromptKind kind = PromptKind::SchemaCreate;
  std::vector<ChatMessage> messages;
  std::optional<DocPath> context_path;
  /// Set when a document was embedded.
  std::optional<TruncationSummary> truncation;
  /// Data kinds: schema the proposal must satisfy (sub-schema at context_path).
  std::optional<DataNode> instance_schema;

  DataNode to_data() const;
  static PromptBundle from_data(const DataNode& data);
};

/// Builds the messages for `kind`. Throws MissingInputError.
PromptBundle build_prompt(PromptKind kind, const PromptInputs& inputs);

/// If the trimmed response is exactly one fenced block (``` with an optional
/// language word, content, closing ```), returns the trimmed content;
/// otherwise returns the trimmed response.
std::string strip_artifacts(std::string_view response);

/// The schema that applies to the instance location `path`, following
/// properties, additionalProperties, items and local $refs. {} when unknown.
DataNode schema_at_instance_path(const DataNode& schema, const DocPath& path);

enum class Phase { Idle, AwaitingLlm, Proposed, UserEditing, Applied, Discarded };
std::string_view phase_name(Phase phase);

/// No report (query kinds), a schema-core report or a mapping syntax report.
using Validation = std::variant<std::monostate, ValidationReport, mapping::SyntaxReport>;
bool validation_valid(const Validation& validation);
DataNode validation_to_data(const Validation& validation);

struct HistoryEntry {
  PromptBundle bundle;
  /// Transport output, byte for byte.
  std::string raw_response;
};

struct SessionState {
  Phase phase = Phase::Idle;
  std::optional<PromptKind> kind;
  std::optional<DocPath> context_path;
  std::optional<DataNode> instance_schema;
  std::string proposal;
  Validation validation;
  std::vector<HistoryEntry> history;

  bool valid() const { return validation_valid(validation) && !std::holds_alternative<std::monostate>(validation); }
  DataNode to_data() const;
  static SessionState from_data(const DataNode& data);
};

class IllegalTransition : public Error {
 public:
  using Error::Error;
};

/// apply() while the proposal is invalid.
class BlockedApply : public IllegalTransition {
 public:
  using IllegalTransition::IllegalTransition;
};

/// Validates `proposal` as the given kind expects.
Validation validate_proposal(PromptKind kind, const std::string& proposal,
                             const std::optional<DataNode>& instance_schema = std::nullopt);

/// Sends the bundle, records the raw response, strips artifacts, validates.
/// Gateway errors propagate and the input state is left as it was.
SessionState submit(const SessionState& state, const PromptBundle& bundle, Transport& transport,
                    const GatewayConfig& config, const LogSink& log = {});

SessionState user_edit(const SessionState& state, std::string edited);

SessionState discard(const SessionState& state);

struct ApplyTarget {
  /// Schema kinds: schema to merge into. Data kinds: optional base document.
  std::optional<DataNode> schema;
  /// Mapping: full input document. Data modify: document to edit.
  std::optional<DataNode> document;
  mapping::EvalOptions eval;
};

struct ApplyResult {
  SessionState state;
  DataNode result;
};

/// Schema kinds merge the proposal at context_path, mapping evaluates it over
/// the full document (no value gives null), data kinds write it at
/// context_path. Throws BlockedApply unless valid, IllegalTransition for query
/// kinds or a wrong phase.
ApplyResult apply(const SessionState& state, const ApplyTarget& target);

}  // namespace schemaforge

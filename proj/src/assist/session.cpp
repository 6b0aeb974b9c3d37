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
#include "schemaforge/assist.hpp"
#include "schemaforge/json.hpp"

namespace schemaforge {
namespace {

bool one_of(Phase phase, std::initializer_list<Phase> allowed) {
  for (const Phase p : allowed) {
    if (p == phase) return true;
  }
  return false;
}

[[noreturn]] void illegal(const char* op, Phase phase) {
  throw IllegalTransition(std::string(op) + " is not allowed in phase " + std::string(phase_name(phase)));
}

ValidationReport parse_failure(const ParseError& e) {
  ValidationReport report;
  report.add({DocPath{}, DocPath{}, "json", std::string("proposal is not valid JSON: ") + e.what()});
  return report;
}

}  // namespace

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::Idle: return "idle";
    case Phase::AwaitingLlm: return "awaiting_llm";
    case Phase::Proposed: return "proposed";
    case Phase::UserEditing: return "user_editing";
    case Phase::Applied: return "applied";
    case Phase::Discarded: return "discarded";
  }
  return "idle";
}

bool validation_valid(const Validation& validation) {
  if (const auto* r = std::get_if<ValidationReport>(&validation)) return r->valid;
  if (const auto* r = std::get_if<mapping::SyntaxReport>(&validation)) return r->valid;
  return true;
}

DataNode validation_to_data(const Validation& validation) {
  DataNode data;
  std::string_view type;
  if (const auto* r = std::get_if<ValidationReport>(&validation)) {
    data = r->to_data();
    type = "schema";
  } else if (const auto* r = std::get_if<mapping::SyntaxReport>(&validation)) {
    data = r->to_data();
    type = "mapping";
  } else {
    return DataNode(nullptr);
  }
  ObjectMap out{{"type", DataNode(type)}};
  for (const auto& [k, v] : data.as_object()) out.set(k, v);
  return DataNode(std::move(out));
}

Validation validate_proposal(PromptKind kind, const std::string& proposal, const std::optional<DataNode>& instance_schema) {
  if (is_query_kind(kind)) return std::monostate{};
  if (kind == PromptKind::MappingGenerate) return mapping::validate_syntax(proposal);
  DataNode doc;
  try {
    doc = parse_json(proposal);
  } catch (const ParseError& e) {
    return parse_failure(e);
  }
  if (is_schema_kind(kind)) return validate_schema(doc);
  if (!instance_schema) return ValidationReport{};
  try {
    return validate_instance(doc, SchemaNode(*instance_schema));
  } catch (const SchemaError& e) {
    ValidationReport report;
    report.add({DocPath{}, DocPath{}, "$ref", e.what()});
    return report;
  }
}

SessionState submit(const SessionState& state, const PromptBundle& bundle, Transport& transport,
                    const GatewayConfig& config, const LogSink& log) {
  if (!one_of(state.phase, {Phase::Idle, Phase::Proposed, Phase::Discarded, Phase::Applied})) illegal("submit", state.phase);
  std::string raw = complete(transport, config, bundle.messages, log);
  SessionState next = state;
  next.kind = bundle.kind;
  next.context_path = bundle.context_path;
  next.instance_schema = bundle.instance_schema;
  next.proposal = strip_artifacts(raw);
  next.validation = validate_proposal(bundle.kind, next.proposal, next.instance_schema);
  next.history.push_back({bundle, std::move(raw)});
  next.phase = Phase::Proposed;
  return next;
}

SessionState user_edit(const SessionState& state, std::string edited) {
  if (!one_of(state.phase, {Phase::Proposed, Phase::UserEditing})) illegal("edit", state.phase);
  SessionState next = state;
  next.proposal = std::move(edited);
  next.validation = validate_proposal(*state.kind, next.proposal, next.instance_schema);
  next.phase = Phase::UserEditing;
  return next;
}

SessionState discard(const SessionState& state) {
  if (!one_of(state.phase, {Phase::Proposed, Phase::UserEditing})) illegal("discard", state.phase);
  SessionState next = state;
  next.proposal.clear();
  next.validation = std::monostate{};
  next.phase = Phase::Discarded;
  return next;
}

ApplyResult apply(const SessionState& state, const ApplyTarget& target) {
  if (!one_of(state.phase, {Phase::Proposed, Phase::UserEditing})) illegal("apply", state.phase);
  const PromptKind kind = *state.kind;
  if (is_query_kind(kind)) throw IllegalTransition("query answers cannot be applied");
  if (!state.valid()) {
    throw BlockedApply("the proposal is not valid; fix it before applying");
  }
  const DocPath path = state.context_path.value_or(DocPath{});
  DataNode result;
  if (is_schema_kind(kind)) {
    const SchemaNode base(target.schema.value_or(DataNode(ObjectMap{})));
    result = merge_subschema(base, path, SchemaNode(parse_json(state.proposal))).doc();
  } else if (kind == PromptKind::MappingGenerate) {
    if (!target.document) throw MissingInputError("document");
    const auto ast = mapping::parse_mapping(state.proposal);
    result = mapping::evaluate_mapping(ast, *target.document, target.eval).value_or(DataNode(nullptr));
  } else {
    DataNode value = parse_json(state.proposal);
    result = target.document && state.context_path ? replace_at(*target.document, path, std::move(value)) : value;
  }
  ApplyResult out{state, std::move(result)};
  out.state.phase = Phase::Applied;
  return out;
}

DataNode SessionState::to_data() const {
  DataNode::Array entries;
  for (const auto& h : history) {
    entries.emplace_back(ObjectMap{{"bundle", h.bundle.to_data()}, {"raw_response", DataNode(h.raw_response)}});
  }
  return DataNode(ObjectMap{
      {"phase", DataNode(phase_name(phase))},
      {"kind", kind ? DataNode(prompt_kind_name(*kind)) : DataNode(nullptr)},
      {"context_path", context_path ? DataNode(context_path->to_pointer()) : DataNode(nullptr)},
      {"instance_schema", instance_schema ? *instance_schema : DataNode(nullptr)},
      {"proposal", DataNode(proposal)},
      {"valid", DataNode(valid())},
      {"validation", validation_to_data(validation)},
      {"history", DataNode(std::move(entries))},
  });
}

SessionState SessionState::from_data(const DataNode& data) {
  SessionState state;
  const std::string& phase = data.get("phase")->as_string();
  bool known = false;
  for (const Phase p : {Phase::Idle, Phase::AwaitingLlm, Phase::Proposed, Phase::UserEditing, Phase::Applied, Phase::Discarded}) {
    if (phase_name(p) == phase) {
      state.phase = p;
      known = true;
    }
  }
  if (!known) throw PreconditionError("unknown session phase " + phase);
  if (const DataNode* k = data.get("kind"); k != nullptr && k->is_string()) state.kind = parse_prompt_kind(k->as_string());
  if (const DataNode* p = data.get("context_path"); p != nullptr && p->is_string()) {
    state.context_path = DocPath::from_pointer(p->as_string());
  }
  if (const DataNode* s = data.get("instance_schema"); s != nullptr && !s->is_null()) state.instance_schema = *s;
  state.proposal = data.get("proposal")->as_string();
  for (const auto& h : data.get("history")->as_array()) {
    state.history.push_back({PromptBundle::from_data(*h.get("bundle")), h.get("raw_response")->as_string()});
  }
  // Reports are recomputed; validation is a pure function of the proposal.
  const DataNode* v = data.get("validation");
  if (state.kind && v != nullptr && !v->is_null()) {
    state.validation = validate_proposal(*state.kind, state.proposal, state.instance_schema);
  }
  return state;
}

}  // namespace schemaforge

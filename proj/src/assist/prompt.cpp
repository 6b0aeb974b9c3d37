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
#include <map>

#include "schemaforge/assist.hpp"
#include "schemaforge/infer.hpp"
#include "schemaforge/json.hpp"

namespace schemaforge {
namespace detail {
const std::map<std::string_view, std::string_view>& embedded_assets();
}  // namespace detail

namespace {

constexpr std::pair<PromptKind, std::string_view> kKindNames[] = {
    {PromptKind::SchemaCreate, "schema_create"}, {PromptKind::SchemaModify, "schema_modify"},
    {PromptKind::SchemaQuery, "schema_query"},   {PromptKind::DataCreate, "data_create"},
    {PromptKind::DataModify, "data_modify"},     {PromptKind::DataQuery, "data_query"},
    {PromptKind::MappingGenerate, "mapping_generate"},
};

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view ltrim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

bool is_language_word(std::string_view s) {
  for (const char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) != 0 || c == '_' || c == '+' || c == '.' || c == '-')) return false;
  }
  return true;
}

template <typename T>
const T& require(const std::optional<T>& value, const char* field) {
  if (!value) throw MissingInputError(field);
  return *value;
}

const std::string& require_text(const std::optional<std::string>& value, const char* field) {
  const std::string& text = require(value, field);
  if (trim(text).empty()) throw MissingInputError(field);
  return text;
}

std::string pretty(const DataNode& doc) { return serialize_json(doc, JsonStyle::Pretty); }

std::string location(const DocPath& path) { return "#" + path.to_pointer(); }

std::string prior_section(const PromptInputs& inputs) {
  if (!inputs.prior_proposal || trim(*inputs.prior_proposal).empty()) return {};
  return render_template(prompt_asset("prior_proposal.txt"), {{"prior_proposal", std::string(trim(*inputs.prior_proposal))}});
}

ChatMessage system(std::string_view asset) { return {Role::System, std::string(trim(prompt_asset(asset)))}; }

ChatMessage user(std::string text) { return {Role::User, std::string(trim(text))}; }

std::string mapping_request(const std::string& document, const DataNode& source_schema, const DataNode& target_schema,
                            const std::string& remarks) {
  return render_template(prompt_asset("mapping_request.txt"), {{"truncated_document", document},
                                                               {"source_schema", pretty(source_schema)},
                                                               {"target_schema", pretty(target_schema)},
                                                               {"remarks", remarks}});
}

TruncationSummary summarize(const TruncationOutcome& outcome) {
  return {outcome.final_n, outcome.iterations, outcome.bytes, outcome.budget_met};
}

const DataNode* deref(const DataNode& root, const DataNode* node) {
  for (int hops = 0; node != nullptr && hops < 64; ++hops) {
    const DataNode* ref = node->get("$ref");
    if (ref == nullptr || !ref->is_string() || ref->as_string().rfind('#', 0) != 0) return node;
    node = find_path(root, DocPath::from_pointer(ref->as_string()));
  }
  return node;
}

}  // namespace

std::string_view prompt_kind_name(PromptKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "schema_create";
}

std::optional<PromptKind> parse_prompt_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool is_schema_kind(PromptKind kind) { return kind == PromptKind::SchemaCreate || kind == PromptKind::SchemaModify; }

bool is_query_kind(PromptKind kind) { return kind == PromptKind::SchemaQuery || kind == PromptKind::DataQuery; }

std::string_view prompt_asset(std::string_view name) {
  const auto& assets = detail::embedded_assets();
  auto it = assets.find(name);
  if (it == assets.end()) throw Error("unknown prompt asset " + std::string(name));
  return it->second;
}

std::string render_template(std::string_view text, const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t open = text.find("{{", pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = text.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    const std::string_view name = text.substr(open + 2, close - open - 2);
    auto it = std::find_if(values.begin(), values.end(), [&](const auto& kv) { return kv.first == name; });
    if (it == values.end()) throw Error("template placeholder {{" + std::string(name) + "}} has no value");
    out.append(text, pos, open - pos);
    out += it->second;
    pos = close + 2;
  }
  out.append(text, pos, std::string_view::npos);
  return out;
}

std::string strip_artifacts(std::string_view response) {
  const std::string_view t = trim(response);
  constexpr std::string_view kFence = "```";
  if (t.size() < 2 * kFence.size() || t.substr(0, 3) != kFence || t.substr(t.size() - 3) != kFence) {
    return std::string(t);
  }
  const std::size_t newline = t.find('\n');
  if (newline == std::string_view::npos) {
    const std::string_view inner = t.substr(3, t.size() - 6);
    if (inner.find(kFence) != std::string_view::npos) return std::string(t);
    return std::string(trim(inner));
  }
  if (!is_language_word(trim(t.substr(3, newline - 3)))) return std::string(t);
  if (newline + 1 > t.size() - 3) return std::string(t);
  const std::string_view body = t.substr(newline + 1, t.size() - 3 - (newline + 1));
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t end = body.find('\n', start);
    if (end == std::string_view::npos) end = body.size();
    if (ltrim(body.substr(start, end - start)).substr(0, 3) == kFence) return std::string(t);
    start = end + 1;
  }
  return std::string(trim(body));
}

DataNode schema_at_instance_path(const DataNode& schema, const DocPath& path) {
  const DataNode* node = deref(schema, &schema);
  for (const auto& segment : path.segments()) {
    if (node == nullptr || !node->is_object()) return DataNode(ObjectMap{});
    const DataNode* next = nullptr;
    if (const auto* index = std::get_if<std::size_t>(&segment); index != nullptr && node->get("items") != nullptr) {
      const DataNode* items = node->get("items");
      next = items->is_array() ? (*index < items->as_array().size() ? &items->as_array()[*index] : nullptr) : items;
    } else {
      const std::string key =
          std::holds_alternative<std::string>(segment) ? std::get<std::string>(segment) : std::to_string(std::get<std::size_t>(segment));
      const DataNode* properties = node->get("properties");
      next = properties != nullptr ? properties->get(key) : nullptr;
      if (next == nullptr) {
        const DataNode* additional = node->get("additionalProperties");
        if (additional != nullptr && additional->is_object()) next = additional;
      }
    }
    node = deref(schema, next);
  }
  if (node == nullptr) return DataNode(ObjectMap{});
  // Keep $defs reachable for local refs inside the selected part.
  if (node != &schema && node->is_object() && schema.get("$defs") != nullptr && node->get("$defs") == nullptr) {
    ObjectMap copy = node->as_object();
    copy.set("$defs", *schema.get("$defs"));
    return DataNode(std::move(copy));
  }
  return *node;
}

PromptBundle build_prompt(PromptKind kind, const PromptInputs& inputs) {
  PromptBundle bundle;
  bundle.kind = kind;
  const DocPath path = inputs.context_path.value_or(DocPath{});
  switch (kind) {
    case PromptKind::SchemaCreate: {
      const std::string& description = require_text(inputs.description, "description");
      bundle.messages.push_back(system("schema_system.txt"));
      bundle.messages.push_back(user(render_template(
          prompt_asset("schema_create.txt"), {{"prior_proposal", prior_section(inputs)}, {"description", description}})));
      break;
    }
    case PromptKind::SchemaModify:
    case PromptKind::SchemaQuery: {
      const DataNode& schema = require(inputs.schema, "schema");
      if (kind == PromptKind::SchemaModify) require(inputs.context_path, "context_path");
      const std::string& description = require_text(inputs.description, "description");
      const SchemaNode selected = select_subschema(SchemaNode(schema), path);
      bundle.context_path = path;
      bundle.messages.push_back(system("schema_system.txt"));
      std::vector<std::pair<std::string, std::string>> values = {
          {"context_path", location(path)}, {"sub_schema", pretty(selected.doc())}, {"description", description}};
      if (kind == PromptKind::SchemaModify) values.emplace_back("prior_proposal", prior_section(inputs));
      bundle.messages.push_back(user(render_template(
          prompt_asset(kind == PromptKind::SchemaModify ? "schema_modify.txt" : "schema_query.txt"), values)));
      break;
    }
    case PromptKind::DataCreate: {
      const std::string& description = require_text(inputs.description, "description");
      const DataNode schema = inputs.schema.value_or(DataNode(ObjectMap{}));
      if (inputs.context_path) bundle.context_path = inputs.context_path;
      bundle.instance_schema = inputs.context_path ? schema_at_instance_path(schema, path) : schema;
      bundle.messages.push_back(system("data_system.txt"));
      bundle.messages.push_back(user(render_template(
          prompt_asset("data_create.txt"),
          {{"prior_proposal", prior_section(inputs)}, {"schema", pretty(*bundle.instance_schema)}, {"description", description}})));
      break;
    }
    case PromptKind::DataModify: {
      const DataNode& document = require(inputs.document, "document");
      const std::string& description = require_text(inputs.description, "description");
      const DataNode schema = inputs.schema.value_or(DataNode(ObjectMap{}));
      bundle.context_path = path;
      bundle.instance_schema = schema_at_instance_path(schema, path);
      bundle.messages.push_back(system("data_system.txt"));
      bundle.messages.push_back(user(render_template(prompt_asset("data_modify.txt"),
                                                     {{"prior_proposal", prior_section(inputs)},
                                                      {"context_path", location(path)},
                                                      {"schema", pretty(*bundle.instance_schema)},
                                                      {"document", serialize_json(resolve_path(document, path))},
                                                      {"description", description}})));
      break;
    }
    case PromptKind::DataQuery: {
      const DataNode& document = require(inputs.document, "document");
      const std::string& description = require_text(inputs.description, "description");
      const TruncationOutcome outcome = truncate_document(document, inputs.truncation);
      bundle.truncation = summarize(outcome);
      bundle.messages.push_back(system("data_system.txt"));
      bundle.messages.push_back(user(render_template(
          prompt_asset("data_query.txt"), {{"truncated_document", serialize_json(outcome.doc)}, {"description", description}})));
      break;
    }
    case PromptKind::MappingGenerate: {
      const DataNode& document = require(inputs.document, "document");
      const DataNode& target = require(inputs.target_schema, "target_schema");
      std::string remarks = inputs.remarks && !trim(*inputs.remarks).empty() ? std::string(trim(*inputs.remarks)) : "none";
      const TruncationOutcome outcome = truncate_document(document, inputs.truncation);
      bundle.truncation = summarize(outcome);
      const DataNode source_schema = infer_schema(document).doc();

      const DataNode example_input = parse_json(prompt_asset("mapping_example_input.json"));
      const DataNode example_target = parse_json(prompt_asset("mapping_example_target_schema.json"));
      bundle.messages.push_back(system("mapping_instructions.txt"));
      bundle.messages.push_back(
          user(mapping_request(serialize_json(example_input), infer_schema(example_input).doc(), example_target, "none")));
      bundle.messages.push_back({Role::Assistant, std::string(trim(prompt_asset("mapping_example.jnt")))});
      bundle.messages.push_back(user(mapping_request(serialize_json(outcome.doc), source_schema, target, remarks)));
      break;
    }
  }
  return bundle;
}

DataNode PromptBundle::to_data() const {
  DataNode::Array items;
  for (const auto& m : messages) {
    items.emplace_back(ObjectMap{{"role", DataNode(role_name(m.role))}, {"content", DataNode(m.content)}});
  }
  ObjectMap out{{"kind", DataNode(prompt_kind_name(kind))}, {"messages", DataNode(std::move(items))}};
  out.set("context_path", context_path ? DataNode(context_path->to_pointer()) : DataNode(nullptr));
  if (truncation) {
    out.set("truncation", DataNode(ObjectMap{{"final_n", DataNode(static_cast<std::int64_t>(truncation->final_n))},
                                             {"iterations", DataNode(static_cast<std::int64_t>(truncation->iterations))},
                                             {"bytes", DataNode(static_cast<std::int64_t>(truncation->bytes))},
                                             {"budget_met", DataNode(truncation->budget_met)}}));
  } else {
    out.set("truncation", DataNode(nullptr));
  }
  out.set("instance_schema", instance_schema ? *instance_schema : DataNode(nullptr));
  return DataNode(std::move(out));
}

PromptBundle PromptBundle::from_data(const DataNode& data) {
  PromptBundle bundle;
  const auto field = [&](const char* key) -> const DataNode& {
    const DataNode* v = data.get(key);
    if (v == nullptr) throw PreconditionError(std::string("prompt bundle lacks ") + key);
    return *v;
  };
  auto kind = parse_prompt_kind(field("kind").as_string());
  if (!kind) throw PreconditionError("unknown prompt kind " + field("kind").as_string());
  bundle.kind = *kind;
  for (const auto& m : field("messages").as_array()) {
    auto role = parse_role(m.get("role")->as_string());
    if (!role) throw PreconditionError("unknown message role");
    bundle.messages.push_back({*role, m.get("content")->as_string()});
  }
  if (const DataNode* p = data.get("context_path"); p != nullptr && p->is_string()) {
    bundle.context_path = DocPath::from_pointer(p->as_string());
  }
  if (const DataNode* t = data.get("truncation"); t != nullptr && t->is_object()) {
    const auto size = [&](const char* key) {
      return static_cast<std::size_t>(t->get(key)->as_number().to_int64().value_or(0));
    };
    bundle.truncation = TruncationSummary{size("final_n"), size("iterations"), size("bytes"), t->get("budget_met")->as_bool()};
  }
  if (const DataNode* s = data.get("instance_schema"); s != nullptr && !s->is_null()) bundle.instance_schema = *s;
  return bundle;
}

}  // namespace schemaforge

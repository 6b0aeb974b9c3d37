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
#include <deque>
#include <map>
#include <set>

#include "schemaforge/schema.hpp"

namespace schemaforge {
namespace {

constexpr std::string_view kDefsPrefix = "#/$defs/";

// Definition name referenced by "#/$defs/<name>[/...]", unescaped.
std::optional<std::string> def_name(std::string_view ref) {
  if (ref.substr(0, kDefsPrefix.size()) != kDefsPrefix) return std::nullopt;
  const DocPath path = DocPath::from_pointer(ref);
  if (path.size() < 2) return std::nullopt;
  const auto& segment = path.segments()[1];
  if (const auto* key = std::get_if<std::string>(&segment)) return *key;
  return std::to_string(std::get<std::size_t>(segment));
}

void collect_refs(const DataNode& node, std::vector<std::string>& out) {
  if (node.is_array()) {
    for (const auto& item : node.as_array()) collect_refs(item, out);
  } else if (node.is_object()) {
    for (const auto& [key, value] : node.as_object()) {
      if (key == "$ref" && value.is_string()) {
        if (auto name = def_name(value.as_string())) out.push_back(*name);
      } else {
        collect_refs(value, out);
      }
    }
  }
}

std::string escape_token(std::string_view token) {
  std::string out;
  for (const char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

DataNode rewrite_refs(const DataNode& node, const std::map<std::string, std::string>& renames) {
  if (renames.empty()) return node;
  if (node.is_array()) {
    DataNode::Array items;
    items.reserve(node.as_array().size());
    for (const auto& item : node.as_array()) items.push_back(rewrite_refs(item, renames));
    return DataNode(std::move(items));
  }
  if (!node.is_object()) return node;
  ObjectMap members;
  for (const auto& [key, value] : node.as_object()) {
    if (key == "$ref" && value.is_string()) {
      const std::string& ref = value.as_string();
      if (auto name = def_name(ref); name && renames.count(*name) != 0) {
        const std::string old_prefix = std::string(kDefsPrefix) + escape_token(*name);
        members.insert(key, DataNode(std::string(kDefsPrefix) + escape_token(renames.at(*name)) +
                                     ref.substr(old_prefix.size())));
        continue;
      }
    }
    members.insert(key, rewrite_refs(value, renames));
  }
  return DataNode(std::move(members));
}

}  // namespace

SchemaNode select_subschema(const SchemaNode& schema, const DocPath& path) {
  if (path.empty()) return schema;
  const DataNode& selected = resolve_path(schema.doc(), path);
  if (!selected.is_object()) return SchemaNode(selected);

  const DataNode* root_defs = schema.doc().get("$defs");
  std::set<std::string> closure;
  std::deque<std::string> pending;
  std::vector<std::string> found;
  collect_refs(selected, found);
  for (auto& name : found) pending.push_back(std::move(name));
  while (!pending.empty()) {
    std::string name = std::move(pending.front());
    pending.pop_front();
    if (closure.count(name) != 0) continue;
    const DataNode* def = root_defs != nullptr ? root_defs->get(name) : nullptr;
    if (def == nullptr) throw SchemaError("dangling reference to $defs/" + name);
    closure.insert(name);
    std::vector<std::string> nested;
    collect_refs(*def, nested);
    for (auto& n : nested) pending.push_back(std::move(n));
  }
  if (closure.empty()) return SchemaNode(selected);

  // Keep the root's definition order so the output is deterministic.
  ObjectMap defs;
  if (const DataNode* own = selected.get("$defs"); own != nullptr && own->is_object()) defs = own->as_object();
  for (const auto& [name, def] : root_defs->as_object()) {
    if (closure.count(name) != 0 && !defs.contains(name)) defs.insert(name, def);
  }
  ObjectMap members = selected.as_object();
  members.set("$defs", DataNode(std::move(defs)));
  return SchemaNode(DataNode(std::move(members)));
}

SchemaNode merge_subschema(const SchemaNode& schema, const DocPath& path, const SchemaNode& replacement) {
  // Dangling references in the replacement are allowed here: they may point
  // at root definitions. The merged result is checked below.
  {
    ValidationReport pre = validate_schema(replacement.doc());
    ValidationReport structural;
    for (auto& v : pre.violations) {
      if (!(v.keyword == "$ref" && v.message.rfind("dangling", 0) == 0)) structural.add(std::move(v));
    }
    if (!structural.valid) throw SchemaRejected(std::move(structural));
  }

  DataNode merged;
  if (path.empty()) {
    merged = replacement.doc();
  } else {
    resolve_path(schema.doc(), path);

    DataNode body = replacement.doc();
    ObjectMap incoming;
    if (body.is_object()) {
      if (const DataNode* defs = body.get("$defs"); defs != nullptr && defs->is_object()) incoming = defs->as_object();
      ObjectMap stripped = body.as_object();
      stripped.erase("$defs");
      body = DataNode(std::move(stripped));
    }

    DataNode replaced = replace_at(schema.doc(), path, body);
    ObjectMap root_defs;
    if (const DataNode* defs = replaced.get("$defs"); defs != nullptr && defs->is_object()) root_defs = defs->as_object();

    std::map<std::string, std::string> renames;
    std::vector<std::pair<std::string, DataNode>> additions;
    for (const auto& [name, def] : incoming) {
      const DataNode* existing = root_defs.find(name);
      if (existing == nullptr) {
        additions.emplace_back(name, def);
        continue;
      }
      if (*existing == def) continue;
      for (int suffix = 2;; ++suffix) {
        std::string candidate = name + std::to_string(suffix);
        if (!root_defs.contains(candidate) && !incoming.contains(candidate) && renames.count(candidate) == 0) {
          renames.emplace(name, candidate);
          additions.emplace_back(candidate, def);
          break;
        }
      }
    }

    if (!renames.empty()) {
      replaced = replace_at(schema.doc(), path, rewrite_refs(body, renames));
      if (const DataNode* defs = replaced.get("$defs"); defs != nullptr && defs->is_object()) {
        root_defs = defs->as_object();
      }
    }
    if (!additions.empty()) {
      for (auto& [name, def] : additions) root_defs.insert(name, rewrite_refs(def, renames));
      if (!replaced.is_object()) throw SchemaRejected(ValidationReport{false, {{path, path, "$defs", "root schema is not an object"}}});
      ObjectMap root = replaced.as_object();
      root.set("$defs", DataNode(std::move(root_defs)));
      replaced = DataNode(std::move(root));
    }
    merged = std::move(replaced);
  }

  ValidationReport report = validate_schema(merged);
  if (!report.valid) throw SchemaRejected(std::move(report));
  return SchemaNode(std::move(merged));
}

}  // namespace schemaforge

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
#include <array>

#include "schemaforge/json.hpp"
#include "schemaforge/mapping/ast.hpp"

namespace schemaforge::mapping {
namespace {

constexpr std::array<std::string_view, 7> kReserved = {"and", "or", "in", "true", "false", "null", "function"};

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  const auto first = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(first) != 0 || first == '_' || first >= 0x80)) return false;
  for (const char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) != 0 || u == '_' || u >= 0x80)) return false;
  }
  if (name.substr(0, 2) == "\xCE\xBB") return false;
  for (const auto word : kReserved) {
    if (name == word) return false;
  }
  return true;
}

std::string quote(const std::string& text) {
  std::string out;
  append_json_string(out, text);
  return out;
}

std::string join(const std::vector<Node>& nodes, std::size_t from, std::string_view sep) {
  std::string out;
  for (std::size_t i = from; i < nodes.size(); ++i) {
    if (i > from) out += sep;
    out += to_source(nodes[i]);
  }
  return out;
}

std::string pairs(const std::vector<Node>& nodes, std::size_t from) {
  std::string out = "{";
  for (std::size_t i = from; i + 1 < nodes.size(); i += 2) {
    if (i > from) out += ", ";
    out += to_source(nodes[i]) + ": " + to_source(nodes[i + 1]);
  }
  return out + "}";
}

std::string bare(const Node& node) {
  switch (node.kind) {
    case NodeKind::Path:
      return join(node.children, 0, ".");
    case NodeKind::Name:
      return is_identifier(node.text) ? node.text : "`" + node.text + "`";
    case NodeKind::Wildcard:
      return "*";
    case NodeKind::Context:
      return "$";
    case NodeKind::Root:
      return "$$";
    case NodeKind::Variable:
      return "$" + node.text;
    case NodeKind::String:
      return quote(node.text);
    case NodeKind::Number:
      return node.number.to_string();
    case NodeKind::Boolean:
      return node.boolean ? "true" : "false";
    case NodeKind::Null:
      return "null";
    case NodeKind::Object:
      return pairs(node.children, 0);
    case NodeKind::Array:
      return "[" + join(node.children, 0, ", ") + "]";
    case NodeKind::Binary:
      return to_source(node.children[0]) + " " + node.text + " " + to_source(node.children[1]);
    case NodeKind::Negate:
      return "-" + to_source(node.children[0]);
    case NodeKind::Condition: {
      std::string out = to_source(node.children[0]) + " ? " + to_source(node.children[1]);
      if (node.children.size() > 2) out += " : " + to_source(node.children[2]);
      return out;
    }
    case NodeKind::Call:
      return "$" + node.text + "(" + join(node.children, 0, ", ") + ")";
    case NodeKind::Lambda: {
      std::string out = "function(";
      for (std::size_t i = 0; i < node.params.size(); ++i) {
        if (i > 0) out += ", ";
        out += "$" + node.params[i];
      }
      return out + ") {" + to_source(node.children[0]) + "}";
    }
    case NodeKind::Block:
      return "(" + join(node.children, 0, "; ") + ")";
    case NodeKind::Bind:
      return "$" + node.text + " := " + to_source(node.children[0]);
    case NodeKind::Group:
      return to_source(node.children[0]) + pairs(node.children, 1);
  }
  return {};
}

}  // namespace

std::string_view node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Path: return "path";
    case NodeKind::Name: return "name";
    case NodeKind::Wildcard: return "wildcard";
    case NodeKind::Context: return "context";
    case NodeKind::Root: return "root";
    case NodeKind::Variable: return "variable";
    case NodeKind::String: return "string";
    case NodeKind::Number: return "number";
    case NodeKind::Boolean: return "boolean";
    case NodeKind::Null: return "null";
    case NodeKind::Object: return "object";
    case NodeKind::Array: return "array";
    case NodeKind::Binary: return "binary";
    case NodeKind::Negate: return "negate";
    case NodeKind::Condition: return "condition";
    case NodeKind::Call: return "call";
    case NodeKind::Lambda: return "lambda";
    case NodeKind::Block: return "block";
    case NodeKind::Bind: return "bind";
    case NodeKind::Group: return "group";
  }
  return "unknown";
}

std::string to_source(const Node& node) {
  std::string out = bare(node);
  for (const auto& stage : node.stages) out += "[" + to_source(stage) + "]";
  if (node.keep_array && node.kind != NodeKind::Path) out += "[]";
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.text != b.text || !(a.number == b.number) || a.boolean != b.boolean ||
      a.params != b.params || a.keep_array != b.keep_array || a.cons_array != b.cons_array ||
      a.children.size() != b.children.size() || a.stages.size() != b.stages.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  }
  for (std::size_t i = 0; i < a.stages.size(); ++i) {
    if (!structurally_equal(a.stages[i], b.stages[i])) return false;
  }
  return true;
}

}  // namespace schemaforge::mapping

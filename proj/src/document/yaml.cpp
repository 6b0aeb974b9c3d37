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
#include <yaml-cpp/yaml.h>

#include <regex>

#include "schemaforge/errors.hpp"
#include "schemaforge/formats.hpp"

namespace schemaforge {
namespace {

constexpr std::string_view kTagPrefix = "tag:yaml.org,2002:";

const std::regex& int_pattern() {
  static const std::regex pattern(R"([-+]?[0-9]+)");
  return pattern;
}
const std::regex& float_pattern() {
  static const std::regex pattern(R"([-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?)");
  return pattern;
}

bool is_null_word(std::string_view s) { return s.empty() || s == "~" || s == "null" || s == "Null" || s == "NULL"; }

std::optional<bool> bool_word(std::string_view s) {
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  return std::nullopt;
}

std::optional<Decimal> parse_radix(std::string_view digits, int radix) {
  if (digits.empty()) return std::nullopt;
  Decimal value;
  for (const char c : digits) {
    int d = -1;
    if (c >= '0' && c <= '9') d = c - '0';
    if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    if (d < 0 || d >= radix) return std::nullopt;
    value = value * Decimal(radix) + Decimal(d);
  }
  return value;
}

std::optional<Decimal> parse_number_word(const std::string& s) {
  if (std::regex_match(s, int_pattern())) return Decimal::parse(s, true);
  if (s.size() > 2 && s[0] == '0' && s[1] == 'o') return parse_radix(std::string_view(s).substr(2), 8);
  if (s.size() > 2 && s[0] == '0' && s[1] == 'x') return parse_radix(std::string_view(s).substr(2), 16);
  if (std::regex_match(s, float_pattern())) {
    std::string text = s;
    // "1." and "1.e3" are floats in the core schema.
    const auto dot = text.find('.');
    if (dot != std::string::npos && (dot + 1 == text.size() || text[dot + 1] == 'e' || text[dot + 1] == 'E')) {
      text.insert(dot + 1, "0");
    }
    return Decimal::parse(text, true);
  }
  return std::nullopt;
}

bool is_non_finite_word(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  return s == ".inf" || s == ".Inf" || s == ".INF" || s == ".nan" || s == ".NaN" || s == ".NAN";
}

// Resolution of an untagged plain scalar under the core schema.
DataNode resolve_plain(const std::string& s) {
  if (is_null_word(s)) return DataNode(nullptr);
  if (auto b = bool_word(s)) return DataNode(*b);
  if (auto number = parse_number_word(s)) return DataNode(*number);
  if (is_non_finite_word(s)) throw UnsupportedError("non-finite number '" + s + "' cannot be represented");
  return DataNode(s);
}

DataNode resolve_tagged(const std::string& tag, const std::string& s, const YAML::Mark& mark) {
  const std::string_view name = std::string_view(tag).substr(kTagPrefix.size());
  const auto bad = [&](const char* what) {
    return ParseError(std::string("invalid ") + what + " '" + s + "'", static_cast<std::size_t>(mark.line) + 1,
                      static_cast<std::size_t>(mark.column) + 1);
  };
  if (name == "str") return DataNode(s);
  if (name == "null") {
    if (!is_null_word(s)) throw bad("null");
    return DataNode(nullptr);
  }
  if (name == "bool") {
    auto b = bool_word(s);
    if (!b) throw bad("bool");
    return DataNode(*b);
  }
  if (name == "int" || name == "float") {
    if (is_non_finite_word(s)) throw UnsupportedError("non-finite number '" + s + "' cannot be represented");
    auto number = parse_number_word(s);
    if (!number) throw bad("number");
    return DataNode(*number);
  }
  throw UnsupportedError("unsupported YAML tag '" + tag + "'");
}

DataNode convert(const YAML::Node& node, int depth) {
  if (depth > 512) throw UnsupportedError("YAML nesting too deep");
  switch (node.Type()) {
    case YAML::NodeType::Undefined:
    case YAML::NodeType::Null:
      return DataNode(nullptr);
    case YAML::NodeType::Scalar: {
      const std::string& tag = node.Tag();
      const std::string& text = node.Scalar();
      if (tag == "!") return DataNode(text);  // quoted
      if (tag.empty() || tag == "?") return resolve_plain(text);
      if (tag.rfind(kTagPrefix, 0) == 0) return resolve_tagged(tag, text, node.Mark());
      throw UnsupportedError("unsupported YAML tag '" + tag + "'");
    }
    case YAML::NodeType::Sequence: {
      DataNode::Array items;
      items.reserve(node.size());
      for (const auto& item : node) items.push_back(convert(item, depth + 1));
      return DataNode(std::move(items));
    }
    case YAML::NodeType::Map: {
      ObjectMap members;
      for (const auto& entry : node) {
        const YAML::Node& key = entry.first;
        if (!key.IsScalar()) {
          throw UnsupportedError("complex mapping keys are not supported (line " +
                                 std::to_string(key.Mark().line + 1) + ")");
        }
        if (!members.insert(key.Scalar(), convert(entry.second, depth + 1))) {
          throw ParseError("duplicate key '" + key.Scalar() + "'", static_cast<std::size_t>(key.Mark().line) + 1,
                           static_cast<std::size_t>(key.Mark().column) + 1);
        }
      }
      return DataNode(std::move(members));
    }
  }
  return DataNode(nullptr);
}

bool needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  static const char* const kYaml11Words[] = {"yes", "Yes", "YES", "no", "No", "NO", "on", "On", "ON",
                                             "off", "Off", "OFF", "y", "Y", "n", "N"};
  for (const char* word : kYaml11Words) {
    if (s == word) return true;
  }
  try {
    return !resolve_plain(s).is_string();
  } catch (const UnsupportedError&) {
    return true;
  }
}

void emit(YAML::Emitter& out, const DataNode& node) {
  switch (node.kind()) {
    case DataNode::Kind::Null:
      out << YAML::Null;
      return;
    case DataNode::Kind::Boolean:
      out << YAML::TrueFalseBool << node.as_bool();
      return;
    case DataNode::Kind::Number:
      out << node.as_number().to_string();
      return;
    case DataNode::Kind::String:
      if (needs_quotes(node.as_string())) {
        out << YAML::DoubleQuoted << node.as_string();
      } else {
        out << node.as_string();
      }
      return;
    case DataNode::Kind::Array:
      if (node.as_array().empty()) out << YAML::Flow;
      out << YAML::BeginSeq;
      for (const auto& item : node.as_array()) emit(out, item);
      out << YAML::EndSeq;
      return;
    case DataNode::Kind::Object:
      if (node.as_object().empty()) out << YAML::Flow;
      out << YAML::BeginMap;
      for (const auto& [key, value] : node.as_object()) {
        out << YAML::Key;
        if (needs_quotes(key)) {
          out << YAML::DoubleQuoted << key;
        } else {
          out << key;
        }
        out << YAML::Value;
        emit(out, value);
      }
      out << YAML::EndMap;
      return;
  }
}

}  // namespace

DataNode from_yaml(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line) + 1, static_cast<std::size_t>(e.mark.column) + 1,
                     static_cast<std::size_t>(e.mark.pos));
  }
  return convert(root, 0);
}

std::string to_yaml(const DataNode& doc) {
  YAML::Emitter out;
  out.SetIndent(2);
  emit(out, doc);
  std::string text = out.c_str();
  text += '\n';
  return text;
}

}  // namespace schemaforge

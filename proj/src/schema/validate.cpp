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
#include <map>
#include <memory>
#include <regex>
#include <set>

#include "schemaforge/json.hpp"
#include "schemaforge/schema.hpp"

namespace schemaforge {
namespace {

constexpr std::array<std::string_view, 7> kTypeNames = {"null", "boolean", "integer", "number",
                                                        "string", "array", "object"};
constexpr std::string_view kDefsPrefix = "#/$defs/";
constexpr int kMaxRefDepth = 256;

bool is_type_name(std::string_view name) {
  for (const auto type : kTypeNames) {
    if (type == name) return true;
  }
  return false;
}

std::size_t code_points(std::string_view s) {
  std::size_t count = 0;
  for (const char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
  }
  return count;
}

bool matches_type(const DataNode& value, std::string_view type) {
  switch (value.kind()) {
    case DataNode::Kind::Null: return type == "null";
    case DataNode::Kind::Boolean: return type == "boolean";
    case DataNode::Kind::Number: return type == "number" || (type == "integer" && value.is_integer());
    case DataNode::Kind::String: return type == "string";
    case DataNode::Kind::Array: return type == "array";
    case DataNode::Kind::Object: return type == "object";
  }
  return false;
}

std::string instance_type(const DataNode& value) {
  if (value.is_integer()) return "integer";
  return std::string(kind_name(value.kind()));
}

std::string describe_type(const DataNode& type) {
  if (type.is_string()) return type.as_string();
  std::string out;
  if (type.is_array()) {
    for (const auto& item : type.as_array()) {
      if (!out.empty()) out += " or ";
      out += item.is_string() ? item.as_string() : serialize_json(item);
    }
  }
  return out;
}

class RegexCache {
 public:
  const std::regex& get(const std::string& pattern) {
    auto it = cache_.find(pattern);
    if (it == cache_.end()) {
      it = cache_.emplace(pattern, std::regex(pattern, std::regex::ECMAScript)).first;
    }
    return it->second;
  }

 private:
  std::map<std::string, std::regex> cache_;
};

class InstanceValidator {
 public:
  InstanceValidator(const DataNode& root, ValidationReport& report) : root_(root), report_(report) {}

  // Returns true when `value` is valid; violations go to `sink` when non-null.
  bool validate(const DataNode& value, const DataNode& schema, const DocPath& at, const DocPath& schema_path,
                ValidationReport* sink, int ref_depth) {
    if (schema.is_bool()) {
      if (schema.as_bool()) return true;
      report(sink, at, schema_path, "false", "no value is allowed here");
      return false;
    }
    if (!schema.is_object()) return true;
    bool ok = true;
    const ObjectMap& keywords = schema.as_object();

    if (const DataNode* ref = keywords.find("$ref"); ref != nullptr && ref->is_string()) {
      if (ref_depth > kMaxRefDepth) throw SchemaError("reference cycle while resolving " + ref->as_string());
      const DataNode& target = resolve_ref(ref->as_string());
      ok &= validate(value, target, at, DocPath::from_pointer(ref->as_string()), sink, ref_depth + 1);
    }

    if (const DataNode* type = keywords.find("type")) {
      bool matched = false;
      if (type->is_string()) {
        matched = matches_type(value, type->as_string());
      } else if (type->is_array()) {
        for (const auto& t : type->as_array()) matched = matched || (t.is_string() && matches_type(value, t.as_string()));
      } else {
        matched = true;
      }
      if (!matched) {
        ok = false;
        report(sink, at, schema_path.child("type"), "type",
               "expected " + describe_type(*type) + ", got " + instance_type(value));
      }
    }

    if (const DataNode* options = keywords.find("enum"); options != nullptr && options->is_array()) {
      bool found = false;
      for (const auto& option : options->as_array()) found = found || option == value;
      if (!found) {
        ok = false;
        report(sink, at, schema_path.child("enum"), "enum", "value is not one of " + serialize_json(*options));
      }
    }
    if (const DataNode* constant = keywords.find("const"); constant != nullptr && !(*constant == value)) {
      ok = false;
      report(sink, at, schema_path.child("const"), "const", "value must equal " + serialize_json(*constant));
    }

    if (value.is_number()) ok &= check_bounds(value.as_number(), keywords, at, schema_path, sink);
    if (value.is_string()) ok &= check_string(value.as_string(), keywords, at, schema_path, sink);
    if (value.is_object()) ok &= check_object(value.as_object(), keywords, at, schema_path, sink, ref_depth);
    if (value.is_array()) ok &= check_array(value.as_array(), keywords, at, schema_path, sink, ref_depth);

    if (const DataNode* all = keywords.find("allOf"); all != nullptr && all->is_array()) {
      for (std::size_t i = 0; i < all->as_array().size(); ++i) {
        ok &= validate(value, all->as_array()[i], at, schema_path.child("allOf").child(i), sink, ref_depth);
      }
    }
    if (const DataNode* any = keywords.find("anyOf"); any != nullptr && any->is_array()) {
      bool matched = false;
      for (std::size_t i = 0; i < any->as_array().size() && !matched; ++i) {
        matched = validate(value, any->as_array()[i], at, schema_path.child("anyOf").child(i), nullptr, ref_depth);
      }
      if (!matched) {
        ok = false;
        report(sink, at, schema_path.child("anyOf"), "anyOf", "value does not match any of the alternatives");
      }
    }
    if (const DataNode* one = keywords.find("oneOf"); one != nullptr && one->is_array()) {
      std::size_t matches = 0;
      for (std::size_t i = 0; i < one->as_array().size(); ++i) {
        if (validate(value, one->as_array()[i], at, schema_path.child("oneOf").child(i), nullptr, ref_depth)) {
          ++matches;
        }
      }
      if (matches != 1) {
        ok = false;
        report(sink, at, schema_path.child("oneOf"), "oneOf",
               "value must match exactly one alternative, matched " + std::to_string(matches));
      }
    }
    return ok;
  }

 private:
  void report(ValidationReport* sink, const DocPath& at, const DocPath& schema_path, std::string keyword,
              std::string message) {
    if (sink != nullptr) sink->add({at, schema_path, std::move(keyword), std::move(message)});
  }

  const DataNode& resolve_ref(const std::string& ref) {
    if (ref.empty() || ref[0] != '#') throw SchemaError("unsupported remote reference " + ref);
    const DataNode* target = find_path(root_, DocPath::from_pointer(ref));
    if (target == nullptr) throw SchemaError("unresolvable reference " + ref);
    return *target;
  }

  bool check_bounds(const Decimal& number, const ObjectMap& keywords, const DocPath& at, const DocPath& schema_path,
                    ValidationReport* sink) {
    bool ok = true;
    if (const DataNode* min = keywords.find("minimum"); min != nullptr && min->is_number() && number < min->as_number()) {
      ok = false;
      report(sink, at, schema_path.child("minimum"), "minimum", "value is below the minimum " + min->as_number().to_string());
    }
    if (const DataNode* max = keywords.find("maximum"); max != nullptr && max->is_number() && number > max->as_number()) {
      ok = false;
      report(sink, at, schema_path.child("maximum"), "maximum", "value is above the maximum " + max->as_number().to_string());
    }
    return ok;
  }

  bool check_string(const std::string& text, const ObjectMap& keywords, const DocPath& at, const DocPath& schema_path,
                    ValidationReport* sink) {
    bool ok = true;
    const std::size_t length = code_points(text);
    if (const DataNode* min = keywords.find("minLength"); min != nullptr && min->is_number() &&
                                                         Decimal(static_cast<std::int64_t>(length)) < min->as_number()) {
      ok = false;
      report(sink, at, schema_path.child("minLength"), "minLength", "string is shorter than " + min->as_number().to_string());
    }
    if (const DataNode* max = keywords.find("maxLength"); max != nullptr && max->is_number() &&
                                                         Decimal(static_cast<std::int64_t>(length)) > max->as_number()) {
      ok = false;
      report(sink, at, schema_path.child("maxLength"), "maxLength", "string is longer than " + max->as_number().to_string());
    }
    if (const DataNode* pattern = keywords.find("pattern"); pattern != nullptr && pattern->is_string()) {
      if (!std::regex_search(text, regexes_.get(pattern->as_string()))) {
        ok = false;
        report(sink, at, schema_path.child("pattern"), "pattern", "string does not match " + pattern->as_string());
      }
    }
    return ok;
  }

  bool check_object(const ObjectMap& members, const ObjectMap& keywords, const DocPath& at, const DocPath& schema_path,
                    ValidationReport* sink, int ref_depth) {
    bool ok = true;
    if (const DataNode* required = keywords.find("required"); required != nullptr && required->is_array()) {
      for (const auto& name : required->as_array()) {
        if (name.is_string() && !members.contains(name.as_string())) {
          ok = false;
          report(sink, at, schema_path.child("required"), "required",
                 "missing required property \"" + name.as_string() + "\"");
        }
      }
    }
    const DataNode* properties = keywords.find("properties");
    const DataNode* patterns = keywords.find("patternProperties");
    const DataNode* additional = keywords.find("additionalProperties");
    for (const auto& [key, value] : members) {
      bool covered = false;
      if (properties != nullptr && properties->is_object()) {
        if (const DataNode* sub = properties->as_object().find(key)) {
          covered = true;
          ok &= validate(value, *sub, at.child(key), schema_path.child("properties").child(key), sink, ref_depth);
        }
      }
      if (patterns != nullptr && patterns->is_object()) {
        for (const auto& [pattern, sub] : patterns->as_object()) {
          if (std::regex_search(key, regexes_.get(pattern))) {
            covered = true;
            ok &= validate(value, sub, at.child(key), schema_path.child("patternProperties").child(pattern), sink,
                           ref_depth);
          }
        }
      }
      if (!covered && additional != nullptr) {
        ok &= validate(value, *additional, at.child(key), schema_path.child("additionalProperties"), sink, ref_depth);
      }
    }
    return ok;
  }

  bool check_array(const DataNode::Array& items, const ObjectMap& keywords, const DocPath& at,
                   const DocPath& schema_path, ValidationReport* sink, int ref_depth) {
    bool ok = true;
    const DataNode* item_schema = keywords.find("items");
    if (item_schema == nullptr) return ok;
    if (item_schema->is_array()) {
      const auto& positional = item_schema->as_array();
      for (std::size_t i = 0; i < items.size() && i < positional.size(); ++i) {
        ok &= validate(items[i], positional[i], at.child(i), schema_path.child("items").child(i), sink, ref_depth);
      }
      return ok;
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      ok &= validate(items[i], *item_schema, at.child(i), schema_path.child("items"), sink, ref_depth);
    }
    return ok;
  }

  const DataNode& root_;
  ValidationReport& report_;
  RegexCache regexes_;
};

class SchemaChecker {
 public:
  explicit SchemaChecker(const DataNode& root) : root_(root) {}

  void check(const DataNode& schema, const DocPath& at) {
    if (schema.is_bool()) return;
    if (!schema.is_object()) {
      add(at, "schema", "a schema must be an object or a boolean");
      return;
    }
    for (const auto& [keyword, value] : schema.as_object()) check_keyword(keyword, value, at);
  }

  ValidationReport report;

 private:
  void add(const DocPath& at, std::string keyword, std::string message) {
    report.add({at, at, std::move(keyword), std::move(message)});
  }

  void check_schema_map(const DataNode& value, const DocPath& at, const std::string& keyword, bool keys_are_patterns) {
    if (!value.is_object()) {
      add(at, keyword, keyword + " must be an object of schemas");
      return;
    }
    for (const auto& [key, sub] : value.as_object()) {
      if (keys_are_patterns) {
        if (auto problem = check_pattern(key); !problem.empty()) add(at.child(key), keyword, problem);
      }
      check(sub, at.child(key));
    }
  }

  void check_schema_list(const DataNode& value, const DocPath& at, const std::string& keyword) {
    if (!value.is_array() || value.as_array().empty()) {
      add(at, keyword, keyword + " must be a non-empty array of schemas");
      return;
    }
    for (std::size_t i = 0; i < value.as_array().size(); ++i) check(value.as_array()[i], at.child(i));
  }

  void check_ref(const DataNode& value, const DocPath& at) {
    if (!value.is_string()) {
      add(at, "$ref", "$ref must be a string");
      return;
    }
    const std::string& ref = value.as_string();
    if (ref.empty() || ref[0] != '#') {
      add(at, "$ref", "remote reference \"" + ref + "\" is not supported");
      return;
    }
    if (ref.compare(0, kDefsPrefix.size(), kDefsPrefix) != 0 || ref.size() == kDefsPrefix.size()) {
      add(at, "$ref", "reference \"" + ref + "\" must point into #/$defs/");
      return;
    }
    if (find_path(root_, DocPath::from_pointer(ref)) == nullptr) {
      add(at, "$ref", "dangling reference \"" + ref + "\"");
    }
  }

  void check_non_negative_integer(const DataNode& value, const DocPath& at, const std::string& keyword) {
    if (!value.is_integer() || value.as_number().is_negative()) add(at, keyword, keyword + " must be a non-negative integer");
  }

  void check_keyword(const std::string& keyword, const DataNode& value, const DocPath& schema_at) {
    const DocPath at = schema_at.child(keyword);
    if (keyword == "type") {
      if (value.is_string()) {
        if (!is_type_name(value.as_string())) add(at, keyword, "unknown type name \"" + value.as_string() + "\"");
      } else if (value.is_array() && !value.as_array().empty()) {
        std::set<std::string> seen;
        for (const auto& item : value.as_array()) {
          if (!item.is_string() || !is_type_name(item.as_string())) {
            add(at, keyword, "unknown type name " + serialize_json(item));
          } else if (!seen.insert(item.as_string()).second) {
            add(at, keyword, "duplicate type name \"" + item.as_string() + "\"");
          }
        }
      } else {
        add(at, keyword, "type must be a type name or a non-empty array of type names");
      }
    } else if (keyword == "properties" || keyword == "$defs") {
      check_schema_map(value, at, keyword, false);
    } else if (keyword == "patternProperties") {
      check_schema_map(value, at, keyword, true);
    } else if (keyword == "additionalProperties" || keyword == "items") {
      check(value, at);
    } else if (keyword == "required") {
      if (!value.is_array()) {
        add(at, keyword, "required must be an array of strings");
        return;
      }
      std::set<std::string> seen;
      for (const auto& item : value.as_array()) {
        if (!item.is_string()) {
          add(at, keyword, "required entries must be strings");
        } else if (!seen.insert(item.as_string()).second) {
          add(at, keyword, "duplicate required entry \"" + item.as_string() + "\"");
        }
      }
    } else if (keyword == "enum") {
      if (!value.is_array()) add(at, keyword, "enum must be an array");
    } else if (keyword == "anyOf" || keyword == "oneOf" || keyword == "allOf") {
      check_schema_list(value, at, keyword);
    } else if (keyword == "$ref") {
      check_ref(value, at);
    } else if (keyword == "minimum" || keyword == "maximum") {
      if (!value.is_number()) add(at, keyword, keyword + " must be a number");
    } else if (keyword == "minLength" || keyword == "maxLength") {
      check_non_negative_integer(value, at, keyword);
    } else if (keyword == "pattern") {
      if (!value.is_string()) {
        add(at, keyword, "pattern must be a string");
      } else if (auto problem = check_pattern(value.as_string()); !problem.empty()) {
        add(at, keyword, problem);
      }
    } else if (keyword == "title" || keyword == "description" || keyword == "format" || keyword == "$schema") {
      if (!value.is_string()) add(at, keyword, keyword + " must be a string");
    }
  }

  const DataNode& root_;
};

}  // namespace

SchemaNode with_dialect(const SchemaNode& schema) {
  if (!schema.doc().is_object()) return schema;
  ObjectMap members;
  members.insert("$schema", DataNode(std::string(kSchemaDialect)));
  for (const auto& [key, value] : schema.doc().as_object()) {
    if (key != "$schema") members.insert(key, value);
  }
  return SchemaNode(DataNode(std::move(members)));
}

DataNode ValidationReport::to_data() const {
  DataNode::Array items;
  for (const auto& v : violations) {
    items.emplace_back(ObjectMap{{"instancePath", DataNode(v.instance_path.to_pointer())},
                                 {"schemaPath", DataNode(v.schema_path.to_pointer())},
                                 {"keyword", DataNode(v.keyword)},
                                 {"message", DataNode(v.message)}});
  }
  return DataNode(ObjectMap{{"valid", DataNode(valid)}, {"violations", DataNode(std::move(items))}});
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& v : violations) {
    out += (v.instance_path.empty() ? std::string("/") : v.instance_path.to_pointer()) + ": " + v.message + " [" +
           v.keyword + "]\n";
  }
  return out;
}

SchemaRejected::SchemaRejected(ValidationReport report)
    : Error("schema rejected:\n" + report.to_text()), report_(std::move(report)) {}

std::string check_pattern(std::string_view pattern) {
  for (std::size_t i = 0; i + 1 < pattern.size(); ++i) {
    if (pattern[i] == '\\') {
      const char next = pattern[i + 1];
      if ((next >= '1' && next <= '9') || next == 'k') return "backreferences are not supported in patterns";
      ++i;
      continue;
    }
    if (pattern.substr(i, 3) == "(?<") return "lookbehind and named groups are not supported in patterns";
  }
  try {
    std::regex compiled{std::string(pattern), std::regex::ECMAScript};
  } catch (const std::regex_error& e) {
    return std::string("invalid regular expression: ") + e.what();
  }
  return {};
}

ValidationReport validate_instance(const DataNode& doc, const SchemaNode& schema) {
  ValidationReport report;
  InstanceValidator validator(schema.doc(), report);
  validator.validate(doc, schema.doc(), DocPath{}, DocPath{}, &report, 0);
  return report;
}

ValidationReport validate_schema(const DataNode& candidate) {
  SchemaChecker checker(candidate);
  checker.check(candidate, DocPath{});
  return std::move(checker.report);
}

}  // namespace schemaforge

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
#include <algorithm>
#include <memory>
#include <optional>

#include "schemaforge/infer.hpp"

namespace schemaforge {
namespace {

enum class Branch { Null, Boolean, Number, String, Object, Array, Other };

struct Shape;

struct ObjectShape {
  std::vector<std::pair<std::string, std::unique_ptr<Shape>>> properties;
  std::vector<std::string> required;

  Shape* find(std::string_view key) {
    for (auto& [name, shape] : properties) {
      if (name == key) return shape.get();
    }
    return nullptr;
  }
};

struct ArrayShape {
  std::unique_ptr<Shape> items;  // null for an empty array
};

// Union of observed value shapes; branches keep first-appearance order.
struct Shape {
  std::vector<Branch> order;
  bool integer_only = true;
  ObjectShape object;
  ArrayShape array;
  std::vector<DataNode> others;

  bool has(Branch b) const { return std::find(order.begin(), order.end(), b) != order.end(); }
};

void merge_into(Shape& target, Shape&& source, const InferenceOptions& options);

void merge_objects(ObjectShape& target, ObjectShape&& source, const InferenceOptions& options) {
  std::vector<std::string> required;
  if (options.required_mode == RequiredMode::Intersection) {
    for (const auto& name : target.required) {
      if (std::find(source.required.begin(), source.required.end(), name) != source.required.end()) {
        required.push_back(name);
      }
    }
  } else {
    required = target.required;
    for (auto& name : source.required) {
      if (std::find(required.begin(), required.end(), name) == required.end()) required.push_back(name);
    }
  }
  target.required = std::move(required);
  for (auto& [name, shape] : source.properties) {
    if (Shape* existing = target.find(name)) {
      merge_into(*existing, std::move(*shape), options);
    } else {
      target.properties.emplace_back(name, std::move(shape));
    }
  }
}

void merge_into(Shape& target, Shape&& source, const InferenceOptions& options) {
  for (const Branch branch : source.order) {
    const bool present = target.has(branch);
    switch (branch) {
      case Branch::Number:
        target.integer_only = (present ? target.integer_only : true) && source.integer_only;
        break;
      case Branch::Object:
        if (present) {
          merge_objects(target.object, std::move(source.object), options);
        } else {
          target.object = std::move(source.object);
        }
        break;
      case Branch::Array:
        if (!present || !target.array.items) {
          target.array.items = std::move(source.array.items);
        } else if (source.array.items) {
          merge_into(*target.array.items, std::move(*source.array.items), options);
        }
        break;
      case Branch::Other:
        for (auto& other : source.others) {
          if (std::find(target.others.begin(), target.others.end(), other) == target.others.end()) {
            target.others.push_back(std::move(other));
          }
        }
        break;
      default:
        break;
    }
    if (!present) target.order.push_back(branch);
  }
}

Shape shape_of(const DataNode& doc, const InferenceOptions& options);

Shape item_union(const DataNode::Array& items, const InferenceOptions& options);

Shape shape_of(const DataNode& doc, const InferenceOptions& options) {
  Shape shape;
  switch (doc.kind()) {
    case DataNode::Kind::Null:
      shape.order.push_back(Branch::Null);
      break;
    case DataNode::Kind::Boolean:
      shape.order.push_back(Branch::Boolean);
      break;
    case DataNode::Kind::Number:
      shape.order.push_back(Branch::Number);
      shape.integer_only = options.detect_integer && doc.is_integer();
      break;
    case DataNode::Kind::String:
      shape.order.push_back(Branch::String);
      break;
    case DataNode::Kind::Object:
      shape.order.push_back(Branch::Object);
      for (const auto& [key, value] : doc.as_object()) {
        shape.object.properties.emplace_back(key, std::make_unique<Shape>(shape_of(value, options)));
        shape.object.required.push_back(key);
      }
      break;
    case DataNode::Kind::Array:
      shape.order.push_back(Branch::Array);
      if (!doc.as_array().empty()) shape.array.items = std::make_unique<Shape>(item_union(doc.as_array(), options));
      break;
  }
  return shape;
}

DataNode to_data(const Shape& shape);

Shape item_union(const DataNode::Array& items, const InferenceOptions& options) {
  Shape merged;
  if (options.merge_array_items) {
    for (const auto& item : items) merge_into(merged, shape_of(item, options), options);
    return merged;
  }
  // Keep distinct element schemas side by side.
  merged.order.push_back(Branch::Other);
  for (const auto& item : items) {
    DataNode schema = to_data(shape_of(item, options));
    if (std::find(merged.others.begin(), merged.others.end(), schema) == merged.others.end()) {
      merged.others.push_back(std::move(schema));
    }
  }
  return merged;
}

DataNode type_schema(std::string_view type) { return DataNode(ObjectMap{{"type", DataNode(type)}}); }

DataNode to_data(const Shape& shape) {
  DataNode::Array branches;
  for (const Branch branch : shape.order) {
    switch (branch) {
      case Branch::Null: branches.push_back(type_schema("null")); break;
      case Branch::Boolean: branches.push_back(type_schema("boolean")); break;
      case Branch::Number: branches.push_back(type_schema(shape.integer_only ? "integer" : "number")); break;
      case Branch::String: branches.push_back(type_schema("string")); break;
      case Branch::Object: {
        ObjectMap schema{{"type", DataNode("object")}};
        if (!shape.object.properties.empty()) {
          ObjectMap properties;
          for (const auto& [name, sub] : shape.object.properties) properties.insert(name, to_data(*sub));
          schema.insert("properties", DataNode(std::move(properties)));
        }
        if (!shape.object.required.empty()) {
          DataNode::Array required;
          for (const auto& name : shape.object.required) required.emplace_back(name);
          schema.insert("required", DataNode(std::move(required)));
        }
        branches.emplace_back(std::move(schema));
        break;
      }
      case Branch::Array: {
        ObjectMap schema{{"type", DataNode("array")}};
        if (shape.array.items) schema.insert("items", to_data(*shape.array.items));
        branches.emplace_back(std::move(schema));
        break;
      }
      case Branch::Other:
        for (const auto& other : shape.others) branches.push_back(other);
        break;
    }
  }
  if (branches.empty()) return DataNode(ObjectMap{});
  if (branches.size() == 1) return branches.front();
  return DataNode(ObjectMap{{"anyOf", DataNode(std::move(branches))}});
}

bool keys_within(const ObjectMap& members, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : members) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) return false;
  }
  return true;
}

Shape opaque(const DataNode& schema) {
  Shape shape;
  shape.order.push_back(Branch::Other);
  shape.others.push_back(schema);
  return shape;
}

// Reads a schema in the inference shape back into a Shape; anything else is
// kept as an opaque branch.
Shape shape_from_schema(const DataNode& schema, const InferenceOptions& options) {
  if (!schema.is_object()) return opaque(schema);
  const ObjectMap& members = schema.as_object();
  if (members.size() == 1 && members.contains("anyOf") && schema.get("anyOf")->is_array()) {
    Shape merged;
    for (const auto& branch : schema.get("anyOf")->as_array()) {
      merge_into(merged, shape_from_schema(branch, options), options);
    }
    return merged;
  }
  const DataNode* type = members.find("type");
  if (type == nullptr || !type->is_string()) return opaque(schema);
  const std::string& name = type->as_string();
  Shape shape;
  if (members.size() == 1) {
    if (name == "null") {
      shape.order.push_back(Branch::Null);
    } else if (name == "boolean") {
      shape.order.push_back(Branch::Boolean);
    } else if (name == "integer" || name == "number") {
      shape.order.push_back(Branch::Number);
      shape.integer_only = name == "integer";
    } else if (name == "string") {
      shape.order.push_back(Branch::String);
    }
    if (!shape.order.empty()) return shape;
  }
  if (name == "object" && keys_within(members, {"type", "properties", "required"})) {
    const DataNode* properties = members.find("properties");
    const DataNode* required = members.find("required");
    if ((properties != nullptr && !properties->is_object()) || (required != nullptr && !required->is_array())) {
      return opaque(schema);
    }
    shape.order.push_back(Branch::Object);
    if (properties != nullptr) {
      for (const auto& [key, sub] : properties->as_object()) {
        shape.object.properties.emplace_back(key, std::make_unique<Shape>(shape_from_schema(sub, options)));
      }
    }
    if (required != nullptr) {
      for (const auto& entry : required->as_array()) {
        if (!entry.is_string()) return opaque(schema);
        shape.object.required.push_back(entry.as_string());
      }
    }
    return shape;
  }
  if (name == "array" && keys_within(members, {"type", "items"})) {
    shape.order.push_back(Branch::Array);
    if (const DataNode* items = members.find("items")) {
      shape.array.items = std::make_unique<Shape>(shape_from_schema(*items, options));
    }
    return shape;
  }
  return opaque(schema);
}

}  // namespace

SchemaNode infer_schema(const DataNode& doc, const InferenceOptions& options) {
  return SchemaNode(to_data(shape_of(doc, options)));
}

SchemaNode merge_schemas(const SchemaNode& a, const SchemaNode& b, const InferenceOptions& options) {
  if (a == b) return a;
  Shape merged = shape_from_schema(a.doc(), options);
  merge_into(merged, shape_from_schema(b.doc(), options), options);
  return SchemaNode(to_data(merged));
}

}  // namespace schemaforge

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
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "schemaforge/decimal.hpp"

namespace schemaforge {

class DataNode;

/// Insertion-ordered string-keyed map with unique keys.
class ObjectMap {
 public:
  using value_type = std::pair<std::string, DataNode>;
  using const_iterator = std::vector<value_type>::const_iterator;

  ObjectMap() = default;
  ObjectMap(std::initializer_list<value_type> entries);

  /// Inserts or overwrites in place (an overwritten key keeps its position).
  void set(std::string key, DataNode value);
  /// Inserts a new key; returns false if the key already exists.
  bool insert(std::string key, DataNode value);
  bool erase(std::string_view key);

  const DataNode* find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const_iterator begin() const noexcept { return entries_.begin(); }
  const_iterator end() const noexcept { return entries_.end(); }
  const value_type& at_index(std::size_t i) const { return entries_.at(i); }
  void reserve(std::size_t n) { entries_.reserve(n); }

 private:
  void rebuild_index();

  std::vector<value_type> entries_;
  std::unordered_map<std::string, std::size_t> index_;  // only for large objects
};

/// Immutable JSON-shaped value. Arrays, objects and strings are shared, so
/// copies are cheap and never observe later changes.
class DataNode {
 public:
  enum class Kind { Null, Boolean, Number, String, Array, Object };
  using Array = std::vector<DataNode>;

  DataNode() = default;
  DataNode(std::nullptr_t) {}  // NOLINT(google-explicit-constructor)
  DataNode(bool value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  DataNode(Decimal value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  DataNode(int value) : value_(Decimal(value)) {}  // NOLINT(google-explicit-constructor)
  DataNode(std::int64_t value) : value_(Decimal(value)) {}  // NOLINT(google-explicit-constructor)
  DataNode(std::string value)  // NOLINT(google-explicit-constructor)
      : value_(std::make_shared<const std::string>(std::move(value))) {}
  DataNode(const char* value) : DataNode(std::string(value)) {}  // NOLINT(google-explicit-constructor)
  DataNode(std::string_view value) : DataNode(std::string(value)) {}  // NOLINT(google-explicit-constructor)
  DataNode(Array value)  // NOLINT(google-explicit-constructor)
      : value_(std::make_shared<const Array>(std::move(value))) {}
  DataNode(ObjectMap value)  // NOLINT(google-explicit-constructor)
      : value_(std::make_shared<const ObjectMap>(std::move(value))) {}

  static DataNode array(Array items = {}) { return DataNode(std::move(items)); }
  static DataNode object(ObjectMap entries = {}) { return DataNode(std::move(entries)); }

  Kind kind() const noexcept { return static_cast<Kind>(value_.index()); }
  bool is_null() const noexcept { return kind() == Kind::Null; }
  bool is_bool() const noexcept { return kind() == Kind::Boolean; }
  bool is_number() const noexcept { return kind() == Kind::Number; }
  bool is_string() const noexcept { return kind() == Kind::String; }
  bool is_array() const noexcept { return kind() == Kind::Array; }
  bool is_object() const noexcept { return kind() == Kind::Object; }
  /// Number with an integral value.
  bool is_integer() const noexcept { return is_number() && std::get<Decimal>(value_).is_integer(); }

  /// Accessors throw std::bad_variant_access on kind mismatch.
  bool as_bool() const { return std::get<bool>(value_); }
  const Decimal& as_number() const { return std::get<Decimal>(value_); }
  const std::string& as_string() const { return *std::get<StringPtr>(value_); }
  const Array& as_array() const { return *std::get<ArrayPtr>(value_); }
  const ObjectMap& as_object() const { return *std::get<ObjectPtr>(value_); }

  /// Object member lookup; nullptr when absent or when this is not an object.
  const DataNode* get(std::string_view key) const;

  friend bool operator==(const DataNode& a, const DataNode& b);

 private:
  using StringPtr = std::shared_ptr<const std::string>;
  using ArrayPtr = std::shared_ptr<const Array>;
  using ObjectPtr = std::shared_ptr<const ObjectMap>;

  std::variant<std::monostate, bool, Decimal, StringPtr, ArrayPtr, ObjectPtr> value_;
};

std::string_view kind_name(DataNode::Kind kind);

/// Like ==, but object key order is ignored.
bool equal_unordered(const DataNode& a, const DataNode& b);

}  // namespace schemaforge

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
#include "schemaforge/data_node.hpp"

#include <algorithm>

namespace schemaforge {
namespace {
constexpr std::size_t kIndexThreshold = 16;
}

ObjectMap::ObjectMap(std::initializer_list<value_type> entries) {
  for (const auto& [key, value] : entries) set(key, value);
}

void ObjectMap::rebuild_index() {
  index_.clear();
  if (entries_.size() <= kIndexThreshold) return;
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].first, i);
}

const DataNode* ObjectMap::find(std::string_view key) const {
  if (!index_.empty()) {
    auto it = index_.find(std::string(key));
    return it == index_.end() ? nullptr : &entries_[it->second].second;
  }
  for (const auto& entry : entries_) {
    if (entry.first == key) return &entry.second;
  }
  return nullptr;
}

void ObjectMap::set(std::string key, DataNode value) {
  if (const DataNode* existing = find(key)) {
    *const_cast<DataNode*>(existing) = std::move(value);
    return;
  }
  insert(std::move(key), std::move(value));
}

bool ObjectMap::insert(std::string key, DataNode value) {
  if (find(key) != nullptr) return false;
  entries_.emplace_back(std::move(key), std::move(value));
  if (entries_.size() > kIndexThreshold) {
    if (index_.empty()) {
      rebuild_index();
    } else {
      index_.emplace(entries_.back().first, entries_.size() - 1);
    }
  }
  return true;
}

bool ObjectMap::erase(std::string_view key) {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const value_type& e) { return e.first == key; });
  if (it == entries_.end()) return false;
  entries_.erase(it);
  rebuild_index();
  return true;
}

const DataNode* DataNode::get(std::string_view key) const {
  if (!is_object()) return nullptr;
  return as_object().find(key);
}

bool operator==(const DataNode& a, const DataNode& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case DataNode::Kind::Null:
      return true;
    case DataNode::Kind::Boolean:
      return a.as_bool() == b.as_bool();
    case DataNode::Kind::Number:
      return a.as_number() == b.as_number();
    case DataNode::Kind::String:
      return a.as_string() == b.as_string();
    case DataNode::Kind::Array: {
      const auto& x = a.as_array();
      const auto& y = b.as_array();
      if (&x == &y) return true;
      return x == y;
    }
    case DataNode::Kind::Object: {
      const auto& x = a.as_object();
      const auto& y = b.as_object();
      if (&x == &y) return true;
      if (x.size() != y.size()) return false;
      return std::equal(x.begin(), x.end(), y.begin());
    }
  }
  return false;
}

bool equal_unordered(const DataNode& a, const DataNode& b) {
  if (a.kind() != b.kind()) return false;
  if (a.is_array()) {
    const auto& x = a.as_array();
    const auto& y = b.as_array();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!equal_unordered(x[i], y[i])) return false;
    }
    return true;
  }
  if (a.is_object()) {
    const auto& x = a.as_object();
    const auto& y = b.as_object();
    if (x.size() != y.size()) return false;
    for (const auto& [key, value] : x) {
      const DataNode* other = y.find(key);
      if (other == nullptr || !equal_unordered(value, *other)) return false;
    }
    return true;
  }
  return a == b;
}

std::string_view kind_name(DataNode::Kind kind) {
  switch (kind) {
    case DataNode::Kind::Null: return "null";
    case DataNode::Kind::Boolean: return "boolean";
    case DataNode::Kind::Number: return "number";
    case DataNode::Kind::String: return "string";
    case DataNode::Kind::Array: return "array";
    case DataNode::Kind::Object: return "object";
  }
  return "unknown";
}

}  // namespace schemaforge

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
#include "schemaforge/doc_path.hpp"

#include <charconv>

namespace schemaforge {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty() || (s.size() > 1 && s[0] == '0')) return false;
  for (const char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

const DataNode* step(const DataNode& node, const DocPath::Segment& segment) {
  if (const auto* key = std::get_if<std::string>(&segment)) {
    if (node.is_object()) return node.as_object().find(*key);
    if (node.is_array() && all_digits(*key)) {
      std::size_t index = 0;
      std::from_chars(key->data(), key->data() + key->size(), index);
      return index < node.as_array().size() ? &node.as_array()[index] : nullptr;
    }
    return nullptr;
  }
  const std::size_t index = std::get<std::size_t>(segment);
  if (node.is_array()) return index < node.as_array().size() ? &node.as_array()[index] : nullptr;
  if (node.is_object()) return node.as_object().find(std::to_string(index));
  return nullptr;
}

DataNode replace_rec(const DataNode& node, const DocPath& path, std::size_t depth, DataNode&& value) {
  if (depth == path.size()) return std::move(value);
  const auto& segment = path.segments()[depth];
  const DataNode* next = step(node, segment);
  if (next == nullptr) throw NotFoundError(path, path.prefix(depth));
  DataNode replaced = replace_rec(*next, path, depth + 1, std::move(value));
  if (node.is_array()) {
    DataNode::Array items = node.as_array();
    const std::size_t index = static_cast<std::size_t>(next - node.as_array().data());
    items[index] = std::move(replaced);
    return DataNode(std::move(items));
  }
  ObjectMap members = node.as_object();
  const auto* key = std::get_if<std::string>(&segment);
  members.set(key != nullptr ? *key : std::to_string(std::get<std::size_t>(segment)), std::move(replaced));
  return DataNode(std::move(members));
}

}  // namespace

DocPath DocPath::from_pointer(std::string_view pointer) {
  DocPath path;
  if (pointer.empty()) return path;
  if (pointer.front() == '#') pointer.remove_prefix(1);
  if (pointer.empty()) return path;
  if (pointer.front() != '/') throw PreconditionError("JSON pointer must start with '/': " + std::string(pointer));
  std::size_t pos = 1;
  while (true) {
    const std::size_t end = pointer.find('/', pos);
    const std::string_view raw = pointer.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    std::string token;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '~' && i + 1 < raw.size() && (raw[i + 1] == '0' || raw[i + 1] == '1')) {
        token += raw[i + 1] == '0' ? '~' : '/';
        ++i;
      } else {
        token += raw[i];
      }
    }
    if (all_digits(token) && token.size() < 19) {
      std::size_t index = 0;
      std::from_chars(token.data(), token.data() + token.size(), index);
      path.segments_.emplace_back(index);
    } else {
      path.segments_.emplace_back(std::move(token));
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return path;
}

std::string DocPath::to_pointer() const {
  std::string out;
  for (const auto& segment : segments_) {
    out += '/';
    if (const auto* key = std::get_if<std::string>(&segment)) {
      for (const char c : *key) {
        if (c == '~') {
          out += "~0";
        } else if (c == '/') {
          out += "~1";
        } else {
          out += c;
        }
      }
    } else {
      out += std::to_string(std::get<std::size_t>(segment));
    }
  }
  return out;
}

DocPath DocPath::child(std::string key) const {
  DocPath out = *this;
  out.segments_.emplace_back(std::move(key));
  return out;
}

DocPath DocPath::child(std::size_t index) const {
  DocPath out = *this;
  out.segments_.emplace_back(index);
  return out;
}

DocPath DocPath::prefix(std::size_t length) const {
  return DocPath(std::vector<Segment>(segments_.begin(),
                                      segments_.begin() + static_cast<std::ptrdiff_t>(std::min(length, size()))));
}

NotFoundError::NotFoundError(const DocPath& path, DocPath resolved_prefix)
    : Error("path not found: " + (path.empty() ? std::string("/") : path.to_pointer()) +
            " (resolvable prefix: " + (resolved_prefix.empty() ? std::string("/") : resolved_prefix.to_pointer()) +
            ")"),
      prefix_(std::move(resolved_prefix)) {}

const DataNode* find_path(const DataNode& doc, const DocPath& path) {
  const DataNode* node = &doc;
  for (const auto& segment : path.segments()) {
    node = step(*node, segment);
    if (node == nullptr) return nullptr;
  }
  return node;
}

const DataNode& resolve_path(const DataNode& doc, const DocPath& path) {
  const DataNode* node = &doc;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const DataNode* next = step(*node, path.segments()[i]);
    if (next == nullptr) throw NotFoundError(path, path.prefix(i));
    node = next;
  }
  return *node;
}

DataNode replace_at(const DataNode& doc, const DocPath& path, DataNode value) {
  return replace_rec(doc, path, 0, std::move(value));
}

}  // namespace schemaforge

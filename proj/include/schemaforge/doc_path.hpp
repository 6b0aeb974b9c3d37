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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schemaforge/data_node.hpp"
#include "schemaforge/errors.hpp"

namespace schemaforge {

/// Address of a node inside a DataNode tree. The empty path is the root.
class DocPath {
 public:
  using Segment = std::variant<std::string, std::size_t>;

  DocPath() = default;
  DocPath(std::initializer_list<Segment> segments) : segments_(segments) {}
  explicit DocPath(std::vector<Segment> segments) : segments_(std::move(segments)) {}

  /// Parses an RFC 6901 JSON pointer ("" is the root). All-digit tokens
  /// become indices; resolution falls back to the key when the parent is an
  /// object. Throws PreconditionError for text not starting with '/'.
  static DocPath from_pointer(std::string_view pointer);
  std::string to_pointer() const;

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return segments_.size(); }
  bool empty() const noexcept { return segments_.empty(); }

  DocPath child(std::string key) const;
  DocPath child(std::size_t index) const;
  DocPath prefix(std::size_t length) const;

  friend bool operator==(const DocPath&, const DocPath&) = default;

 private:
  std::vector<Segment> segments_;
};

/// Thrown when a path does not resolve; carries the longest resolvable prefix.
class NotFoundError : public Error {
 public:
  NotFoundError(const DocPath& path, DocPath resolved_prefix);
  const DocPath& resolved_prefix() const noexcept { return prefix_; }

 private:
  DocPath prefix_;
};

/// Returns the node at `path` or throws NotFoundError.
const DataNode& resolve_path(const DataNode& doc, const DocPath& path);
/// Returns nullptr instead of throwing.
const DataNode* find_path(const DataNode& doc, const DocPath& path);

/// Returns a copy of `doc` with the node at `path` replaced by `value`.
/// Throws NotFoundError if the path does not resolve.
DataNode replace_at(const DataNode& doc, const DocPath& path, DataNode value);

}  // namespace schemaforge

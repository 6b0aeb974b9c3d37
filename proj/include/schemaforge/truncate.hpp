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
#include <vector>

#include "schemaforge/data_node.hpp"

namespace schemaforge {

struct TruncationConfig {
  std::size_t target_bytes = 65536;
  std::size_t n_start = 64;
  std::size_t n_min = 2;
  std::size_t property_factor = 8;

  /// Throws PreconditionError unless every field is >= 1 and n_min <= n_start.
  void check() const;
};

struct TruncationOutcome {
  DataNode doc;
  /// Limit used for the returned document (n_start when nothing was trimmed).
  std::size_t final_n = 0;
  std::size_t iterations = 0;
  /// Compact JSON size of `doc` in bytes.
  std::size_t bytes = 0;
  bool budget_met = false;
  /// (n, bytes) for every trimming pass, in order.
  std::vector<std::pair<std::size_t, std::size_t>> trace;
};

/// Keeps the first n elements of every array and the first
/// property_factor * n members of every object, recursively. Scalars are
/// untouched.
DataNode trim_at(const DataNode& doc, std::size_t n, std::size_t property_factor);

/// Shrinks `doc` below cfg.target_bytes of compact JSON. If it already fits
/// it is returned as is. Otherwise the original is trimmed at n = n_start,
/// n_start / 2, ... (never below n_min) until the result fits or n_min has
/// been tried.
TruncationOutcome truncate_document(const DataNode& doc, const TruncationConfig& cfg = {});

}  // namespace schemaforge

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
#include "schemaforge/truncate.hpp"

#include <algorithm>

#include "schemaforge/errors.hpp"
#include "schemaforge/json.hpp"

namespace schemaforge {

void TruncationConfig::check() const {
  if (target_bytes == 0 || n_start == 0 || n_min == 0 || property_factor == 0) {
    throw PreconditionError("truncation settings must all be at least 1");
  }
  if (n_min > n_start) throw PreconditionError("truncation n_min must not exceed n_start");
}

DataNode trim_at(const DataNode& doc, std::size_t n, std::size_t property_factor) {
  if (doc.is_array()) {
    const auto& items = doc.as_array();
    const std::size_t keep = std::min(items.size(), n);
    DataNode::Array out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(trim_at(items[i], n, property_factor));
    return DataNode(std::move(out));
  }
  if (doc.is_object()) {
    const auto& members = doc.as_object();
    const std::size_t keep = std::min(members.size(), n * property_factor);
    ObjectMap out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
      const auto& [key, value] = members.at_index(i);
      out.insert(key, trim_at(value, n, property_factor));
    }
    return DataNode(std::move(out));
  }
  return doc;
}

TruncationOutcome truncate_document(const DataNode& doc, const TruncationConfig& cfg) {
  cfg.check();
  TruncationOutcome outcome;
  outcome.bytes = compact_size(doc);
  if (outcome.bytes <= cfg.target_bytes) {
    outcome.doc = doc;
    outcome.final_n = cfg.n_start;
    outcome.budget_met = true;
    return outcome;
  }
  std::size_t n = cfg.n_start;
  while (true) {
    ++outcome.iterations;
    outcome.doc = trim_at(doc, n, cfg.property_factor);
    outcome.bytes = compact_size(outcome.doc);
    outcome.final_n = n;
    outcome.trace.emplace_back(n, outcome.bytes);
    if (outcome.bytes <= cfg.target_bytes || n <= cfg.n_min) break;
    n = std::max(n / 2, cfg.n_min);
  }
  outcome.budget_met = outcome.bytes <= cfg.target_bytes;
  return outcome;
}

}  // namespace schemaforge

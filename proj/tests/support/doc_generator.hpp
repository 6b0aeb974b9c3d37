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

// Seeded random documents for property tests.

#include <cstdint>
#include <ostream>
#include <random>
#include <string>

#include "schemaforge/data_node.hpp"
#include "schemaforge/json.hpp"

namespace schemaforge::testing {

class DocGenerator {
 public:
  explicit DocGenerator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string word(std::size_t max_len = 8) {
    static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyz_ABC019";
    const std::size_t n = uniform(1, max_len);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += kChars[uniform(0, sizeof(kChars) - 2)];
    return out;
  }

  std::string text() {
    static const char* const kPieces[] = {"a", "Z", " ", "\"", "\\", "\n", "\t", "\xC3\xA9", "\xE2\x82\xAC",
                                          "\xF0\x9F\x98\x80", "/", "yes", "no", "1", "\x01", "<", "&"};
    std::string out;
    const std::size_t n = uniform(0, 12);
    for (std::size_t i = 0; i < n; ++i) out += kPieces[uniform(0, std::size(kPieces) - 1)];
    return out;
  }

  DataNode number() {
    switch (uniform(0, 3)) {
      case 0:
        return DataNode(static_cast<std::int64_t>(uniform(0, 2000000)) - 1000000);
      case 1:
        return DataNode(Decimal::from_parts(static_cast<std::int64_t>(uniform(0, 99999999)) - 50000000,
                                            -static_cast<std::int64_t>(uniform(1, 6))));
      case 2:
        return DataNode(Decimal::from_parts(static_cast<std::int64_t>(uniform(1, 999)), static_cast<std::int64_t>(uniform(0, 25))));
      default:
        return DataNode(0);
    }
  }

  DataNode scalar() {
    switch (uniform(0, 4)) {
      case 0: return DataNode(nullptr);
      case 1: return DataNode(chance(0.5));
      case 2: return number();
      default: return DataNode(text());
    }
  }

  /// Random tree; `width` bounds container sizes.
  DataNode tree(std::size_t depth, std::size_t width = 5) {
    if (depth == 0 || chance(0.3)) return scalar();
    if (chance(0.5)) {
      DataNode::Array items;
      const std::size_t n = uniform(0, width);
      for (std::size_t i = 0; i < n; ++i) items.push_back(tree(depth - 1, width));
      return DataNode(std::move(items));
    }
    ObjectMap members;
    const std::size_t n = uniform(0, width);
    for (std::size_t i = 0; i < n; ++i) members.set(word(), tree(depth - 1, width));
    return DataNode(std::move(members));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace schemaforge::testing

namespace schemaforge {

// Readable test failure output.
inline void PrintTo(const DataNode& node, std::ostream* os) { *os << serialize_json(node); }

}  // namespace schemaforge

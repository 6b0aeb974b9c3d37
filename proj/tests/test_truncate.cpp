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
#include <gtest/gtest.h>

#include "doc_generator.hpp"
#include "reference_truncation.hpp"
#include "schemaforge/doc_path.hpp"
#include "schemaforge/errors.hpp"
#include "schemaforge/json.hpp"
#include "schemaforge/truncate.hpp"

namespace sf = schemaforge;
using sf::DataNode;
using sf::testing::ReferenceOutcome;
using sf::testing::from_ordered;
using sf::testing::reference_loop;
using sf::testing::reference_trim;
using sf::testing::to_ordered;

namespace {

std::string filler(std::size_t bytes, char c = 'x') { return std::string(bytes, c); }

void collect_scalars(const DataNode& node, const sf::DocPath& at, std::vector<std::pair<sf::DocPath, DataNode>>& out) {
  if (node.is_array()) {
    for (std::size_t i = 0; i < node.as_array().size(); ++i) collect_scalars(node.as_array()[i], at.child(i), out);
  } else if (node.is_object()) {
    for (const auto& [key, value] : node.as_object()) collect_scalars(value, at.child(key), out);
  } else {
    out.emplace_back(at, node);
  }
}

}  // namespace

TEST(TrimAt, KeepsLeadingElementsAndMembers) {
  const DataNode doc = sf::parse_json(R"({"a":[1,2,3,4],"b":{"x":1,"y":2,"z":3},"c":"s"})");
  EXPECT_EQ(sf::trim_at(doc, 2, 1), sf::parse_json(R"({"a":[1,2],"b":{"x":1,"y":2}})"));
  EXPECT_EQ(sf::trim_at(doc, 2, 2), sf::parse_json(R"({"a":[1,2],"b":{"x":1,"y":2,"z":3},"c":"s"})"));
  EXPECT_EQ(sf::trim_at(doc, 64, 8), doc);

  sf::ObjectMap wide;
  for (int i = 0; i < 600; ++i) wide.insert("k" + std::to_string(i), DataNode(i));
  const DataNode trimmed = sf::trim_at(DataNode(wide), 64, 8);
  ASSERT_EQ(trimmed.as_object().size(), 512u);
  EXPECT_EQ(trimmed.as_object().at_index(511).first, "k511");
}

TEST(TrimAt, MatchesReferenceOnRandomDocuments) {
  sf::testing::DocGenerator gen(31);
  for (int i = 0; i < 300; ++i) {
    const DataNode doc = gen.tree(5, 9);
    const std::size_t n = gen.uniform(1, 6);
    const std::size_t factor = gen.uniform(1, 3);
    EXPECT_EQ(sf::trim_at(doc, n, factor), from_ordered(reference_trim(to_ordered(doc), n, factor)));
  }
}

TEST(TrimAt, MonotoneAndIdempotent) {
  sf::testing::DocGenerator gen(37);
  for (int i = 0; i < 200; ++i) {
    const DataNode doc = gen.tree(5, 9);
    const std::size_t n1 = gen.uniform(1, 8);
    const std::size_t n2 = gen.uniform(1, n1);
    const DataNode once = sf::trim_at(doc, n1, 2);
    EXPECT_EQ(sf::trim_at(once, n1, 2), once);
    EXPECT_EQ(sf::trim_at(once, n2, 2), sf::trim_at(doc, n2, 2));
  }
}

TEST(Truncate, SmallDocumentIsUntouched) {
  const DataNode doc = sf::parse_json(R"({"a":")" + filler(980) + R"("})");
  const auto outcome = sf::truncate_document(doc);
  EXPECT_EQ(outcome.doc, doc);
  EXPECT_EQ(outcome.iterations, 0u);
  EXPECT_TRUE(outcome.budget_met);
  EXPECT_EQ(outcome.bytes, sf::serialize_json(doc).size());
  EXPECT_TRUE(outcome.trace.empty());
}

TEST(Truncate, MegabyteArrayNeedsOnePass) {
  DataNode::Array rows;
  for (int i = 0; i < 10000; ++i) {
    rows.emplace_back(sf::ObjectMap{{"id", DataNode(i)}, {"payload", DataNode(filler(80))}});
  }
  const DataNode doc(sf::ObjectMap{{"rows", DataNode(std::move(rows))}});
  ASSERT_GT(sf::serialize_json(doc).size(), 1'000'000u);
  const auto outcome = sf::truncate_document(doc);
  const auto reference = reference_loop(doc, {});
  EXPECT_EQ(outcome.final_n, 64u);
  EXPECT_EQ(outcome.iterations, 1u);
  EXPECT_EQ(outcome.doc.get("rows")->as_array().size(), 64u);
  EXPECT_LE(outcome.bytes, 65536u);
  EXPECT_EQ(outcome.trace, reference.trace);
  EXPECT_EQ(outcome.doc, reference.doc);
}

TEST(Truncate, WideObjectNeedsTwoPasses) {
  sf::ObjectMap props;
  for (int i = 0; i < 1000; ++i) {
    char key[16];
    std::snprintf(key, sizeof key, "p%04d", i);
    props.insert(key, DataNode(filler(190)));
  }
  const DataNode doc(std::move(props));
  ASSERT_GT(sf::serialize_json(doc).size(), 200'000u);
  const auto outcome = sf::truncate_document(doc);
  const auto reference = reference_loop(doc, {});
  ASSERT_EQ(outcome.trace.size(), 2u);
  EXPECT_EQ(outcome.trace[0].first, 64u);
  EXPECT_GT(outcome.trace[0].second, 65536u);
  EXPECT_EQ(outcome.trace[1].first, 32u);
  EXPECT_LE(outcome.trace[1].second, 65536u);
  EXPECT_EQ(outcome.trace, reference.trace);
  EXPECT_EQ(outcome.final_n, 32u);
  EXPECT_EQ(outcome.iterations, 2u);
  EXPECT_EQ(outcome.doc.as_object().size(), 256u);
}

TEST(Truncate, FloorStopsAtMinimum) {
  DataNode::Array big;
  for (int i = 0; i < 4; ++i) big.emplace_back(filler(1000));
  const auto outcome = sf::truncate_document(DataNode(big), {500, 64, 2, 8});
  EXPECT_FALSE(outcome.budget_met);
  EXPECT_EQ(outcome.final_n, 2u);
  EXPECT_EQ(outcome.iterations, 6u);  // 64 32 16 8 4 2
  EXPECT_EQ(outcome.doc.as_array().size(), 2u);
}

TEST(Truncate, PropertiesOnRandomDocuments) {
  sf::testing::DocGenerator gen(41);
  for (int i = 0; i < 150; ++i) {
    const DataNode doc = gen.tree(5, 12);
    sf::TruncationConfig cfg;
    cfg.target_bytes = gen.uniform(50, 5000);
    cfg.n_start = gen.uniform(2, 16);
    cfg.n_min = gen.uniform(1, cfg.n_start);
    cfg.property_factor = gen.uniform(1, 4);
    const auto outcome = sf::truncate_document(doc, cfg);
    const auto reference = reference_loop(doc, cfg);
    EXPECT_EQ(outcome.doc, reference.doc);
    EXPECT_EQ(outcome.trace, reference.trace);
    EXPECT_EQ(outcome.bytes, sf::serialize_json(outcome.doc).size());
    EXPECT_TRUE(outcome.bytes <= cfg.target_bytes || outcome.final_n == cfg.n_min);
    if (outcome.iterations >= 1) {
      std::size_t expected = cfg.n_start;
      for (std::size_t k = 1; k < outcome.iterations; ++k) expected = std::max(cfg.n_min, expected / 2);
      EXPECT_EQ(outcome.final_n, expected);
    }
    std::vector<std::pair<sf::DocPath, DataNode>> scalars;
    collect_scalars(outcome.doc, sf::DocPath(), scalars);
    for (const auto& [path, value] : scalars) EXPECT_EQ(sf::resolve_path(doc, path), value);
  }
}

TEST(Truncate, RejectsBadConfig) {
  EXPECT_THROW(sf::truncate_document(DataNode(1), {0, 64, 2, 8}), sf::PreconditionError);
  EXPECT_THROW(sf::truncate_document(DataNode(1), {10, 4, 8, 8}), sf::PreconditionError);
  EXPECT_THROW(sf::truncate_document(DataNode(1), {10, 4, 2, 0}), sf::PreconditionError);
}

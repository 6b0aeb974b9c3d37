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

#include <deque>

#include "doc_generator.hpp"
#include "schemaforge/assist.hpp"
#include "schemaforge/infer.hpp"
#include "schemaforge/json.hpp"
#include "schemaforge/truncate.hpp"

namespace sf = schemaforge;
using sf::DataNode;
using sf::DocPath;
using sf::Phase;
using sf::PromptKind;

namespace {

DataNode j(std::string_view text) { return sf::parse_json(text); }

// Returns queued answers in order and remembers what it was asked.
class ScriptedTransport : public sf::Transport {
 public:
  explicit ScriptedTransport(std::deque<std::string> answers) : answers_(std::move(answers)) {}
  std::string send(const sf::GatewayConfig&, const std::vector<sf::ChatMessage>& messages) override {
    requests.push_back(messages);
    if (answers_.empty()) throw sf::GatewayError("no scripted answer left");
    std::string next = std::move(answers_.front());
    answers_.pop_front();
    return next;
  }
  std::vector<std::vector<sf::ChatMessage>> requests;

 private:
  std::deque<std::string> answers_;
};

const char* const kPersonSchema = R"({"type":"object","properties":{
  "name":{"type":"string"},
  "address":{"type":"object","properties":{"city":{"type":"string"},"zip":{"$ref":"#/$defs/zip"}}},
  "secret_marker_field":{"type":"boolean"}},
  "$defs":{"zip":{"type":"string","pattern":"^[0-9]{5}$"}}})";

sf::PromptInputs describe(std::string text) {
  sf::PromptInputs inputs;
  inputs.description = std::move(text);
  return inputs;
}

// Text between "### <title>\n" and the next blank-line-separated heading.
std::string section(const std::string& message, const std::string& title) {
  const std::string marker = "### " + title + "\n";
  const auto start = message.find(marker);
  if (start == std::string::npos) return {};
  const auto body = start + marker.size();
  const auto end = message.find("\n\n###", body);
  return message.substr(body, end == std::string::npos ? std::string::npos : end - body);
}

}  // namespace

TEST(Prompt, KindNamesRoundTrip) {
  for (auto kind : {PromptKind::SchemaCreate, PromptKind::SchemaModify, PromptKind::SchemaQuery, PromptKind::DataCreate,
                    PromptKind::DataModify, PromptKind::DataQuery, PromptKind::MappingGenerate}) {
    EXPECT_EQ(sf::parse_prompt_kind(sf::prompt_kind_name(kind)), kind);
  }
  EXPECT_EQ(sf::prompt_kind_name(PromptKind::MappingGenerate), "mapping_generate");
  EXPECT_FALSE(sf::parse_prompt_kind("schema-create"));
  EXPECT_TRUE(sf::is_schema_kind(PromptKind::SchemaModify));
  EXPECT_FALSE(sf::is_schema_kind(PromptKind::SchemaQuery));
  EXPECT_TRUE(sf::is_query_kind(PromptKind::DataQuery));
}

TEST(Prompt, TemplatesAndAssets) {
  EXPECT_EQ(sf::render_template("a {{x}} b {{y}}", {{"x", "1"}, {"y", "{{x}}"}}), "a 1 b {{x}}");
  EXPECT_THROW(sf::render_template("{{missing}}", {}), sf::Error);
  EXPECT_EQ(sf::prompt_asset("schema_system.txt").substr(0, sf::kRoleSentence.size()), sf::kRoleSentence);
  // License headers are stripped when the assets are embedded.
  EXPECT_EQ(sf::prompt_asset("mapping_request.txt").find("Licensed"), std::string_view::npos);
  EXPECT_EQ(sf::prompt_asset("mapping_example.jnt").find("Licensed"), std::string_view::npos);
  EXPECT_THROW(sf::prompt_asset("nope.txt"), sf::Error);
}

TEST(Prompt, SchemaCreateCarriesRoleSentenceAndDescription) {
  const auto bundle = sf::build_prompt(PromptKind::SchemaCreate, describe("Create a schema for metal-organic framework synthesis runs."));
  ASSERT_EQ(bundle.messages.size(), 2u);
  EXPECT_EQ(bundle.messages[0].role, sf::Role::System);
  EXPECT_NE(bundle.messages[0].content.find("You are a JSON Schema expert"), std::string::npos);
  EXPECT_EQ(bundle.messages[1].role, sf::Role::User);
  EXPECT_NE(bundle.messages[1].content.find("Create a schema for metal-organic framework synthesis"), std::string::npos);
  EXPECT_THROW(sf::build_prompt(PromptKind::SchemaCreate, {}), sf::MissingInputError);
}

TEST(Prompt, SchemaModifySendsOnlyTheSelection) {
  auto inputs = describe("add a country");
  inputs.schema = j(kPersonSchema);
  inputs.context_path = DocPath::from_pointer("/properties/address");
  const auto bundle = sf::build_prompt(PromptKind::SchemaModify, inputs);
  ASSERT_EQ(bundle.messages.size(), 2u);
  EXPECT_NE(bundle.messages[0].content.find(sf::kRoleSentence), std::string::npos);
  const std::string& user = bundle.messages[1].content;
  EXPECT_EQ(user.find("secret_marker_field"), std::string::npos);
  EXPECT_NE(user.find("\"city\""), std::string::npos);
  EXPECT_NE(user.find("\"zip\""), std::string::npos);  // referenced definition travels along
  EXPECT_NE(user.find(sf::serialize_json(
                sf::select_subschema(sf::SchemaNode(j(kPersonSchema)), *inputs.context_path).doc(), sf::JsonStyle::Pretty)),
            std::string::npos);
  EXPECT_EQ(bundle.context_path->to_pointer(), "/properties/address");

  inputs.context_path = DocPath();
  const auto root = sf::build_prompt(PromptKind::SchemaModify, inputs);
  EXPECT_NE(root.messages[1].content.find(sf::serialize_json(j(kPersonSchema), sf::JsonStyle::Pretty)), std::string::npos);

  auto missing = describe("x");
  missing.schema = j(kPersonSchema);
  try {
    sf::build_prompt(PromptKind::SchemaModify, missing);
    FAIL();
  } catch (const sf::MissingInputError& e) {
    EXPECT_EQ(e.field(), "context_path");
  }
  auto prior = inputs;
  prior.prior_proposal = "{\"type\":\"object\",\"title\":\"draft\"}";
  EXPECT_NE(sf::build_prompt(PromptKind::SchemaModify, prior).messages[1].content.find("\"title\":\"draft\""),
            std::string::npos);
}

TEST(Prompt, DataKindsCarryInstanceSchema) {
  auto inputs = describe("add one person");
  inputs.schema = j(kPersonSchema);
  auto created = sf::build_prompt(PromptKind::DataCreate, inputs);
  EXPECT_EQ(*created.instance_schema, j(kPersonSchema));
  inputs.document = j(R"({"name":"a","address":{"city":"b","zip":"12345"}})");
  inputs.context_path = DocPath::from_pointer("/address/zip");
  auto modified = sf::build_prompt(PromptKind::DataModify, inputs);
  EXPECT_EQ(modified.instance_schema->get("pattern")->as_string(), "^[0-9]{5}$");
  auto no_doc = describe("x");
  no_doc.schema = j(kPersonSchema);
  EXPECT_THROW(sf::build_prompt(PromptKind::DataModify, no_doc), sf::MissingInputError);
}

TEST(Prompt, SchemaAtInstancePathFollowsStructure) {
  const DataNode schema = j(R"({"type":"array","items":{"$ref":"#/$defs/row"},
    "$defs":{"row":{"properties":{"tags":{"items":{"type":"string"}}},"additionalProperties":{"type":"integer"}}}})");
  EXPECT_EQ(sf::schema_at_instance_path(schema, DocPath::from_pointer("/3/tags/0")).get("type")->as_string(), "string");
  EXPECT_EQ(sf::schema_at_instance_path(schema, DocPath::from_pointer("/0/other")).get("type")->as_string(), "integer");
  EXPECT_EQ(sf::schema_at_instance_path(schema, DocPath::from_pointer("/0/tags/0/deeper")), j("{}"));
}

TEST(Prompt, MappingGenerateOrderAndTruncation) {
  DataNode::Array rows;
  for (int i = 0; i < 12000; ++i) {
    rows.emplace_back(sf::ObjectMap{{"id", DataNode(i)}, {"note", DataNode(std::string(70, 'n'))}});
  }
  // A property only present far beyond the truncation window.
  rows.back() = DataNode(sf::ObjectMap{{"id", DataNode(1)}, {"late_only", DataNode(true)}});
  const DataNode doc(sf::ObjectMap{{"rows", DataNode(rows)}});
  ASSERT_GT(sf::serialize_json(doc).size(), 1'000'000u);
  sf::PromptInputs inputs;
  inputs.document = doc;
  inputs.target_schema = j(R"({"type":"object","properties":{"ids":{"type":"array"}}})");
  inputs.remarks = "ids only";
  const auto bundle = sf::build_prompt(PromptKind::MappingGenerate, inputs);
  ASSERT_EQ(bundle.messages.size(), 4u);
  EXPECT_EQ(bundle.messages[0].role, sf::Role::System);
  EXPECT_EQ(bundle.messages[1].role, sf::Role::User);
  EXPECT_EQ(bundle.messages[2].role, sf::Role::Assistant);
  EXPECT_EQ(bundle.messages[3].role, sf::Role::User);
  EXPECT_EQ(bundle.messages[2].content, sf::strip_artifacts(sf::prompt_asset("mapping_example.jnt")));

  const std::string& request = bundle.messages[3].content;
  const auto doc_at = request.find("### Input document");
  const auto source_at = request.find("### Source schema");
  const auto target_at = request.find("### Target schema");
  const auto remarks_at = request.find("### Remarks");
  ASSERT_NE(doc_at, std::string::npos);
  EXPECT_LT(doc_at, source_at);
  EXPECT_LT(source_at, target_at);
  EXPECT_LT(target_at, remarks_at);

  const std::string embedded = section(request, "Input document");
  EXPECT_LE(embedded.size(), 65536u);
  const auto expected = sf::truncate_document(doc);
  EXPECT_EQ(sf::parse_json(embedded), expected.doc);
  EXPECT_EQ(bundle.truncation->final_n, expected.final_n);
  EXPECT_EQ(embedded.find("late_only"), std::string::npos);
  EXPECT_EQ(sf::parse_json(section(request, "Source schema")), sf::infer_schema(doc).doc());
  EXPECT_NE(section(request, "Source schema").find("late_only"), std::string::npos);
  EXPECT_EQ(section(request, "Remarks"), "ids only\n\nReply with the mapping expression only.");

  sf::PromptInputs missing;
  missing.document = doc;
  try {
    sf::build_prompt(PromptKind::MappingGenerate, missing);
    FAIL();
  } catch (const sf::MissingInputError& e) {
    EXPECT_EQ(e.field(), "target_schema");
  }
}

TEST(Prompt, BundleSerializationRoundTrips) {
  auto inputs = describe("x");
  inputs.schema = j(kPersonSchema);
  inputs.context_path = DocPath::from_pointer("/properties/name");
  for (auto kind : {PromptKind::SchemaModify, PromptKind::DataCreate}) {
    const auto bundle = sf::build_prompt(kind, inputs);
    const auto back = sf::PromptBundle::from_data(bundle.to_data());
    EXPECT_EQ(back.kind, bundle.kind);
    EXPECT_EQ(back.messages, bundle.messages);
    EXPECT_EQ(back.to_data(), bundle.to_data());
  }
}

TEST(Strip, RemovesSingleFenceOnly) {
  EXPECT_EQ(sf::strip_artifacts("```jsonata\n{\"a\": b}\n```"), "{\"a\": b}");
  EXPECT_EQ(sf::strip_artifacts("{\"a\": 1}"), "{\"a\": 1}");
  EXPECT_EQ(sf::strip_artifacts("```json\n{}\n```"), "{}");
  EXPECT_EQ(sf::strip_artifacts("  \n```\nx\n```  \n"), "x");
  EXPECT_EQ(sf::strip_artifacts("```a```"), "a");
  EXPECT_EQ(sf::strip_artifacts("text ```json\n{}\n```"), "text ```json\n{}\n```");
  EXPECT_EQ(sf::strip_artifacts("```json\n{}\n```\n```json\n[]\n```"), "```json\n{}\n```\n```json\n[]\n```");
  EXPECT_EQ(sf::strip_artifacts("```json\n\"a `b` c\"\n```"), "\"a `b` c\"");
}

TEST(Strip, IsIdempotentOnRandomText) {
  static const char* const kPieces[] = {"```", "json", "jsonata", "\n", " ", "x", "`", "{}", "\t", "``", "js on"};
  sf::testing::DocGenerator gen(4);
  for (int i = 0; i < 5000; ++i) {
    std::string text;
    for (std::size_t n = gen.uniform(0, 10); n > 0; --n) text += kPieces[gen.uniform(0, std::size(kPieces) - 1)];
    const std::string once = sf::strip_artifacts(text);
    EXPECT_EQ(sf::strip_artifacts(once), once) << text;
  }
}

TEST(Session, SubmitEditApplySchema) {
  ScriptedTransport transport({"```json\n{\"type\":\"strng\"}\n```"});
  sf::GatewayConfig cfg;
  auto inputs = describe("make name an enum");
  inputs.schema = j(kPersonSchema);
  inputs.context_path = DocPath::from_pointer("/properties/name");
  const auto bundle = sf::build_prompt(PromptKind::SchemaModify, inputs);

  const sf::SessionState idle;
  auto proposed = sf::submit(idle, bundle, transport, cfg);
  EXPECT_EQ(proposed.phase, Phase::Proposed);
  EXPECT_EQ(proposed.proposal, "{\"type\":\"strng\"}");
  EXPECT_EQ(proposed.history.back().raw_response, "```json\n{\"type\":\"strng\"}\n```");
  EXPECT_FALSE(proposed.valid());
  const auto& report = std::get<sf::ValidationReport>(proposed.validation);
  EXPECT_EQ(report.violations.at(0).keyword, "type");

  sf::ApplyTarget target;
  target.schema = j(kPersonSchema);
  EXPECT_THROW(sf::apply(proposed, target), sf::BlockedApply);

  auto edited = sf::user_edit(proposed, R"({"type":"string","enum":["a","b"]})");
  EXPECT_EQ(edited.phase, Phase::UserEditing);
  EXPECT_TRUE(edited.valid());
  const auto applied = sf::apply(edited, target);
  EXPECT_EQ(applied.state.phase, Phase::Applied);
  EXPECT_EQ(*applied.result.get("properties")->get("name"), j(R"({"type":"string","enum":["a","b"]})"));
  EXPECT_EQ(applied.state.history.size(), 1u);

  const auto again = sf::user_edit(edited, edited.proposal);
  EXPECT_EQ(again.proposal, edited.proposal);
  EXPECT_EQ(again.phase, Phase::UserEditing);
}

TEST(Session, GatewayFailureLeavesStateUntouched) {
  ScriptedTransport transport({});
  const auto bundle = sf::build_prompt(PromptKind::SchemaCreate, describe("x"));
  const sf::SessionState idle;
  EXPECT_THROW(sf::submit(idle, bundle, transport, {}), sf::GatewayError);
  EXPECT_EQ(idle.phase, Phase::Idle);
  EXPECT_TRUE(idle.history.empty());
}

TEST(Session, IllegalTransitions) {
  const sf::SessionState idle;
  EXPECT_THROW(sf::user_edit(idle, "x"), sf::IllegalTransition);
  EXPECT_THROW(sf::discard(idle), sf::IllegalTransition);
  EXPECT_THROW(sf::apply(idle, {}), sf::IllegalTransition);

  ScriptedTransport transport({"a plain answer", "{\"type\":\"object\"}"});
  sf::PromptInputs query = describe("what is required?");
  query.schema = j(kPersonSchema);
  const auto answered = sf::submit(idle, sf::build_prompt(PromptKind::SchemaQuery, query), transport, {});
  EXPECT_EQ(answered.proposal, "a plain answer");
  EXPECT_TRUE(std::holds_alternative<std::monostate>(answered.validation));
  EXPECT_THROW(sf::apply(answered, {}), sf::IllegalTransition);

  const auto proposed = sf::submit(idle, sf::build_prompt(PromptKind::SchemaCreate, describe("x")), transport, {});
  const auto dropped = sf::discard(proposed);
  EXPECT_EQ(dropped.phase, Phase::Discarded);
  EXPECT_TRUE(dropped.proposal.empty());
  EXPECT_THROW(sf::apply(dropped, {}), sf::IllegalTransition);
  EXPECT_THROW(sf::user_edit(dropped, "x"), sf::IllegalTransition);
  EXPECT_EQ(dropped.history.size(), 1u);  // raw response kept
}

TEST(Session, MappingApplyUsesFullDocument) {
  const DataNode doc = j(R"({"items":[1,2,3,4,5,6,7,8]})");
  const std::string mapping = "```jsonata\n{\"total\": $sum(items), \"n\": $count(items)}\n```";
  for (std::size_t n_start : {2u, 64u}) {
    ScriptedTransport transport({mapping});
    sf::PromptInputs inputs;
    inputs.document = doc;
    inputs.target_schema = j(R"({"type":"object"})");
    inputs.truncation = {10, n_start, std::min<std::size_t>(2, n_start), 8};
    const auto proposed = sf::submit({}, sf::build_prompt(PromptKind::MappingGenerate, inputs), transport, {});
    ASSERT_TRUE(proposed.valid());
    EXPECT_TRUE(std::holds_alternative<sf::mapping::SyntaxReport>(proposed.validation));
    sf::ApplyTarget target;
    target.document = doc;
    EXPECT_EQ(sf::apply(proposed, target).result, j(R"({"total":36,"n":8})"));
  }
  ScriptedTransport broken({"$frobnicate(items)"});
  sf::PromptInputs inputs;
  inputs.document = doc;
  inputs.target_schema = j("{}");
  const auto proposed = sf::submit({}, sf::build_prompt(PromptKind::MappingGenerate, inputs), broken, {});
  EXPECT_FALSE(proposed.valid());
  EXPECT_THROW(sf::apply(proposed, {std::nullopt, doc, {}}), sf::BlockedApply);
}

TEST(Session, EvaluationErrorKeepsHistory) {
  ScriptedTransport transport({"items + 1"});
  sf::PromptInputs inputs;
  inputs.document = j(R"({"items":"x"})");
  inputs.target_schema = j("{}");
  const auto proposed = sf::submit({}, sf::build_prompt(PromptKind::MappingGenerate, inputs), transport, {});
  ASSERT_TRUE(proposed.valid());
  EXPECT_THROW(sf::apply(proposed, {std::nullopt, *inputs.document, {}}), sf::mapping::EvaluationError);
  EXPECT_EQ(proposed.phase, Phase::Proposed);
  EXPECT_EQ(proposed.history.size(), 1u);
}

TEST(Session, DataModifyReplacesAtPath) {
  ScriptedTransport transport({"\"54321\""});
  auto inputs = describe("change the zip");
  inputs.schema = j(kPersonSchema);
  inputs.document = j(R"({"name":"a","address":{"city":"b","zip":"12345"}})");
  inputs.context_path = DocPath::from_pointer("/address/zip");
  const auto proposed = sf::submit({}, sf::build_prompt(PromptKind::DataModify, inputs), transport, {});
  ASSERT_TRUE(proposed.valid());
  const auto applied = sf::apply(proposed, {std::nullopt, inputs.document, {}});
  EXPECT_EQ(applied.result, j(R"({"name":"a","address":{"city":"b","zip":"54321"}})"));
  const auto bad = sf::user_edit(proposed, "\"12\"");
  EXPECT_FALSE(bad.valid());
}

TEST(Session, PriorProposalIsSentOnNextTurn) {
  ScriptedTransport transport({"{\"type\":\"object\",\"title\":\"v1\"}", "{\"type\":\"object\",\"title\":\"v2\"}"});
  auto first_inputs = describe("first");
  const auto first = sf::submit({}, sf::build_prompt(PromptKind::SchemaCreate, first_inputs), transport, {});
  auto second_inputs = describe("second");
  second_inputs.prior_proposal = first.proposal;
  const auto second = sf::submit(first, sf::build_prompt(PromptKind::SchemaCreate, second_inputs), transport, {});
  EXPECT_NE(transport.requests[1].back().content.find("\"title\":\"v1\""), std::string::npos);
  EXPECT_EQ(second.history.size(), 2u);
  EXPECT_EQ(second.proposal, "{\"type\":\"object\",\"title\":\"v2\"}");
}

TEST(Session, StateSerializationRoundTrips) {
  ScriptedTransport transport({"```json\n{\"type\":\"strng\"}\n```"});
  auto inputs = describe("x");
  inputs.schema = j(kPersonSchema);
  inputs.context_path = DocPath::from_pointer("/properties/address");
  const auto state = sf::submit({}, sf::build_prompt(PromptKind::SchemaModify, inputs), transport, {});
  const DataNode data = state.to_data();
  EXPECT_EQ(data.get("phase")->as_string(), "proposed");
  EXPECT_EQ(data.get("valid")->as_bool(), false);
  const auto back = sf::SessionState::from_data(data);
  EXPECT_EQ(back.to_data(), data);
  EXPECT_EQ(back.history.at(0).raw_response, state.history.at(0).raw_response);
  EXPECT_EQ(sf::phase_name(Phase::UserEditing), "user_editing");
}

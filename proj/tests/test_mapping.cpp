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

#include <thread>

#include "doc_generator.hpp"
#include "schemaforge/json.hpp"
#include "schemaforge/mapping/mapping.hpp"

namespace sf = schemaforge;
namespace mp = schemaforge::mapping;
using sf::DataNode;

namespace {

DataNode j(std::string_view text) { return sf::parse_json(text); }

std::optional<DataNode> ev(std::string_view expr, std::string_view input = "null") {
  return mp::evaluate_mapping(mp::parse_mapping(expr), j(input));
}

DataNode must(std::string_view expr, std::string_view input = "null") {
  auto result = ev(expr, input);
  if (!result) throw std::runtime_error("undefined result for " + std::string(expr));
  return *result;
}

void check_spans(const mp::Node& node, std::size_t source_size) {
  EXPECT_LE(node.span.offset + node.span.length, source_size) << mp::node_kind_name(node.kind);
  auto within = [&](const mp::Node& child) {
    EXPECT_GE(child.span.offset, node.span.offset) << mp::to_source(node);
    EXPECT_LE(child.span.offset + child.span.length, node.span.offset + node.span.length) << mp::to_source(node);
    check_spans(child, source_size);
  };
  for (const auto& child : node.children) within(child);
  for (const auto& stage : node.stages) within(stage);
}

// Random source text from a fixed subset grammar. Binary operands are
// parenthesised so every output is syntactically valid.
class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed) : gen_(seed) {}

  std::string expr(int depth) {
    if (depth <= 0) return leaf();
    switch (gen_.uniform(0, 11)) {
      case 0: {
        static const char* const kOps[] = {"+", "-", "*", "/", "%", "=", "!=", "<", "<=", ">", ">=",
                                           "and", "or", "&", "in", ".."};
        return "(" + expr(depth - 1) + " " + kOps[gen_.uniform(0, 15)] + " " + expr(depth - 1) + ")";
      }
      case 1: return path(depth);
      case 2: return "-(" + expr(depth - 1) + ")";
      case 3: return "$sum(" + expr(depth - 1) + ")";
      case 4: return "$substring(" + expr(depth - 1) + ", " + expr(depth - 1) + ")";
      case 5: return "{\"" + gen_.word() + "\": " + expr(depth - 1) + ", \"k\": " + expr(depth - 1) + "}";
      case 6: return "[" + expr(depth - 1) + ", " + expr(depth - 1) + "]";
      case 7: return "(" + expr(depth - 1) + " ? " + expr(depth - 1) + " : " + expr(depth - 1) + ")";
      case 8: return "($v := " + expr(depth - 1) + "; " + expr(depth - 1) + ")";
      case 9: return "$map(" + expr(depth - 1) + ", function($x, $i) { $x & " + expr(depth - 1) + " })";
      case 10: return path(depth) + "{" + expr(depth - 1) + ": " + expr(depth - 1) + "}";
      default: return path(depth) + "[" + expr(depth - 1) + "]";
    }
  }

 private:
  std::string leaf() {
    switch (gen_.uniform(0, 8)) {
      case 0: return std::to_string(gen_.uniform(0, 100));
      case 1: return "1.5";
      case 2: return "\"s\\\"" + gen_.word() + "\"";
      case 3: return gen_.chance(0.5) ? "true" : "false";
      case 4: return "null";
      case 5: return "$";
      case 6: return "$v";
      case 7: return "`odd name`";
      default: return name();
    }
  }
  // Identifier that cannot collide with a keyword.
  std::string name() { return "q" + gen_.word(); }
  std::string path(int depth) {
    std::string out = name();
    for (std::size_t i = gen_.uniform(0, 2); i > 0; --i) out += gen_.chance(0.2) ? ".*" : "." + name();
    if (depth > 1 && gen_.chance(0.3)) out += "[" + expr(depth - 2) + "]";
    if (gen_.chance(0.1)) out += "[]";
    return out;
  }

  sf::testing::DocGenerator gen_;
};

}  // namespace

TEST(MappingParse, FilterPathShape) {
  const auto ast = mp::parse_mapping(R"(reagents[role = "metal"].name)");
  const mp::Node& root = ast.root();
  ASSERT_EQ(root.kind, mp::NodeKind::Path);
  ASSERT_EQ(root.children.size(), 2u);
  EXPECT_EQ(root.children[0].kind, mp::NodeKind::Name);
  EXPECT_EQ(root.children[0].text, "reagents");
  ASSERT_EQ(root.children[0].stages.size(), 1u);
  EXPECT_EQ(root.children[0].stages[0].kind, mp::NodeKind::Binary);
  EXPECT_EQ(root.children[0].stages[0].text, "=");
  EXPECT_EQ(root.children[1].text, "name");
  EXPECT_EQ(mp::parse_mapping("$").root().kind, mp::NodeKind::Context);
  EXPECT_EQ(mp::parse_mapping("$$").root().kind, mp::NodeKind::Root);
  EXPECT_EQ(mp::parse_mapping("/* note */ a /* b */").root().kind, mp::NodeKind::Path);
}

TEST(MappingParse, SyntaxErrorsCarryPositions) {
  struct Case {
    const char* source;
    std::size_t offset;
    std::size_t line;
    std::size_t column;
    const char* fragment;
  };
  const Case cases[] = {
      {R"({"a": })", 6, 1, 7, "expected expression"},
      {"", 0, 1, 1, "expected expression"},
      {"a.(b", 4, 1, 5, "expected ')'"},
      {"[1, 2", 5, 1, 6, "expected ']'"},
      {"{\n  \"a\": 1,\n  \"b\" 2\n}", 18, 3, 7, "expected ':'"},
      {"\"unterminated", 0, 1, 1, "string"},
      {"a ~> b", 2, 1, 3, "not supported"},
      {"1 := 2", 0, 1, 1, "variable"},
      {"a b", 2, 1, 3, "unexpected"},
      {"\"é\" +", 6, 1, 6, "expected expression"},
  };
  for (const auto& c : cases) {
    try {
      mp::parse_mapping(c.source);
      ADD_FAILURE() << "accepted: " << c.source;
    } catch (const mp::MappingSyntaxError& e) {
      EXPECT_EQ(e.span().offset, c.offset) << c.source << " -> " << e.what();
      EXPECT_EQ(e.position().line, c.line) << c.source << " -> " << e.what();
      EXPECT_EQ(e.position().column, c.column) << c.source << " -> " << e.what();
      EXPECT_NE(e.detail().find(c.fragment), std::string::npos) << c.source << " -> " << e.what();
    }
  }
}

TEST(MappingParse, RoundTripsThroughPrinter) {
  const char* corpus[] = {
      R"({"materialId": mof_id, "metal": reagents[role = "metal"].name, "linkers": reagents[role = "linker"].name})",
      "a.b[0][-1].c[]", "$sort(items, function($l, $r) { $l.price > $r.price })", "($x := 1; $y := $x + 1; [$x, $y])",
      "items{category: $sum(price)}", "-(a.b) * 2 % 3", "`weird key`.x", "[1..5][$ > 2]", "a ? b : c", "a ? b",
      "\"q\\\"uote\" & 'single'", "x in [1, 2]", "not_a_keyword_and", "$.a", "$$.root", "*.x", "a[b = 'x' and c > 1]",
      "$reduce([1,2,3], function($acc, $v) { $acc + $v }, 0)", "λ($a) { $a }", "[[1,2]][0]", "{}", "[]",
  };
  for (const char* source : corpus) {
    const auto first = mp::parse_mapping(source);
    const std::string printed = mp::to_source(first.root());
    const auto second = mp::parse_mapping(printed);
    EXPECT_TRUE(mp::structurally_equal(first.root(), second.root())) << source << "\n" << printed;
    EXPECT_EQ(mp::to_source(second.root()), printed);
  }
}

TEST(MappingParse, RandomExpressionsRoundTripAndNestSpans) {
  ExprGenerator gen(77);
  for (int i = 0; i < 1000; ++i) {
    const std::string source = gen.expr(4);
    SCOPED_TRACE(source);
    std::optional<mp::MappingAst> parsed;
    ASSERT_NO_THROW(parsed.emplace(mp::parse_mapping(source)));
    const auto& first = *parsed;
    check_spans(first.root(), source.size());
    const std::string printed = mp::to_source(first.root());
    const auto second = mp::parse_mapping(printed);
    ASSERT_TRUE(mp::structurally_equal(first.root(), second.root())) << source << "\n" << printed;
    EXPECT_TRUE(mp::validate_syntax(source).valid) << source;
  }
}

TEST(MappingSyntax, ReportsUnknownFunctionsAndArity) {
  EXPECT_TRUE(mp::validate_syntax(R"({"a": $uppercase(x), "b": x.$lowercase()})").valid);
  auto unknown = mp::validate_syntax("$frobnicate(x)");
  ASSERT_FALSE(unknown.valid);
  EXPECT_EQ(unknown.diagnostics[0].message, "unknown function $frobnicate");
  EXPECT_EQ(unknown.to_text(), "1:1 unknown function $frobnicate\n");
  auto arity = mp::validate_syntax("$substring(\"x\", 1, 2, 3)");
  ASSERT_FALSE(arity.valid);
  EXPECT_NE(arity.diagnostics[0].message.find("$substring"), std::string::npos);
  EXPECT_FALSE(mp::validate_syntax("$map([1], 2)").valid);
  EXPECT_TRUE(mp::validate_syntax("($f := function($x) { $x }; $f(1, 2))").valid);
  EXPECT_TRUE(mp::validate_syntax("$map([1], $string)").valid);
  auto empty = mp::validate_syntax("");
  ASSERT_FALSE(empty.valid);
  EXPECT_NE(empty.to_text().find("expected expression"), std::string::npos);
  const DataNode data = mp::validate_syntax("a +").to_data();
  EXPECT_FALSE(data.get("valid")->as_bool());
  EXPECT_EQ(data.get("diagnostics")->as_array()[0].get("column")->as_number(), sf::Decimal(4));
  EXPECT_TRUE(mp::validate_syntax("a + b").to_data().get("diagnostics")->as_array().empty());
}

TEST(MappingFunctions, TableMatchesDeclaredSet) {
  const std::vector<std::string> expected = {
      "sum", "max", "min", "average", "count", "string", "number", "boolean", "not", "exists",
      "uppercase", "lowercase", "trim", "substring", "split", "join", "contains", "replace", "keys", "values",
      "merge", "append", "distinct", "sort", "map", "filter", "reduce", "each"};
  std::vector<std::string> names;
  for (const auto& f : mp::registered_functions()) names.push_back(f.name);
  EXPECT_EQ(names, expected);
  EXPECT_EQ(mp::find_function("sum")->min_arity, 1u);
  EXPECT_EQ(mp::find_function("sum")->max_arity, 1u);
  EXPECT_EQ(mp::find_function("map")->max_arity, 2u);
  EXPECT_EQ(mp::find_function("map")->params[1], mp::ArgKind::Function);
  EXPECT_EQ(mp::find_function("frobnicate"), nullptr);
}

TEST(MappingEval, SequenceSemantics) {
  const char* doc = R"({"a":[{"b":1},{"b":[2,3]},{"c":4}],"one":[{"b":5}],"s":"x"})";
  EXPECT_EQ(must("a.b", doc), j("[1,2,3]"));
  EXPECT_EQ(must("one.b", doc), j("5"));
  EXPECT_EQ(must("one.b[]", doc), j("[5]"));
  EXPECT_EQ(must("[one.b]", doc), j("[5]"));
  EXPECT_FALSE(ev("nope", doc));
  EXPECT_FALSE(ev("a.nope", doc));
  EXPECT_EQ(must(R"({"x": nope, "y": s})", doc), j(R"({"y":"x"})"));
  EXPECT_EQ(must("[nope, s, a.c]", doc), j(R"(["x",4])"));
  EXPECT_EQ(must("a[0].b", doc), j("1"));
  EXPECT_EQ(must("a[-1]", doc), j(R"({"c":4})"));
  EXPECT_EQ(must("a[1.7].b", doc), j("[2,3]"));
  EXPECT_EQ(must("$", doc), j(doc));
  EXPECT_EQ(must("$$.s", doc), j("\"x\""));
  EXPECT_EQ(must("a.*", doc), j("[1,2,3,4]"));
  EXPECT_EQ(must("$count(a.b)", doc), j("3"));
  EXPECT_EQ(must("$count(nope)", doc), j("0"));
  EXPECT_EQ(must("$exists(nope)", doc), j("false"));
}

TEST(MappingEval, FilterIndexDualityOnSmallArrays) {
  sf::testing::DocGenerator gen(5);
  for (int round = 0; round < 300; ++round) {
    DataNode::Array items;
    const std::size_t n = gen.uniform(0, 5);
    for (std::size_t i = 0; i < n; ++i) items.emplace_back(static_cast<std::int64_t>(gen.uniform(0, 9)));
    const DataNode doc(sf::ObjectMap{{"a", DataNode(items)}});
    const std::string input = sf::serialize_json(doc);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(must("a[" + std::to_string(i) + "]", input), items[i]);
    }
    const std::int64_t threshold = static_cast<std::int64_t>(gen.uniform(0, 9));
    DataNode::Array expected;
    for (const auto& item : items) {
      if (item.as_number() > sf::Decimal(threshold)) expected.push_back(item);
    }
    const auto result = ev("a[$ > " + std::to_string(threshold) + "][]", input);
    if (expected.empty()) {
      EXPECT_FALSE(result) << input;
    } else {
      EXPECT_EQ(*result, DataNode(expected)) << input;
    }
  }
}

TEST(MappingEval, SingletonCollapseWrapsIntoArray) {
  sf::testing::DocGenerator gen(8);
  for (int round = 0; round < 200; ++round) {
    const DataNode value = gen.scalar();
    const DataNode doc(sf::ObjectMap{{"x", DataNode(sf::ObjectMap{{"y", value}})}});
    const std::string input = sf::serialize_json(doc);
    EXPECT_EQ(must("x.y", input), value);
    EXPECT_EQ(must("[x.y]", input), DataNode(DataNode::Array{value}));
  }
}

TEST(MappingEval, ArithmeticAndErrors) {
  EXPECT_EQ(must("7 / 2"), j("3.5"));
  EXPECT_EQ(must("1 / 3 * 3"), j("0.999999999999999999"));
  EXPECT_EQ(must("-7 % 3"), j("-1"));
  EXPECT_EQ(must("0.1 + 0.2"), j("0.3"));
  EXPECT_EQ(must("\"a\" & 1 & true"), j("\"a1true\""));
  EXPECT_EQ(must("1 = \"1\""), j("false"));
  EXPECT_THROW(must("\"a\" + 1"), mp::EvaluationError);
  EXPECT_THROW(must("1 / 0"), mp::EvaluationError);
  EXPECT_THROW(must("1 < \"a\""), mp::EvaluationError);
  EXPECT_THROW(must("$sum([\"x\"])"), mp::EvaluationError);
  EXPECT_THROW(must("[1..20000000]"), mp::EvaluationError);
  EXPECT_THROW(must("($x := 1e60000; $x * $x)"), mp::EvaluationError);
  EXPECT_THROW(must("function($x) { $x }"), mp::EvaluationError);
  try {
    must("1 + (2 * \"z\")");
    FAIL();
  } catch (const mp::EvaluationError& e) {
    EXPECT_EQ(e.span().offset, 9u);  // the offending operand
  }
}

TEST(MappingEval, StringFunctionsCountCodePoints) {
  EXPECT_EQ(must(R"($substring("héllo😀!", 1, 5))"), j("\"éllo😀\""));
  EXPECT_EQ(must(R"($substring("héllo", -2))"), j("\"lo\""));
  EXPECT_EQ(must(R"($uppercase("abé"))"), j("\"ABé\""));
  EXPECT_EQ(must(R"($trim("  a \n b  "))"), j("\"a b\""));
  EXPECT_EQ(must(R"($split("a,b,,c", ","))"), j(R"(["a","b","","c"])"));
  EXPECT_EQ(must(R"($split("a,b,c", ",", 2))"), j(R"(["a","b"])"));
  EXPECT_EQ(must(R"($join(["a","b"], "-"))"), j("\"a-b\""));
  EXPECT_EQ(must(R"($replace("aaa", "a", "b", 2))"), j("\"bba\""));
  EXPECT_EQ(must(R"($contains("haystack", "st"))"), j("true"));
  EXPECT_EQ(must(R"($string(1.50))"), j("\"1.5\""));
  EXPECT_EQ(must(R"($string({"a":[1,"x"]}))"), j(R"("{\"a\":[1,\"x\"]}")"));
  EXPECT_EQ(must(R"($number("1e3"))"), j("1000"));
  EXPECT_THROW(must(R"($number("abc"))"), mp::EvaluationError);
  EXPECT_EQ(must(R"(name.$uppercase())", R"({"name":"x"})"), j("\"X\""));
}

TEST(MappingEval, ObjectAndCollectionFunctions) {
  EXPECT_EQ(must(R"($keys({"b":1,"a":2}))"), j(R"(["b","a"])"));
  EXPECT_EQ(must(R"($values({"b":1,"a":2}))"), j("[1,2]"));
  EXPECT_EQ(must(R"($merge([{"a":1},{"b":2},{"a":3}]))"), j(R"({"a":3,"b":2})"));
  EXPECT_EQ(must("$append([1], 2)"), j("[1,2]"));
  EXPECT_EQ(must("$distinct([1, 2, 1.0, \"1\"])"), j(R"([1,2,"1"])"));
  EXPECT_EQ(must("$boolean([])"), j("false"));
  EXPECT_EQ(must("$boolean(\"0\")"), j("true"));
  EXPECT_EQ(must("$not(0)"), j("true"));
  EXPECT_EQ(must("$max([3, 9, 1])"), j("9"));
  EXPECT_EQ(must("$average([1, 2])"), j("1.5"));
  EXPECT_FALSE(ev("$average([])"));
  EXPECT_EQ(must("$each({\"a\":1,\"b\":2}, function($v, $k) { $k & $v })"), j(R"(["a1","b2"])"));
  EXPECT_EQ(must("$filter([1,2,3,4], function($v, $i) { $i >= 2 })"), j("[3,4]"));
}

TEST(MappingEval, SortIsStable) {
  const char* doc = R"([{"k":2,"n":"a"},{"k":1,"n":"b"},{"k":2,"n":"c"},{"k":1,"n":"d"}])";
  EXPECT_EQ(must("($s := $sort($, function($l, $r) { $l.k > $r.k }); $s.n)", doc), j(R"(["b","d","a","c"])"));
  // A call as the first path step runs once per input item.
  EXPECT_EQ(must("$sort($, function($l, $r) { $l.k > $r.k }).n", doc), j(R"(["a","b","c","d"])"));
  EXPECT_EQ(must("$sort([\"b\", \"a\", \"c\"])"), j(R"(["a","b","c"])"));
  EXPECT_THROW(must("$sort([1, \"a\"])"), mp::EvaluationError);
}

TEST(MappingEval, LambdasClosuresAndRecursion) {
  EXPECT_EQ(must("($f := function($n) { $n <= 1 ? 1 : $n * $f($n - 1) }; $f(10))"), j("3628800"));
  EXPECT_EQ(must("($k := 10; $add := function($x) { $x + $k }; $map([1, 2], $add))"), j("[11,12]"));
  EXPECT_EQ(must("($twice := function($f, $x) { $f($f($x)) }; $twice(function($v) { $v * 3 }, 2))"), j("18"));
  EXPECT_EQ(must("($x := 1; ($x := 2); $x)"), j("1"));
  EXPECT_THROW(must("($f := function($n) { $f($n + 1) }; $f(0))"), mp::EvaluationError);
  mp::EvalOptions small;
  small.max_steps = 1000;
  EXPECT_THROW(mp::evaluate_mapping(mp::parse_mapping("[1..5000].($ * 2)"), DataNode(nullptr), small),
               mp::EvaluationError);
}

TEST(MappingEval, GroupingAndDuplicateKeys) {
  const char* doc = R"({"items":[{"c":"x","p":1},{"c":"y","p":2},{"c":"x","p":3}]})";
  EXPECT_EQ(must("items{c: $sum(p)}", doc), j(R"({"x":4,"y":2})"));
  EXPECT_EQ(must("items{c: p}", doc), j(R"({"x":[1,3],"y":2})"));
  EXPECT_THROW(must(R"({"a": 1, "a": 2})"), mp::EvaluationError);
  EXPECT_THROW(must("items{1: p}", doc), mp::EvaluationError);
}

TEST(MappingEval, PureDeterministicAndThreadSafe) {
  sf::testing::DocGenerator gen(12);
  const auto ast = mp::parse_mapping(R"({"n": $count(*), "s": $string($)})");
  std::vector<DataNode> docs;
  for (int i = 0; i < 40; ++i) docs.push_back(gen.tree(3));
  std::vector<DataNode> expected;
  for (const auto& doc : docs) {
    const DataNode before = doc;
    expected.push_back(*mp::evaluate_mapping(ast, doc));
    EXPECT_EQ(doc, before);
    EXPECT_EQ(*mp::evaluate_mapping(ast, doc), expected.back());
  }
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = 0; i < docs.size(); ++i) {
        if (*mp::evaluate_mapping(ast, docs[i]) != expected[i]) ++mismatches;
      }
    });
  }
  for (auto& thread : threads) thread.join();
  EXPECT_EQ(mismatches.load(), 0);
}

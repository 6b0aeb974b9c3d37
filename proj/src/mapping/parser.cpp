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
#include <functional>
#include <set>

#include "schemaforge/json.hpp"
#include "schemaforge/mapping/mapping.hpp"

namespace schemaforge::mapping {
namespace {

enum class TokenType { End, Name, Variable, String, Number, Value, Operator };

struct Token {
  TokenType type = TokenType::End;
  std::string text;
  Decimal number;
  Span span;
};

bool is_name_start(unsigned char c) { return std::isalpha(c) != 0 || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) { return is_name_start(c) || std::isdigit(c) != 0; }

constexpr std::string_view kOperators[] = {"..", ":=", "!=", "<=", ">=", "**", "~>", ".", "[", "]", "{", "}",
                                           "(",  ")",  ",",  ";",  ":",  "?",  "+",  "-", "*", "/", "%", "=",
                                           "<",  ">",  "&",  "^",  "@",  "#",  "|",  "~"};

class Lexer {
 public:
  explicit Lexer(std::string_view source) : source_(source) {}

  Token next() {
    skip_insignificant();
    Token token;
    token.span.offset = pos_;
    if (pos_ >= source_.size()) return token;
    const auto c = static_cast<unsigned char>(source_[pos_]);

    if (c == '"' || c == '\'') {
      token.type = TokenType::String;
      token.text = read_string(static_cast<char>(c));
    } else if (std::isdigit(c) != 0) {
      token.type = TokenType::Number;
      token.number = read_number();
    } else if (c == '`') {
      const std::size_t end = source_.find('`', pos_ + 1);
      if (end == std::string_view::npos) fail({pos_, 1}, "unterminated quoted name");
      token.type = TokenType::Name;
      token.text = std::string(source_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
    } else if (c == '$') {
      ++pos_;
      token.type = TokenType::Variable;
      if (pos_ < source_.size() && source_[pos_] == '$') {
        token.text = "$";
        ++pos_;
      } else {
        const std::size_t start = pos_;
        while (pos_ < source_.size() && is_name_char(static_cast<unsigned char>(source_[pos_]))) ++pos_;
        token.text = std::string(source_.substr(start, pos_ - start));
      }
    } else if (is_name_start(c)) {
      const std::size_t start = pos_;
      // U+03BB (lambda) is a keyword synonym for "function".
      if (source_.substr(pos_, 2) == "\xCE\xBB") {
        pos_ += 2;
        token.type = TokenType::Name;
        token.text = "function";
        token.span.length = 2;
        return token;
      }
      while (pos_ < source_.size() && is_name_char(static_cast<unsigned char>(source_[pos_]))) ++pos_;
      token.text = std::string(source_.substr(start, pos_ - start));
      token.type = (token.text == "true" || token.text == "false" || token.text == "null") ? TokenType::Value
                                                                                          : TokenType::Name;
    } else {
      for (const auto op : kOperators) {
        if (source_.substr(pos_, op.size()) == op) {
          token.type = TokenType::Operator;
          token.text = std::string(op);
          pos_ += op.size();
          break;
        }
      }
      if (token.type != TokenType::Operator) fail({pos_, 1}, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
    }
    token.span.length = pos_ - token.span.offset;
    return token;
  }

  [[noreturn]] void fail(Span span, const std::string& message) const {
    throw MappingSyntaxError(span, position_of(source_, span.offset), message);
  }

 private:
  void skip_insignificant() {
    while (pos_ < source_.size()) {
      const char c = source_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (source_.substr(pos_, 2) == "/*") {
        const std::size_t end = source_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail({pos_, 2}, "unterminated comment");
        pos_ = end + 2;
      } else {
        return;
      }
    }
  }

  std::string read_string(char quote) {
    const std::size_t start = pos_;
    ++pos_;
    std::string raw;
    raw += '"';
    while (true) {
      if (pos_ >= source_.size()) fail({start, pos_ - start}, "unterminated string literal");
      const char c = source_[pos_];
      if (c == quote) {
        ++pos_;
        break;
      }
      if (c == '\\') {
        if (pos_ + 1 >= source_.size()) fail({start, pos_ - start}, "unterminated string literal");
        const char e = source_[pos_ + 1];
        if (e == '\'') {
          raw += '\'';
        } else {
          raw += c;
          raw += e;
        }
        pos_ += 2;
        continue;
      }
      if (c == '"') {
        raw += "\\\"";
      } else if (c == '\n') {
        raw += "\\n";
      } else if (c == '\r') {
        raw += "\\r";
      } else if (c == '\t') {
        raw += "\\t";
      } else {
        raw += c;
      }
      ++pos_;
    }
    raw += '"';
    try {
      return parse_json(raw).as_string();
    } catch (const ParseError& e) {
      fail({start, pos_ - start}, "invalid string literal: " + e.detail());
    }
  }

  Decimal read_number() {
    const std::size_t start = pos_;
    const auto digit = [&](std::size_t i) { return i < source_.size() && std::isdigit(static_cast<unsigned char>(source_[i])) != 0; };
    while (digit(pos_)) ++pos_;
    if (pos_ < source_.size() && source_[pos_] == '.' && digit(pos_ + 1)) {
      ++pos_;
      while (digit(pos_)) ++pos_;
    }
    if (pos_ < source_.size() && (source_[pos_] == 'e' || source_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < source_.size() && (source_[p] == '+' || source_[p] == '-')) ++p;
      if (digit(p)) {
        pos_ = p;
        while (digit(pos_)) ++pos_;
      }
    }
    auto value = Decimal::parse(source_.substr(start, pos_ - start));
    if (!value) fail({start, pos_ - start}, "invalid number literal");
    return *value;
  }

  std::string_view source_;
  std::size_t pos_ = 0;
};

int binding_power(const Token& token) {
  if (token.type == TokenType::Name) {
    if (token.text == "and") return 30;
    if (token.text == "or") return 25;
    if (token.text == "in") return 40;
    return 0;
  }
  if (token.type != TokenType::Operator) return 0;
  const std::string& op = token.text;
  if (op == "." ) return 75;
  if (op == "[" || op == "(") return 80;
  if (op == "{") return 70;
  if (op == "*" || op == "/" || op == "%") return 60;
  if (op == "+" || op == "-" || op == "&") return 50;
  if (op == "=" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=") return 40;
  if (op == "?" || op == "..") return 20;
  if (op == ":=") return 10;
  if (op == "~>" || op == "^" || op == "@" || op == "#" || op == "|" || op == "**") return 80;
  return 0;
}

Span cover(const Span& a, const Span& b) {
  const std::size_t start = std::min(a.offset, b.offset);
  const std::size_t end = std::max(a.end(), b.end());
  return {start, end - start};
}

class Parser {
 public:
  explicit Parser(std::string_view source) : lexer_(source) { advance(); }

  Node parse() {
    Node root = expression(0);
    if (current_.type != TokenType::End) fail(current_.span, "unexpected token '" + current_.text + "'");
    finish(root);
    return root;
  }

 private:
  [[noreturn]] void fail(Span span, const std::string& message) const { lexer_.fail(span, message); }

  void advance() { current_ = lexer_.next(); }

  bool at_operator(std::string_view op) const { return current_.type == TokenType::Operator && current_.text == op; }

  Span expect(std::string_view op) {
    if (!at_operator(op)) {
      const std::string found = current_.type == TokenType::End ? "end of input" : "'" + current_.text + "'";
      fail(current_.span, "expected '" + std::string(op) + "', found " + found);
    }
    const Span span = current_.span;
    advance();
    return span;
  }

  Node expression(int rbp) {
    Token token = current_;
    advance();
    Node left = nud(token);
    while (rbp < binding_power(current_)) {
      token = current_;
      advance();
      left = led(token, std::move(left));
    }
    return left;
  }

  static Node make(NodeKind kind, Span span) {
    Node node;
    node.kind = kind;
    node.span = span;
    return node;
  }

  static Node as_path(Node step) {
    Node path = make(NodeKind::Path, step.span);
    path.children.push_back(std::move(step));
    return path;
  }

  Node nud(const Token& token) {
    switch (token.type) {
      case TokenType::End:
        fail(token.span, "expected expression");
      case TokenType::Number: {
        Node node = make(NodeKind::Number, token.span);
        node.number = token.number;
        return node;
      }
      case TokenType::String: {
        Node node = make(NodeKind::String, token.span);
        node.text = token.text;
        return node;
      }
      case TokenType::Value: {
        if (token.text == "null") return make(NodeKind::Null, token.span);
        Node node = make(NodeKind::Boolean, token.span);
        node.boolean = token.text == "true";
        return node;
      }
      case TokenType::Name: {
        if (token.text == "function" && at_operator("(")) return lambda(token.span);
        Node name = make(NodeKind::Name, token.span);
        name.text = token.text;
        return as_path(std::move(name));
      }
      case TokenType::Variable: {
        if (token.text.empty()) return make(NodeKind::Context, token.span);
        if (token.text == "$") return make(NodeKind::Root, token.span);
        Node node = make(NodeKind::Variable, token.span);
        node.text = token.text;
        return node;
      }
      case TokenType::Operator:
        break;
    }
    const std::string& op = token.text;
    if (op == "(") return block(token.span);
    if (op == "[") return array(token.span);
    if (op == "{") {
      Node object = make(NodeKind::Object, token.span);
      object.span = cover(token.span, pairs(object.children));
      return object;
    }
    if (op == "-") {
      if (current_.type == TokenType::Number) {
        Node node = make(NodeKind::Number, cover(token.span, current_.span));
        node.number = current_.number.negated();
        advance();
        return node;
      }
      Node operand = expression(70);
      Node node = make(NodeKind::Negate, cover(token.span, operand.span));
      node.children.push_back(std::move(operand));
      return node;
    }
    if (op == "*") return as_path(make(NodeKind::Wildcard, token.span));
    if (op == "**") fail(token.span, "descendant wildcard '**' is not supported");
    if (op == "/") fail(token.span, "regular expression literals are not supported");
    if (op == "%") fail(token.span, "parent operator '%' is not supported");
    fail(token.span, "expected expression");
  }

  Node led(const Token& token, Node left) {
    const std::string& op = token.text;
    if (token.type == TokenType::Name) return binary(token, std::move(left));
    if (op == ".") return path(std::move(left), expression(75));
    if (op == "[") return predicate(std::move(left));
    if (op == "{") {
      Node group = make(NodeKind::Group, left.span);
      group.children.push_back(std::move(left));
      group.span = cover(group.span, pairs(group.children));
      return group;
    }
    if (op == "(") return call(std::move(left));
    if (op == "?") {
      Node node = make(NodeKind::Condition, left.span);
      node.children.push_back(std::move(left));
      node.children.push_back(expression(0));
      if (at_operator(":")) {
        advance();
        node.children.push_back(expression(0));
      }
      node.span = cover(node.span, node.children.back().span);
      return node;
    }
    if (op == ":=") {
      if (left.kind != NodeKind::Variable) fail(left.span, "left side of ':=' must be a variable");
      Node value = expression(9);
      Node node = make(NodeKind::Bind, cover(left.span, value.span));
      node.text = left.text;
      node.children.push_back(std::move(value));
      return node;
    }
    if (op == "~>") fail(token.span, "function chaining '~>' is not supported");
    if (op == "^") fail(token.span, "sort operator '^' is not supported, use $sort");
    if (op == "@" || op == "#") fail(token.span, "'" + op + "' variable binding is not supported");
    if (op == "|") fail(token.span, "transform operator '|' is not supported");
    if (op == "**") fail(token.span, "descendant wildcard '**' is not supported");
    return binary(token, std::move(left));
  }

  Node binary(const Token& token, Node left) {
    Node right = expression(binding_power(token));
    Node node = make(NodeKind::Binary, cover(left.span, right.span));
    node.text = token.text;
    node.children.push_back(std::move(left));
    node.children.push_back(std::move(right));
    return node;
  }

  Node path(Node left, Node right) {
    Node result = left.kind == NodeKind::Path ? std::move(left) : as_path(std::move(left));
    if (right.kind == NodeKind::Path) {
      for (auto& step : right.children) result.children.push_back(std::move(step));
    } else {
      result.children.push_back(std::move(right));
    }
    for (auto& step : result.children) {
      if (step.kind == NodeKind::String) {
        step.kind = NodeKind::Name;
      } else if (step.kind == NodeKind::Number || step.kind == NodeKind::Boolean || step.kind == NodeKind::Null) {
        fail(step.span, "a literal value cannot be used as a path step");
      }
    }
    result.span = cover(result.children.front().span, result.children.back().span);
    return result;
  }

  Node predicate(Node left) {
    Node* target = left.kind == NodeKind::Path ? &left.children.back() : &left;
    if (at_operator("]")) {
      const Span close = current_.span;
      advance();
      target->keep_array = true;
      target->span = cover(target->span, close);
      left.span = cover(left.span, close);
      return left;
    }
    Node condition = expression(0);
    const Span close = expect("]");
    target->stages.push_back(std::move(condition));
    target->span = cover(target->span, close);
    left.span = cover(left.span, close);
    return left;
  }

  Node call(Node callee) {
    if (callee.kind != NodeKind::Variable) fail(callee.span, "only $name(...) function calls are supported");
    Node node = make(NodeKind::Call, callee.span);
    node.text = callee.text;
    if (!at_operator(")")) {
      while (true) {
        node.children.push_back(expression(0));
        if (at_operator(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    node.span = cover(node.span, expect(")"));
    return node;
  }

  Node lambda(Span start) {
    Node node = make(NodeKind::Lambda, start);
    expect("(");
    if (!at_operator(")")) {
      while (true) {
        if (current_.type != TokenType::Variable || current_.text.empty() || current_.text == "$") {
          fail(current_.span, "expected a parameter name like $x");
        }
        node.params.push_back(current_.text);
        advance();
        if (at_operator(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    expect(")");
    expect("{");
    node.children.push_back(expression(0));
    node.span = cover(node.span, expect("}"));
    return node;
  }

  Node block(Span open) {
    Node node = make(NodeKind::Block, open);
    while (!at_operator(")")) {
      node.children.push_back(expression(0));
      if (!at_operator(";")) break;
      advance();
    }
    node.span = cover(node.span, expect(")"));
    return node;
  }

  Node array(Span open) {
    Node node = make(NodeKind::Array, open);
    if (!at_operator("]")) {
      while (true) {
        node.children.push_back(expression(0));
        if (at_operator(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    node.span = cover(node.span, expect("]"));
    return node;
  }

  // Parses "k: v, ..." up to and including '}'; returns the closing span.
  Span pairs(std::vector<Node>& out) {
    if (!at_operator("}")) {
      while (true) {
        out.push_back(expression(0));
        expect(":");
        out.push_back(expression(0));
        if (at_operator(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    return expect("}");
  }

  // Flags that depend on a node's final position in the tree.
  static void finish(Node& node) {
    if (node.kind == NodeKind::Path) {
      Node& first = node.children.front();
      Node& last = node.children.back();
      if (first.kind == NodeKind::Array) first.cons_array = true;
      if (last.kind == NodeKind::Array) last.cons_array = true;
      for (const auto& step : node.children) node.keep_array = node.keep_array || step.keep_array;
    }
    for (auto& child : node.children) finish(child);
    for (auto& stage : node.stages) finish(stage);
  }

  Lexer lexer_;
  Token current_;
};

void collect_bound_names(const Node& node, std::set<std::string>& out) {
  if (node.kind == NodeKind::Bind) out.insert(node.text);
  if (node.kind == NodeKind::Lambda) out.insert(node.params.begin(), node.params.end());
  for (const auto& child : node.children) collect_bound_names(child, out);
  for (const auto& stage : node.stages) collect_bound_names(stage, out);
}

bool is_plain_value(const Node& node) {
  switch (node.kind) {
    case NodeKind::String:
    case NodeKind::Number:
    case NodeKind::Boolean:
    case NodeKind::Null:
    case NodeKind::Object:
    case NodeKind::Array:
      return true;
    default:
      return false;
  }
}

void check_calls(const Node& node, const std::set<std::string>& bound, std::string_view source,
                 SyntaxReport& report) {
  if (node.kind == NodeKind::Call && bound.count(node.text) == 0) {
    const auto add = [&](std::string message) {
      report.valid = false;
      report.diagnostics.push_back({node.span, position_of(source, node.span.offset), std::move(message)});
    };
    const FunctionInfo* info = find_function(node.text);
    const std::size_t argc = node.children.size();
    if (info == nullptr) {
      add("unknown function $" + node.text);
    } else if (!((argc >= info->min_arity && argc <= info->max_arity) ||
                 (info->context_default && argc + 1 == info->min_arity))) {
      std::string expected = std::to_string(info->min_arity);
      if (info->max_arity != info->min_arity) expected += "-" + std::to_string(info->max_arity);
      add("$" + node.text + " expects " + expected + " argument(s), got " + std::to_string(argc));
    } else {
      const std::size_t shift = argc + 1 == info->min_arity && info->context_default ? 1 : 0;
      for (std::size_t i = 0; i < argc; ++i) {
        const std::size_t param = i + shift;
        if (param < info->params.size() && info->params[param] == ArgKind::Function &&
            is_plain_value(node.children[i])) {
          add("argument " + std::to_string(param + 1) + " of $" + node.text + " must be a function");
        }
      }
    }
  }
  for (const auto& child : node.children) check_calls(child, bound, source, report);
  for (const auto& stage : node.stages) check_calls(stage, bound, source, report);
}

}  // namespace

Position position_of(std::string_view source, std::size_t offset) {
  Position position;
  for (std::size_t i = 0; i < offset && i < source.size(); ++i) {
    const auto c = static_cast<unsigned char>(source[i]);
    if (c == '\n') {
      ++position.line;
      position.column = 1;
    } else if ((c & 0xC0) != 0x80) {
      ++position.column;
    }
  }
  return position;
}

MappingAst parse_mapping(std::string_view source) {
  Parser parser(source);
  auto root = std::make_shared<Node>(parser.parse());
  return MappingAst(std::move(root), std::string(source));
}

SyntaxReport validate_syntax(std::string_view source) {
  SyntaxReport report;
  try {
    const MappingAst ast = parse_mapping(source);
    std::set<std::string> bound;
    collect_bound_names(ast.root(), bound);
    check_calls(ast.root(), bound, source, report);
  } catch (const MappingSyntaxError& e) {
    report.valid = false;
    report.diagnostics.push_back({e.span(), e.position(), e.detail()});
  }
  return report;
}

std::string SyntaxReport::to_text() const {
  std::string out;
  for (const auto& d : diagnostics) {
    out += std::to_string(d.position.line) + ":" + std::to_string(d.position.column) + " " + d.message + "\n";
  }
  return out;
}

DataNode SyntaxReport::to_data() const {
  DataNode::Array items;
  for (const auto& d : diagnostics) {
    items.emplace_back(ObjectMap{{"offset", DataNode(static_cast<std::int64_t>(d.span.offset))},
                                 {"length", DataNode(static_cast<std::int64_t>(d.span.length))},
                                 {"line", DataNode(static_cast<std::int64_t>(d.position.line))},
                                 {"column", DataNode(static_cast<std::int64_t>(d.position.column))},
                                 {"message", DataNode(d.message)}});
  }
  return DataNode(ObjectMap{{"valid", DataNode(valid)}, {"diagnostics", DataNode(std::move(items))}});
}

}  // namespace schemaforge::mapping

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
#include "schemaforge/json.hpp"

#include <cstdint>

#include "schemaforge/errors.hpp"

namespace schemaforge {
namespace {

constexpr int kMaxDepth = 1000;

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class JsonParser {
 public:
  explicit JsonParser(std::string_view text) : text_(text) {}

  DataNode parse_document() {
    skip_ws();
    DataNode value = parse_value(0);
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing characters");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t offset) const {
    auto [line, column] = line_column(text_, offset);
    throw ParseError(message, line, column, offset);
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') break;
      ++pos_;
    }
  }

  bool consume_literal(std::string_view word) {
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }

  DataNode parse_value(int depth) {
    if (depth > kMaxDepth) fail("nesting too deep");
    if (pos_ >= text_.size()) fail("unexpected end of input, expected a value");
    switch (text_[pos_]) {
      case '{':
        return parse_object(depth);
      case '[':
        return parse_array(depth);
      case '"':
        return DataNode(parse_string());
      case 't':
        if (consume_literal("true")) return DataNode(true);
        break;
      case 'f':
        if (consume_literal("false")) return DataNode(false);
        break;
      case 'n':
        if (consume_literal("null")) return DataNode(nullptr);
        break;
      default:
        if (text_[pos_] == '-' || (text_[pos_] >= '0' && text_[pos_] <= '9')) return parse_number();
        break;
    }
    fail("unexpected character, expected a value");
  }

  DataNode parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if ((c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.' || c == 'e' || c == 'E') {
        ++pos_;
      } else {
        break;
      }
    }
    auto value = Decimal::parse(text_.substr(start, pos_ - start));
    if (!value) fail_at("invalid number", start);
    return DataNode(*value);
  }

  std::uint32_t parse_hex4() {
    if (pos_ + 4 > text_.size()) fail("truncated \\u escape");
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
      const char c = text_[pos_++];
      value <<= 4;
      if (c >= '0' && c <= '9') {
        value |= static_cast<std::uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        value |= static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        value |= static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        fail("invalid hex digit in \\u escape");
      }
    }
    return value;
  }

  std::string parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string");
      const char c = text_[pos_];
      if (c == '"') {
        ++pos_;
        return out;
      }
      if (static_cast<unsigned char>(c) < 0x20) fail("control character in string");
      if (c != '\\') {
        out += c;
        ++pos_;
        continue;
      }
      ++pos_;
      if (pos_ >= text_.size()) fail("unterminated escape");
      const char e = text_[pos_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case '/': out += '/'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 't': out += '\t'; break;
        case 'u': {
          std::uint32_t cp = parse_hex4();
          if (cp >= 0xD800 && cp <= 0xDBFF) {
            if (text_.substr(pos_, 2) != "\\u") fail("unpaired surrogate");
            pos_ += 2;
            const std::uint32_t low = parse_hex4();
            if (low < 0xDC00 || low > 0xDFFF) fail("invalid low surrogate");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (low - 0xDC00);
          } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
            fail("unpaired surrogate");
          }
          append_utf8(out, cp);
          break;
        }
        default:
          fail_at("invalid escape sequence", pos_ - 2);
      }
    }
  }

  DataNode parse_array(int depth) {
    ++pos_;
    DataNode::Array items;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return DataNode(std::move(items));
    }
    while (true) {
      skip_ws();
      items.push_back(parse_value(depth + 1));
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated array, expected ',' or ']'");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return DataNode(std::move(items));
      }
      fail("expected ',' or ']'");
    }
  }

  DataNode parse_object(int depth) {
    ++pos_;
    ObjectMap members;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '}') {
      ++pos_;
      return DataNode(std::move(members));
    }
    while (true) {
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '"') fail("expected string key");
      const std::size_t key_offset = pos_;
      std::string key = parse_string();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ':') fail("expected ':'");
      ++pos_;
      skip_ws();
      DataNode value = parse_value(depth + 1);
      if (!members.insert(key, std::move(value))) fail_at("duplicate key \"" + key + "\"", key_offset);
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated object, expected ',' or '}'");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == '}') {
        ++pos_;
        return DataNode(std::move(members));
      }
      fail("expected ',' or '}'");
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::size_t string_literal_size(std::string_view text) {
  std::size_t size = 2;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': case '\\': case '\b': case '\f': case '\n': case '\r': case '\t':
        size += 2;
        break;
      default:
        size += c < 0x20 ? 6 : 1;
    }
  }
  return size;
}

void write(std::string& out, const DataNode& node, bool pretty, int indent) {
  const auto newline = [&](int level) {
    out += '\n';
    out.append(static_cast<std::size_t>(level) * 2, ' ');
  };
  switch (node.kind()) {
    case DataNode::Kind::Null:
      out += "null";
      return;
    case DataNode::Kind::Boolean:
      out += node.as_bool() ? "true" : "false";
      return;
    case DataNode::Kind::Number:
      out += node.as_number().to_string();
      return;
    case DataNode::Kind::String:
      append_json_string(out, node.as_string());
      return;
    case DataNode::Kind::Array: {
      const auto& items = node.as_array();
      out += '[';
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ',';
        if (pretty) newline(indent + 1);
        write(out, items[i], pretty, indent + 1);
      }
      if (pretty && !items.empty()) newline(indent);
      out += ']';
      return;
    }
    case DataNode::Kind::Object: {
      const auto& members = node.as_object();
      out += '{';
      bool first = true;
      for (const auto& [key, value] : members) {
        if (!first) out += ',';
        first = false;
        if (pretty) newline(indent + 1);
        append_json_string(out, key);
        out += pretty ? ": " : ":";
        write(out, value, pretty, indent + 1);
      }
      if (pretty && !members.empty()) newline(indent);
      out += '}';
      return;
    }
  }
}

}  // namespace

DataNode parse_json(std::string_view text) { return JsonParser(text).parse_document(); }

void append_json_string(std::string& out, std::string_view text) {
  static constexpr char kHex[] = "0123456789abcdef";
  out += '"';
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          out += "\\u00";
          out += kHex[c >> 4];
          out += kHex[c & 0xF];
        } else {
          out += ch;
        }
    }
  }
  out += '"';
}

std::string serialize_json(const DataNode& doc, JsonStyle style) {
  std::string out;
  write(out, doc, style == JsonStyle::Pretty, 0);
  return out;
}

std::size_t compact_size(const DataNode& doc) {
  switch (doc.kind()) {
    case DataNode::Kind::Null: return 4;
    case DataNode::Kind::Boolean: return doc.as_bool() ? 4 : 5;
    case DataNode::Kind::Number: return doc.as_number().to_string().size();
    case DataNode::Kind::String: return string_literal_size(doc.as_string());
    case DataNode::Kind::Array: {
      const auto& items = doc.as_array();
      std::size_t size = 2 + (items.empty() ? 0 : items.size() - 1);
      for (const auto& item : items) size += compact_size(item);
      return size;
    }
    case DataNode::Kind::Object: {
      const auto& members = doc.as_object();
      std::size_t size = 2 + (members.empty() ? 0 : members.size() - 1);
      for (const auto& [key, value] : members) size += string_literal_size(key) + 1 + compact_size(value);
      return size;
    }
  }
  return 0;
}

}  // namespace schemaforge

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
#include <cstdint>
#include <vector>

#include "schemaforge/errors.hpp"
#include "schemaforge/formats.hpp"

namespace schemaforge {
namespace {

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) { return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.'; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return std::string(s.substr(begin, end - begin));
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

class XmlParser {
 public:
  explicit XmlParser(std::string_view text) : text_(text) {}

  DataNode parse() {
    skip_misc();
    if (!at("<") || at("</")) fail("expected root element");
    std::string name;
    DataNode value = parse_element(name, 0);
    skip_misc();
    if (pos_ != text_.size()) fail("content after root element");
    ObjectMap root;
    root.insert(std::move(name), std::move(value));
    return DataNode(std::move(root));
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, line, column, pos_);
  }

  bool at(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void expect(std::string_view s) {
    if (!at(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  void skip_until(std::string_view terminator, const char* what) {
    const std::size_t end = text_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = end + terminator.size();
  }

  void skip_doctype() {
    int bracket_depth = 0;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '[') ++bracket_depth;
      if (c == ']') --bracket_depth;
      if (c == '>' && bracket_depth == 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  // Prolog, comments, processing instructions and whitespace outside the root.
  void skip_misc() {
    while (true) {
      skip_ws();
      if (at("<?")) {
        skip_until("?>", "processing instruction");
      } else if (at("<!--")) {
        skip_until("-->", "comment");
      } else if (at("<!DOCTYPE")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  std::string parse_name() {
    if (pos_ >= text_.size() || !is_name_start(text_[pos_])) fail("expected a name");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void parse_reference(std::string& out) {
    const std::size_t start = pos_;
    const std::size_t end = text_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 12) fail("malformed entity reference");
    const std::string_view entity = text_.substr(pos_ + 1, end - pos_ - 1);
    pos_ = end + 1;
    if (entity == "lt") { out += '<'; return; }
    if (entity == "gt") { out += '>'; return; }
    if (entity == "amp") { out += '&'; return; }
    if (entity == "quot") { out += '"'; return; }
    if (entity == "apos") { out += '\''; return; }
    if (!entity.empty() && entity[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = entity.size() > 1 && entity[1] == 'x';
      const std::string_view digits = entity.substr(hex ? 2 : 1);
      if (digits.empty()) {
        pos_ = start;
        fail("malformed character reference");
      }
      for (const char c : digits) {
        std::uint32_t d = 0;
        if (c >= '0' && c <= '9') {
          d = static_cast<std::uint32_t>(c - '0');
        } else if (hex && c >= 'a' && c <= 'f') {
          d = static_cast<std::uint32_t>(c - 'a' + 10);
        } else if (hex && c >= 'A' && c <= 'F') {
          d = static_cast<std::uint32_t>(c - 'A' + 10);
        } else {
          pos_ = start;
          fail("malformed character reference");
        }
        cp = cp * (hex ? 16 : 10) + d;
        if (cp > 0x10FFFF) {
          pos_ = start;
          fail("character reference out of range");
        }
      }
      append_utf8(out, cp);
      return;
    }
    pos_ = start;
    fail("unknown entity '&" + std::string(entity) + ";'");
  }

  std::string parse_attribute_value() {
    if (pos_ >= text_.size() || (text_[pos_] != '"' && text_[pos_] != '\'')) fail("expected quoted attribute value");
    const char quote = text_[pos_++];
    std::string value;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated attribute value");
      const char c = text_[pos_];
      if (c == quote) {
        ++pos_;
        return value;
      }
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        parse_reference(value);
      } else {
        value += c;
        ++pos_;
      }
    }
  }

  // On entry pos_ is at '<'. Returns the element's value; its name goes to `name`.
  DataNode parse_element(std::string& name, int depth) {
    if (depth > 512) fail("nesting too deep");
    expect("<");
    name = parse_name();
    ObjectMap members;
    bool has_attributes = false;
    while (true) {
      const std::size_t before = pos_;
      skip_ws();
      if (at("/>")) {
        pos_ += 2;
        return has_attributes ? DataNode(std::move(members)) : DataNode(nullptr);
      }
      if (at(">")) {
        ++pos_;
        break;
      }
      if (pos_ == before) fail("expected whitespace, '>' or '/>'");
      const std::string attribute = parse_name();
      skip_ws();
      expect("=");
      skip_ws();
      std::string value = parse_attribute_value();
      if (!members.insert("@" + attribute, DataNode(std::move(value)))) fail("duplicate attribute '" + attribute + "'");
      has_attributes = true;
    }

    // Children grouped by name in first-appearance order.
    std::vector<std::pair<std::string, std::vector<DataNode>>> children;
    std::string text;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated element <" + name + ">");
      if (at("</")) {
        pos_ += 2;
        const std::string closing = parse_name();
        if (closing != name) fail("mismatched closing tag </" + closing + ">, expected </" + name + ">");
        skip_ws();
        expect(">");
        break;
      }
      if (at("<!--")) {
        skip_until("-->", "comment");
      } else if (at("<![CDATA[")) {
        pos_ += 9;
        const std::size_t end = text_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        text += text_.substr(pos_, end - pos_);
        pos_ = end + 3;
      } else if (at("<?")) {
        skip_until("?>", "processing instruction");
      } else if (at("<")) {
        std::string child_name;
        DataNode child = parse_element(child_name, depth + 1);
        bool placed = false;
        for (auto& group : children) {
          if (group.first == child_name) {
            group.second.push_back(std::move(child));
            placed = true;
            break;
          }
        }
        if (!placed) children.emplace_back(std::move(child_name), std::vector<DataNode>{std::move(child)});
      } else if (at("&")) {
        parse_reference(text);
      } else {
        text += text_[pos_++];
      }
    }

    std::string trimmed = trim(text);
    if (!has_attributes && children.empty()) {
      return trimmed.empty() ? DataNode(nullptr) : DataNode(std::move(trimmed));
    }
    for (auto& [child_name, values] : children) {
      DataNode value = values.size() == 1 ? std::move(values[0]) : DataNode(std::move(values));
      if (!members.insert(child_name, std::move(value))) {
        fail("element <" + child_name + "> collides with an attribute key");
      }
    }
    if (!trimmed.empty()) members.insert("#text", DataNode(std::move(trimmed)));
    return DataNode(std::move(members));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

DataNode from_xml(std::string_view text) { return XmlParser(text).parse(); }

}  // namespace schemaforge

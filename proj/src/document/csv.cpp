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
#include <optional>
#include <vector>

#include "schemaforge/errors.hpp"
#include "schemaforge/formats.hpp"

namespace schemaforge {
namespace {

struct Cell {
  std::string text;
  bool quoted = false;
};

struct Record {
  std::vector<Cell> cells;
  std::size_t line = 1;
};

std::vector<Record> split_records(std::string_view text, char delimiter) {
  std::vector<Record> records;
  Record current;
  Cell cell;
  std::size_t line = 1;
  std::size_t column = 1;
  current.line = line;
  bool record_has_content = false;
  std::size_t pos = 0;

  const auto end_cell = [&] {
    current.cells.push_back(std::move(cell));
    cell = Cell{};
  };
  const auto end_record = [&] {
    end_cell();
    // Blank lines are skipped.
    const bool blank = current.cells.size() == 1 && current.cells[0].text.empty() && !current.cells[0].quoted;
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    current.line = line;
    record_has_content = false;
  };

  while (pos < text.size()) {
    const char c = text[pos];
    if (c == '"' && cell.text.empty() && !cell.quoted) {
      cell.quoted = true;
      const std::size_t quote_line = line;
      const std::size_t quote_column = column;
      ++pos;
      ++column;
      bool closed = false;
      while (pos < text.size()) {
        const char q = text[pos];
        if (q == '"') {
          if (pos + 1 < text.size() && text[pos + 1] == '"') {
            cell.text += '"';
            pos += 2;
            column += 2;
            continue;
          }
          ++pos;
          ++column;
          closed = true;
          break;
        }
        if (q == '\n') {
          ++line;
          column = 1;
        } else {
          ++column;
        }
        cell.text += q;
        ++pos;
      }
      if (!closed) throw ParseError("unterminated quoted field", quote_line, quote_column, pos);
      if (pos < text.size() && text[pos] != delimiter && text[pos] != '\n' && text[pos] != '\r') {
        throw ParseError("unexpected character after closing quote", line, column, pos);
      }
      record_has_content = true;
      continue;
    }
    if (c == delimiter) {
      end_cell();
      record_has_content = true;
      ++pos;
      ++column;
      continue;
    }
    if (c == '\r' || c == '\n') {
      if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      ++pos;
      ++line;
      column = 1;
      end_record();
      continue;
    }
    if (cell.quoted) throw ParseError("unexpected character after closing quote", line, column, pos);
    cell.text += c;
    record_has_content = true;
    ++pos;
    ++column;
  }
  if (record_has_content || !cell.text.empty()) end_record();
  return records;
}

bool is_integer_text(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

DataNode sniff(const Cell& cell) {
  if (cell.quoted) return DataNode(cell.text);
  if (cell.text.empty()) return DataNode(nullptr);
  if (cell.text == "true") return DataNode(true);
  if (cell.text == "false") return DataNode(false);
  if (is_integer_text(cell.text)) {
    if (auto value = Decimal::parse(cell.text, true)) return DataNode(*value);
  }
  if (auto value = Decimal::parse(cell.text, true)) return DataNode(*value);
  return DataNode(cell.text);
}

}  // namespace

DataNode from_csv(std::string_view text, const CsvOptions& options) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Record> records = split_records(text, options.delimiter);
  DataNode::Array rows;
  if (records.empty()) return DataNode(std::move(rows));

  std::vector<std::string> keys;
  std::size_t first_data = 0;
  if (options.header) {
    for (const auto& cell : records[0].cells) {
      for (const auto& existing : keys) {
        if (existing == cell.text) {
          throw ParseError("duplicate header name \"" + cell.text + "\"", records[0].line, 1);
        }
      }
      keys.push_back(cell.text);
    }
    first_data = 1;
  } else {
    for (std::size_t i = 0; i < records[0].cells.size(); ++i) keys.push_back("col" + std::to_string(i + 1));
  }

  rows.reserve(records.size() - first_data);
  for (std::size_t r = first_data; r < records.size(); ++r) {
    const auto& record = records[r];
    if (record.cells.size() != keys.size()) {
      throw ParseError("ragged row " + std::to_string(r) + ": expected " + std::to_string(keys.size()) +
                           " fields, found " + std::to_string(record.cells.size()),
                       record.line, 1);
    }
    ObjectMap row;
    row.reserve(keys.size());
    for (std::size_t c = 0; c < keys.size(); ++c) row.insert(keys[c], sniff(record.cells[c]));
    rows.emplace_back(std::move(row));
  }
  return DataNode(std::move(rows));
}

}  // namespace schemaforge

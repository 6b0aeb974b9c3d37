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
#include <stdexcept>
#include <string>

namespace schemaforge {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text could not be parsed (JSON, YAML, XML, CSV). Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column, std::size_t offset = 0)
      : Error(std::to_string(line) + ":" + std::to_string(column) + " " + message),
        detail_(message), line_(line), column_(column), offset_(offset) {}

  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
  std::size_t offset_;
};

/// Input is syntactically fine but uses something we do not model.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A required input was missing or a precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace schemaforge

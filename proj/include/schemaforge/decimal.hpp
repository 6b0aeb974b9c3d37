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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace schemaforge {

/// Finite base-10 number: coefficient * 10^exponent.
///
/// Values are kept normalized (no trailing zeros in the coefficient, zero has
/// exponent 0), so two equal values always have identical fields. Results of
/// arithmetic are rounded half-to-even to kMaxDigits significant digits.
class Decimal {
 public:
  static constexpr int kMaxDigits = 18;
  static constexpr std::int32_t kMaxExponent = 100000;

  constexpr Decimal() = default;
  Decimal(std::int64_t value);  // NOLINT(google-explicit-constructor)

  /// Builds coefficient * 10^exponent, rounding the coefficient when needed.
  static Decimal from_parts(__int128 coefficient, std::int64_t exponent);

  /// Parses the JSON number grammar, optionally with a leading '+' and
  /// without an integer part (".5"). Returns nullopt for anything else.
  static std::optional<Decimal> parse(std::string_view text, bool lenient = false);

  std::int64_t coefficient() const noexcept { return coefficient_; }
  std::int32_t exponent() const noexcept { return exponent_; }

  bool is_zero() const noexcept { return coefficient_ == 0; }
  bool is_negative() const noexcept { return coefficient_ < 0; }
  bool is_integer() const noexcept { return exponent_ >= 0; }

  /// Integer value if this is an integer that fits in int64.
  std::optional<std::int64_t> to_int64() const;
  double to_double() const;

  Decimal floor() const;
  Decimal negated() const;
  Decimal abs() const { return is_negative() ? negated() : *this; }

  /// Shortest round-tripping text, same layout rules as ECMAScript
  /// Number.prototype.toString (plain between 1e-7 and 1e21).
  std::string to_string() const;

  friend Decimal operator+(const Decimal& a, const Decimal& b);
  friend Decimal operator-(const Decimal& a, const Decimal& b);
  friend Decimal operator*(const Decimal& a, const Decimal& b);
  /// Throws std::domain_error on division by zero.
  friend Decimal operator/(const Decimal& a, const Decimal& b);
  /// Remainder with the sign of the dividend. Throws std::domain_error on zero divisor.
  friend Decimal operator%(const Decimal& a, const Decimal& b);

  friend bool operator==(const Decimal& a, const Decimal& b) noexcept {
    return a.coefficient_ == b.coefficient_ && a.exponent_ == b.exponent_;
  }
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) noexcept;

 private:
  std::int64_t coefficient_ = 0;
  std::int32_t exponent_ = 0;
};

}  // namespace schemaforge

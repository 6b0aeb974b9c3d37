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
#include "schemaforge/decimal.hpp"

#include <array>
#include <cstdlib>
#include <stdexcept>

namespace schemaforge {
namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr std::array<u128, 39> make_powers() {
  std::array<u128, 39> powers{};
  u128 value = 1;
  for (auto& p : powers) {
    p = value;
    value *= 10;
  }
  return powers;
}

constexpr auto kPow10 = make_powers();

int digit_count(u128 value) {
  int digits = 1;
  while (digits < 39 && value >= kPow10[digits]) ++digits;
  return digits;
}

u128 magnitude(i128 value) { return value < 0 ? static_cast<u128>(-value) : static_cast<u128>(value); }

std::string u128_to_string(u128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return out;
}

// Rounds `value` (half-to-even) after removing `drop` low digits.
u128 shift_right_rounded(u128 value, int drop) {
  if (drop <= 0) return value;
  if (drop > 38) return 0;
  const u128 divisor = kPow10[drop];
  u128 quotient = value / divisor;
  const u128 remainder = value % divisor;
  const u128 half = divisor / 2;
  if (remainder > half || (remainder == half && (quotient & 1) != 0)) ++quotient;
  return quotient;
}

}  // namespace

Decimal::Decimal(std::int64_t value) { *this = from_parts(value, 0); }

Decimal Decimal::from_parts(__int128 coefficient, std::int64_t exponent) {
  Decimal out;
  if (coefficient == 0) return out;
  const bool negative = coefficient < 0;
  u128 mag = magnitude(coefficient);
  int digits = digit_count(mag);
  if (digits > kMaxDigits) {
    const int drop = digits - kMaxDigits;
    mag = shift_right_rounded(mag, drop);
    exponent += drop;
    if (mag == kPow10[kMaxDigits]) {
      mag /= 10;
      ++exponent;
    }
  }
  while (mag % 10 == 0) {
    mag /= 10;
    ++exponent;
  }
  digits = digit_count(mag);
  if (exponent + digits - 1 > kMaxExponent) throw std::overflow_error("number out of range");
  if (exponent + digits - 1 < -kMaxExponent) return out;
  out.coefficient_ = negative ? -static_cast<std::int64_t>(mag) : static_cast<std::int64_t>(mag);
  out.exponent_ = static_cast<std::int32_t>(exponent);
  return out;
}

std::optional<Decimal> Decimal::parse(std::string_view text, bool lenient) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || (lenient && text[pos] == '+'))) {
    negative = text[pos] == '-';
    ++pos;
  }
  const auto is_digit = [&](std::size_t i) { return i < text.size() && text[i] >= '0' && text[i] <= '9'; };

  u128 coefficient = 0;
  int kept = 0;
  bool sticky = false;
  std::int64_t exponent = 0;
  auto push_digit = [&](char c, bool fractional) {
    const int d = c - '0';
    if (kept == 0 && d == 0) {
      if (fractional) --exponent;
      return;
    }
    if (kept < 36) {
      coefficient = coefficient * 10 + static_cast<unsigned>(d);
      ++kept;
      if (fractional) --exponent;
    } else {
      if (d != 0) sticky = true;
      if (!fractional) ++exponent;
    }
  };

  const std::size_t int_start = pos;
  if (!lenient && is_digit(pos) && text[pos] == '0' && is_digit(pos + 1)) return std::nullopt;
  while (is_digit(pos)) push_digit(text[pos++], false);
  const bool has_int = pos > int_start;
  bool has_frac = false;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t frac_start = pos;
    while (is_digit(pos)) push_digit(text[pos++], true);
    has_frac = pos > frac_start;
    if (!has_frac) return std::nullopt;
  }
  if (!has_int && !(lenient && has_frac)) return std::nullopt;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_negative = text[pos] == '-';
      ++pos;
    }
    if (!is_digit(pos)) return std::nullopt;
    std::int64_t e = 0;
    while (is_digit(pos)) {
      if (e < 1000000000) e = e * 10 + (text[pos] - '0');
      ++pos;
    }
    exponent += exp_negative ? -e : e;
  }
  if (pos != text.size()) return std::nullopt;
  if (coefficient == 0) return Decimal{};
  if (sticky) {
    coefficient = coefficient * 10 + 1;
    --exponent;
  }
  const i128 signed_coefficient = negative ? -static_cast<i128>(coefficient) : static_cast<i128>(coefficient);
  try {
    return from_parts(signed_coefficient, exponent);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

std::optional<std::int64_t> Decimal::to_int64() const {
  if (exponent_ < 0) return std::nullopt;
  if (exponent_ > 18) return std::nullopt;
  const i128 value = static_cast<i128>(coefficient_) * static_cast<i128>(kPow10[exponent_]);
  if (value > INT64_MAX || value < INT64_MIN) return std::nullopt;
  return static_cast<std::int64_t>(value);
}

double Decimal::to_double() const { return std::strtod(to_string().c_str(), nullptr); }

Decimal Decimal::negated() const {
  Decimal out = *this;
  out.coefficient_ = -coefficient_;
  return out;
}

Decimal Decimal::floor() const {
  if (exponent_ >= 0) return *this;
  const int drop = -exponent_;
  if (drop > 18) return is_negative() ? Decimal(-1) : Decimal{};
  const auto divisor = static_cast<std::int64_t>(kPow10[drop]);
  std::int64_t quotient = coefficient_ / divisor;
  if (coefficient_ < 0 && coefficient_ % divisor != 0) --quotient;
  return from_parts(quotient, 0);
}

std::string Decimal::to_string() const {
  if (coefficient_ == 0) return "0";
  const std::string digits = u128_to_string(magnitude(coefficient_));
  const auto k = static_cast<std::int64_t>(digits.size());
  const std::int64_t n = exponent_ + k;
  std::string out = coefficient_ < 0 ? "-" : "";
  if (k <= n && n <= 21) {
    out += digits;
    out.append(static_cast<std::size_t>(n - k), '0');
  } else if (0 < n && n <= 21) {
    out += digits.substr(0, static_cast<std::size_t>(n));
    out += '.';
    out += digits.substr(static_cast<std::size_t>(n));
  } else if (-6 < n && n <= 0) {
    out += "0.";
    out.append(static_cast<std::size_t>(-n), '0');
    out += digits;
  } else {
    const std::int64_t e = n - 1;
    out += digits[0];
    if (k > 1) {
      out += '.';
      out += digits.substr(1);
    }
    out += e >= 0 ? "e+" : "e-";
    out += std::to_string(e >= 0 ? e : -e);
  }
  return out;
}

Decimal operator+(const Decimal& a, const Decimal& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const Decimal& high = a.exponent_ >= b.exponent_ ? a : b;
  const Decimal& low = a.exponent_ >= b.exponent_ ? b : a;
  const std::int64_t diff = static_cast<std::int64_t>(high.exponent_) - low.exponent_;
  const int scale = static_cast<int>(diff > 19 ? 19 : diff);
  const i128 high_scaled = static_cast<i128>(high.coefficient_) * static_cast<i128>(kPow10[scale]);
  const int residual = static_cast<int>(diff - scale);
  i128 low_scaled = low.coefficient_;
  if (residual > 0) {
    const u128 shifted = shift_right_rounded(magnitude(low_scaled), residual);
    low_scaled = low.coefficient_ < 0 ? -static_cast<i128>(shifted) : static_cast<i128>(shifted);
  }
  return Decimal::from_parts(high_scaled + low_scaled, static_cast<std::int64_t>(high.exponent_) - scale);
}

Decimal operator-(const Decimal& a, const Decimal& b) { return a + b.negated(); }

Decimal operator*(const Decimal& a, const Decimal& b) {
  const i128 product = static_cast<i128>(a.coefficient_) * static_cast<i128>(b.coefficient_);
  return Decimal::from_parts(product, static_cast<std::int64_t>(a.exponent_) + b.exponent_);
}

Decimal operator/(const Decimal& a, const Decimal& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_zero()) return Decimal{};
  const u128 numerator_mag = magnitude(a.coefficient_);
  const u128 divisor = magnitude(b.coefficient_);
  const int scale = 36 - digit_count(numerator_mag);
  const u128 numerator = numerator_mag * kPow10[scale];
  u128 quotient = numerator / divisor;
  u128 remainder = numerator % divisor;
  quotient = quotient * 10 + (remainder * 10) / divisor;
  remainder = (remainder * 10) % divisor;
  quotient = quotient * 10 + (remainder != 0 ? 1 : 0);
  const bool negative = (a.coefficient_ < 0) != (b.coefficient_ < 0);
  const i128 signed_quotient = negative ? -static_cast<i128>(quotient) : static_cast<i128>(quotient);
  return Decimal::from_parts(signed_quotient,
                             static_cast<std::int64_t>(a.exponent_) - b.exponent_ - scale - 2);
}

Decimal operator%(const Decimal& a, const Decimal& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_zero()) return Decimal{};
  const u128 am = magnitude(a.coefficient_);
  const u128 bm = magnitude(b.coefficient_);
  u128 remainder = 0;
  std::int64_t exponent = 0;
  if (a.exponent_ >= b.exponent_) {
    // (am * 10^d) mod bm, computed without overflow.
    std::int64_t d = static_cast<std::int64_t>(a.exponent_) - b.exponent_;
    u128 factor = 1;
    u128 base = 10 % bm;
    while (d > 0) {
      if (d & 1) factor = (factor * base) % bm;
      base = (base * base) % bm;
      d >>= 1;
    }
    remainder = ((am % bm) * factor) % bm;
    exponent = b.exponent_;
  } else {
    const std::int64_t d = static_cast<std::int64_t>(b.exponent_) - a.exponent_;
    if (d > 19) return a;
    remainder = am % (bm * kPow10[d]);
    exponent = a.exponent_;
  }
  const i128 signed_remainder = a.coefficient_ < 0 ? -static_cast<i128>(remainder) : static_cast<i128>(remainder);
  return Decimal::from_parts(signed_remainder, exponent);
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) noexcept {
  const int sa = a.coefficient_ < 0 ? -1 : (a.coefficient_ > 0 ? 1 : 0);
  const int sb = b.coefficient_ < 0 ? -1 : (b.coefficient_ > 0 ? 1 : 0);
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  const u128 am = magnitude(a.coefficient_);
  const u128 bm = magnitude(b.coefficient_);
  const int ka = digit_count(am);
  const int kb = digit_count(bm);
  const std::int64_t order_a = static_cast<std::int64_t>(a.exponent_) + ka;
  const std::int64_t order_b = static_cast<std::int64_t>(b.exponent_) + kb;
  std::strong_ordering magnitude_order = std::strong_ordering::equal;
  if (order_a != order_b) {
    magnitude_order = order_a <=> order_b;
  } else {
    const u128 pa = am * kPow10[Decimal::kMaxDigits - ka];
    const u128 pb = bm * kPow10[Decimal::kMaxDigits - kb];
    magnitude_order = pa <=> pb;
  }
  if (sa > 0) return magnitude_order;
  return 0 <=> magnitude_order;
}

}  // namespace schemaforge

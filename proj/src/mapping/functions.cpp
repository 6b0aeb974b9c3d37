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
#include <algorithm>

#include "runtime.hpp"
#include "schemaforge/json.hpp"

namespace schemaforge::mapping {
namespace {

using detail::Evaluator;
using detail::Value;
using Args = std::vector<Value>;

[[noreturn]] void type_error(const Span& span, const std::string& fn, const std::string& what) {
  throw EvaluationError(span, "$" + fn + ": " + what);
}

DataNode data(const Value& v, const Span& span) { return *detail::to_data(v, span); }

std::vector<Decimal> numbers(const Value& v, const Span& span, const std::string& fn) {
  std::vector<Decimal> out;
  for (const auto& e : detail::spread(v)) {
    if (!e.is_number()) type_error(span, fn, "expects an array of numbers");
    out.push_back(e.as_number());
  }
  return out;
}

const std::string* string_arg(const Value& v, const Span& span, const std::string& fn) {
  if (v.is_undefined()) return nullptr;
  if (!v.is_item() || !v.item.is_string()) type_error(span, fn, "expects a string");
  return &v.item.as_string();
}

std::vector<std::size_t> code_point_offsets(const std::string& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(s.size());
  return out;
}

Value fn_sum(Evaluator&, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  Decimal total;
  for (const auto& d : numbers(a[0], s, "sum")) total = total + d;
  return Value::of(DataNode(total));
}

Value extreme(Args& a, const Span& s, const std::string& name, bool want_max) {
  const auto nums = numbers(a[0], s, name);
  if (nums.empty()) return Value::undefined();
  Decimal best = nums.front();
  for (const auto& d : nums) {
    if (want_max ? d > best : d < best) best = d;
  }
  return Value::of(DataNode(best));
}

Value fn_max(Evaluator&, Args& a, const Span& s) { return extreme(a, s, "max", true); }
Value fn_min(Evaluator&, Args& a, const Span& s) { return extreme(a, s, "min", false); }

Value fn_average(Evaluator&, Args& a, const Span& s) {
  const auto nums = numbers(a[0], s, "average");
  if (nums.empty()) return Value::undefined();
  Decimal total;
  for (const auto& d : nums) total = total + d;
  return Value::of(DataNode(total / Decimal(static_cast<std::int64_t>(nums.size()))));
}

Value fn_count(Evaluator&, Args& a, const Span&) {
  return Value::of(DataNode(static_cast<std::int64_t>(detail::spread(a[0]).size())));
}

Value fn_string(Evaluator&, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  if (a[0].is_function()) return Value::of(DataNode(""));
  return Value::of(DataNode(detail::to_text(data(a[0], s))));
}

Value fn_number(Evaluator&, Args& a, const Span& s) {
  const Value& v = a[0];
  if (v.is_undefined()) return v;
  if (v.is_item()) {
    if (v.item.is_number()) return v;
    if (v.item.is_bool()) return Value::of(DataNode(v.item.as_bool() ? 1 : 0));
    if (v.item.is_string()) {
      if (auto d = Decimal::parse(v.item.as_string())) return Value::of(DataNode(*d));
      type_error(s, "number", "cannot convert \"" + v.item.as_string() + "\" to a number");
    }
  }
  type_error(s, "number", "cannot convert value to a number");
}

Value fn_boolean(Evaluator&, Args& a, const Span&) {
  if (a[0].is_undefined()) return Value::undefined();
  return Value::of(DataNode(detail::truthy(a[0])));
}

Value fn_not(Evaluator&, Args& a, const Span&) {
  if (a[0].is_undefined()) return Value::undefined();
  return Value::of(DataNode(!detail::truthy(a[0])));
}

Value fn_exists(Evaluator&, Args& a, const Span&) { return Value::of(DataNode(!a[0].is_undefined())); }

Value map_ascii(Args& a, const Span& s, const std::string& name, int (*f)(int)) {
  const std::string* str = string_arg(a[0], s, name);
  if (str == nullptr) return Value::undefined();
  std::string out = *str;
  for (char& c : out) {
    if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(f(static_cast<unsigned char>(c)));
  }
  return Value::of(DataNode(std::move(out)));
}

Value fn_uppercase(Evaluator&, Args& a, const Span& s) { return map_ascii(a, s, "uppercase", ::toupper); }
Value fn_lowercase(Evaluator&, Args& a, const Span& s) { return map_ascii(a, s, "lowercase", ::tolower); }

Value fn_trim(Evaluator&, Args& a, const Span& s) {
  const std::string* str = string_arg(a[0], s, "trim");
  if (str == nullptr) return Value::undefined();
  std::string out;
  bool pending_space = false;
  for (const char c : *str) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return Value::of(DataNode(std::move(out)));
}

std::int64_t int_arg(const Value& v, const Span& s, const std::string& fn) {
  if (!v.is_item() || !v.item.is_number()) type_error(s, fn, "expects a number argument");
  auto i = v.item.as_number().floor().to_int64();
  if (!i) type_error(s, fn, "number argument out of range");
  return *i;
}

Value fn_substring(Evaluator&, Args& a, const Span& s) {
  const std::string* str = string_arg(a[0], s, "substring");
  if (str == nullptr) return Value::undefined();
  const auto offsets = code_point_offsets(*str);
  const auto n = static_cast<std::int64_t>(offsets.size() - 1);
  std::int64_t start = int_arg(a[1], s, "substring");
  if (start < 0) start = std::max<std::int64_t>(0, n + start);
  start = std::min(start, n);
  std::int64_t end = n;
  if (a.size() > 2 && !a[2].is_undefined()) {
    const std::int64_t len = int_arg(a[2], s, "substring");
    end = len <= 0 ? start : std::min(n, start + len);
  }
  return Value::of(DataNode(str->substr(offsets[start], offsets[end] - offsets[start])));
}

Value fn_split(Evaluator&, Args& a, const Span& s) {
  const std::string* str = string_arg(a[0], s, "split");
  if (str == nullptr) return Value::undefined();
  const std::string* sep = string_arg(a[1], s, "split");
  if (sep == nullptr) type_error(s, "split", "separator must be a string");
  std::size_t limit = SIZE_MAX;
  if (a.size() > 2 && !a[2].is_undefined()) {
    const std::int64_t l = int_arg(a[2], s, "split");
    if (l < 0) type_error(s, "split", "limit must not be negative");
    limit = static_cast<std::size_t>(l);
  }
  DataNode::Array out;
  if (sep->empty()) {
    const auto offsets = code_point_offsets(*str);
    for (std::size_t i = 0; i + 1 < offsets.size() && out.size() < limit; ++i) {
      out.emplace_back(str->substr(offsets[i], offsets[i + 1] - offsets[i]));
    }
  } else {
    std::size_t pos = 0;
    while (out.size() < limit) {
      const std::size_t hit = str->find(*sep, pos);
      if (hit == std::string::npos) {
        out.emplace_back(str->substr(pos));
        break;
      }
      out.emplace_back(str->substr(pos, hit - pos));
      pos = hit + sep->size();
    }
  }
  return Value::of(DataNode(std::move(out)));
}

Value fn_join(Evaluator&, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  std::string sep;
  if (a.size() > 1 && !a[1].is_undefined()) sep = *string_arg(a[1], s, "join");
  std::string out;
  bool first = true;
  for (const auto& e : detail::spread(a[0])) {
    if (!e.is_string()) type_error(s, "join", "expects an array of strings");
    if (!first) out += sep;
    out += e.as_string();
    first = false;
  }
  return Value::of(DataNode(std::move(out)));
}

Value fn_contains(Evaluator&, Args& a, const Span& s) {
  const std::string* str = string_arg(a[0], s, "contains");
  if (str == nullptr) return Value::undefined();
  const std::string* pattern = string_arg(a[1], s, "contains");
  if (pattern == nullptr) type_error(s, "contains", "pattern must be a string");
  return Value::of(DataNode(str->find(*pattern) != std::string::npos));
}

Value fn_replace(Evaluator&, Args& a, const Span& s) {
  const std::string* str = string_arg(a[0], s, "replace");
  if (str == nullptr) return Value::undefined();
  const std::string* pattern = string_arg(a[1], s, "replace");
  if (pattern == nullptr || pattern->empty()) type_error(s, "replace", "pattern must be a non-empty string");
  const std::string* replacement = string_arg(a[2], s, "replace");
  if (replacement == nullptr) type_error(s, "replace", "replacement must be a string");
  std::size_t limit = SIZE_MAX;
  if (a.size() > 3 && !a[3].is_undefined()) {
    const std::int64_t l = int_arg(a[3], s, "replace");
    if (l < 0) type_error(s, "replace", "limit must not be negative");
    limit = static_cast<std::size_t>(l);
  }
  std::string out;
  std::size_t pos = 0;
  std::size_t count = 0;
  while (count < limit) {
    const std::size_t hit = str->find(*pattern, pos);
    if (hit == std::string::npos) break;
    out.append(*str, pos, hit - pos);
    out += *replacement;
    pos = hit + pattern->size();
    ++count;
  }
  out.append(*str, pos, std::string::npos);
  return Value::of(DataNode(std::move(out)));
}

Value fn_keys(Evaluator&, Args& a, const Span&) {
  std::vector<DataNode> out;
  std::vector<std::string> seen;
  for (const auto& e : detail::spread(a[0])) {
    if (!e.is_object()) continue;
    for (const auto& [key, value] : e.as_object()) {
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      out.emplace_back(key);
    }
  }
  return Value::sequence(std::move(out));
}

Value fn_values(Evaluator&, Args& a, const Span&) {
  std::vector<DataNode> out;
  for (const auto& e : detail::spread(a[0])) {
    if (!e.is_object()) continue;
    for (const auto& [key, value] : e.as_object()) out.push_back(value);
  }
  return Value::sequence(std::move(out));
}

Value fn_merge(Evaluator&, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  ObjectMap out;
  for (const auto& e : detail::spread(a[0])) {
    if (!e.is_object()) type_error(s, "merge", "expects an array of objects");
    for (const auto& [key, value] : e.as_object()) out.set(key, value);
  }
  return Value::of(DataNode(std::move(out)));
}

Value fn_append(Evaluator&, Args& a, const Span& s) {
  if (a[0].is_undefined()) return a[1];
  if (a[1].is_undefined()) return a[0];
  auto out = detail::spread(a[0]);
  for (auto& e : detail::spread(a[1])) out.push_back(std::move(e));
  (void)s;
  return Value::of(DataNode(std::move(out)));
}

Value fn_distinct(Evaluator&, Args& a, const Span&) {
  if (!(a[0].is_sequence() || (a[0].is_item() && a[0].item.is_array()))) return a[0];
  DataNode::Array out;
  for (auto& e : detail::spread(a[0])) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const DataNode& x) { return equal_unordered(x, e); });
    if (!dup) out.push_back(std::move(e));
  }
  return Value::of(DataNode(std::move(out)));
}

std::vector<Value> callback_args(const detail::Callable& fn, std::vector<Value> all) {
  all.resize(std::min(all.size(), fn.arity()));
  return all;
}

Value fn_sort(Evaluator& ev, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  auto items = detail::spread(a[0]);
  const bool custom = a.size() > 1 && !a[1].is_undefined();
  if (custom && !a[1].is_function()) type_error(s, "sort", "comparator must be a function");
  if (!custom && !items.empty()) {
    const bool all_numbers = std::all_of(items.begin(), items.end(), [](const DataNode& e) { return e.is_number(); });
    const bool all_strings = std::all_of(items.begin(), items.end(), [](const DataNode& e) { return e.is_string(); });
    if (!all_numbers && !all_strings) type_error(s, "sort", "needs all numbers or all strings without a comparator");
  }
  // Merge sort; the comparator returns true when its first argument belongs after its second.
  const auto after = [&](const DataNode& x, const DataNode& y) {
    if (custom) {
      return detail::truthy(ev.call(a[1], callback_args(*a[1].function, {Value::of(x), Value::of(y)}), s));
    }
    if (x.is_number()) return x.as_number() > y.as_number();
    return x.as_string() > y.as_string();
  };
  std::vector<DataNode> buffer(items.size());
  for (std::size_t width = 1; width < items.size(); width *= 2) {
    for (std::size_t lo = 0; lo < items.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, items.size());
      const std::size_t hi = std::min(lo + 2 * width, items.size());
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) buffer[k++] = after(items[i], items[j]) ? items[j++] : items[i++];
      while (i < mid) buffer[k++] = items[i++];
      while (j < hi) buffer[k++] = items[j++];
    }
    items.swap(buffer);
  }
  return Value::of(DataNode(std::move(items)));
}

Value fn_map(Evaluator& ev, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  const DataNode::Array items = detail::spread(a[0]);
  const DataNode whole(items);
  std::vector<DataNode> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Value r = ev.call(a[1],
                            callback_args(*a[1].function, {Value::of(items[i]), Value::of(DataNode(static_cast<std::int64_t>(i))),
                                                           Value::of(whole)}),
                            s);
    if (auto d = detail::to_data(r, s)) out.push_back(std::move(*d));
  }
  return Value::sequence(std::move(out));
}

Value fn_filter(Evaluator& ev, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  const DataNode::Array items = detail::spread(a[0]);
  const DataNode whole(items);
  std::vector<DataNode> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Value r = ev.call(a[1],
                            callback_args(*a[1].function, {Value::of(items[i]), Value::of(DataNode(static_cast<std::int64_t>(i))),
                                                           Value::of(whole)}),
                            s);
    if (detail::truthy(r)) out.push_back(items[i]);
  }
  return Value::sequence(std::move(out));
}

Value fn_reduce(Evaluator& ev, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  const DataNode::Array items = detail::spread(a[0]);
  const DataNode whole(items);
  std::size_t i = 0;
  Value acc;
  if (a.size() > 2) {
    acc = a[2];
  } else if (!items.empty()) {
    acc = Value::of(items[0]);
    i = 1;
  }
  for (; i < items.size(); ++i) {
    acc = ev.call(a[1],
                  callback_args(*a[1].function, {acc, Value::of(items[i]), Value::of(DataNode(static_cast<std::int64_t>(i))),
                                                 Value::of(whole)}),
                  s);
  }
  return acc;
}

Value fn_each(Evaluator& ev, Args& a, const Span& s) {
  if (a[0].is_undefined()) return Value::undefined();
  if (!a[0].is_item() || !a[0].item.is_object()) type_error(s, "each", "expects an object");
  std::vector<DataNode> out;
  for (const auto& [key, value] : a[0].item.as_object()) {
    const Value r = ev.call(a[1], callback_args(*a[1].function, {Value::of(value), Value::of(DataNode(key)), a[0]}), s);
    if (auto d = detail::to_data(r, s)) out.push_back(std::move(*d));
  }
  return Value::sequence(std::move(out));
}

struct Entry {
  FunctionInfo info;
  detail::BuiltinFn fn;
};

const std::vector<Entry>& table() {
  using K = ArgKind;
  static const std::vector<Entry> entries = {
      {{"sum", 1, 1, false, {K::Any}}, fn_sum},
      {{"max", 1, 1, false, {K::Any}}, fn_max},
      {{"min", 1, 1, false, {K::Any}}, fn_min},
      {{"average", 1, 1, false, {K::Any}}, fn_average},
      {{"count", 1, 1, false, {K::Any}}, fn_count},
      {{"string", 1, 1, true, {K::Any}}, fn_string},
      {{"number", 1, 1, true, {K::Any}}, fn_number},
      {{"boolean", 1, 1, true, {K::Any}}, fn_boolean},
      {{"not", 1, 1, true, {K::Any}}, fn_not},
      {{"exists", 1, 1, false, {K::Any}}, fn_exists},
      {{"uppercase", 1, 1, true, {K::Any}}, fn_uppercase},
      {{"lowercase", 1, 1, true, {K::Any}}, fn_lowercase},
      {{"trim", 1, 1, true, {K::Any}}, fn_trim},
      {{"substring", 2, 3, true, {K::Any, K::Any, K::Any}}, fn_substring},
      {{"split", 2, 3, true, {K::Any, K::Any, K::Any}}, fn_split},
      {{"join", 1, 2, false, {K::Any, K::Any}}, fn_join},
      {{"contains", 2, 2, true, {K::Any, K::Any}}, fn_contains},
      {{"replace", 3, 4, true, {K::Any, K::Any, K::Any, K::Any}}, fn_replace},
      {{"keys", 1, 1, true, {K::Any}}, fn_keys},
      {{"values", 1, 1, false, {K::Any}}, fn_values},
      {{"merge", 1, 1, false, {K::Any}}, fn_merge},
      {{"append", 2, 2, false, {K::Any, K::Any}}, fn_append},
      {{"distinct", 1, 1, false, {K::Any}}, fn_distinct},
      {{"sort", 1, 2, false, {K::Any, K::Function}}, fn_sort},
      {{"map", 2, 2, false, {K::Any, K::Function}}, fn_map},
      {{"filter", 2, 2, false, {K::Any, K::Function}}, fn_filter},
      {{"reduce", 2, 3, false, {K::Any, K::Function, K::Any}}, fn_reduce},
      {{"each", 2, 2, false, {K::Any, K::Function}}, fn_each},
  };
  return entries;
}

const Entry* find_entry(std::string_view name) {
  if (!name.empty() && name.front() == '$') name.remove_prefix(1);
  for (const auto& e : table()) {
    if (e.info.name == name) return &e;
  }
  return nullptr;
}

}  // namespace

const std::vector<FunctionInfo>& registered_functions() {
  static const std::vector<FunctionInfo> infos = [] {
    std::vector<FunctionInfo> out;
    for (const auto& e : table()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const FunctionInfo* find_function(std::string_view name) {
  const Entry* e = find_entry(name);
  return e != nullptr ? &e->info : nullptr;
}

namespace detail {
BuiltinFn find_builtin(std::string_view name) {
  const Entry* e = find_entry(name);
  return e != nullptr ? e->fn : nullptr;
}
}  // namespace detail

}  // namespace schemaforge::mapping

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

// Internal evaluator types shared by evaluator.cpp and functions.cpp.

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "schemaforge/mapping/mapping.hpp"

namespace schemaforge::mapping::detail {

struct Callable;

struct Value {
  enum class Type { Undefined, Item, Sequence, Function };

  Type type = Type::Undefined;
  DataNode item;
  bool cons = false;
  std::vector<DataNode> items;
  bool keep_singleton = false;
  std::shared_ptr<const Callable> function;

  static Value undefined() { return {}; }
  static Value of(DataNode node, bool cons = false) {
    Value v;
    v.type = Type::Item;
    v.item = std::move(node);
    v.cons = cons;
    return v;
  }
  static Value sequence(std::vector<DataNode> nodes, bool keep = false) {
    Value v;
    v.type = Type::Sequence;
    v.items = std::move(nodes);
    v.keep_singleton = keep;
    return v;
  }

  bool is_undefined() const { return type == Type::Undefined; }
  bool is_item() const { return type == Type::Item; }
  bool is_sequence() const { return type == Type::Sequence; }
  bool is_function() const { return type == Type::Function; }
};

struct Frame {
  std::unordered_map<std::string, Value> vars;
  std::shared_ptr<Frame> parent;

  const Value* lookup(const std::string& name) const {
    for (const Frame* f = this; f != nullptr; f = f->parent.get()) {
      auto it = f->vars.find(name);
      if (it != f->vars.end()) return &it->second;
    }
    return nullptr;
  }
};

class Evaluator;
using BuiltinFn = Value (*)(Evaluator&, std::vector<Value>&, const Span&);

struct Callable {
  // Lambda
  const Node* lambda = nullptr;
  std::shared_ptr<Frame> closure;
  Value input;
  // Builtin
  const FunctionInfo* info = nullptr;
  BuiltinFn builtin = nullptr;

  std::size_t arity() const { return lambda != nullptr ? lambda->params.size() : info->max_arity; }
};

/// Empty sequence to undefined, singleton to its item.
Value collapse(Value v);
/// Items of a value: arrays and sequences are spread, undefined is empty.
std::vector<DataNode> spread(const Value& v);
/// Converts to a document value; undefined gives nullopt.
std::optional<DataNode> to_data(const Value& v, const Span& span);
bool truthy(const Value& v);
/// String form used by `&` and $string.
std::string to_text(const DataNode& node);

BuiltinFn find_builtin(std::string_view name);

class Evaluator {
 public:
  Evaluator(const DataNode& root, const EvalOptions& options) : root_(root), options_(options) {}

  Value eval(const Node& node, const Value& input, const std::shared_ptr<Frame>& env);
  Value call(const Value& fn, std::vector<Value> args, const Span& span);

 private:
  Value eval_raw(const Node& node, const Value& input, const std::shared_ptr<Frame>& env);
  Value eval_path(const Node& node, const Value& input, const std::shared_ptr<Frame>& env);
  Value eval_binary(const Node& node, const Value& input, const std::shared_ptr<Frame>& env);
  Value eval_group(const Node& node, std::size_t first_pair, const Value& input, const std::shared_ptr<Frame>& env);
  Value eval_call(const Node& node, const Value& input, const std::shared_ptr<Frame>& env);
  Value filter(const Node& predicate, const Value& input, const std::shared_ptr<Frame>& env);

  DataNode root_;
  EvalOptions options_;
  std::size_t depth_ = 0;
  std::uint64_t steps_ = 0;
};

}  // namespace schemaforge::mapping::detail

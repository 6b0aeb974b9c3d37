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
#include <map>
#include <stdexcept>

#include "runtime.hpp"
#include "schemaforge/json.hpp"

namespace schemaforge::mapping::detail {
namespace {

class DepthGuard {
 public:
  explicit DepthGuard(std::size_t& depth) : depth_(depth) { ++depth_; }
  ~DepthGuard() { --depth_; }
  DepthGuard(const DepthGuard&) = delete;
  DepthGuard& operator=(const DepthGuard&) = delete;

 private:
  std::size_t& depth_;
};

bool array_like(const Value& v) { return v.is_sequence() || (v.is_item() && v.item.is_array()); }

void lookup_into(const DataNode& node, const std::string& key, std::vector<DataNode>& out) {
  if (node.is_object()) {
    if (const DataNode* found = node.get(key)) {
      if (found->is_array()) {
        for (const auto& e : found->as_array()) out.push_back(e);
      } else {
        out.push_back(*found);
      }
    }
  } else if (node.is_array()) {
    for (const auto& e : node.as_array()) lookup_into(e, key, out);
  }
}

Value lookup(const Value& input, const std::string& key) {
  if (input.is_item() && input.item.is_object()) {
    const DataNode* found = input.item.get(key);
    return found != nullptr ? Value::of(*found) : Value::undefined();
  }
  if (!array_like(input)) return Value::undefined();
  std::vector<DataNode> out;
  for (const auto& e : spread(input)) lookup_into(e, key, out);
  return Value::sequence(std::move(out));
}

Value wildcard(const Value& input) {
  std::vector<DataNode> out;
  for (const auto& e : spread(input)) {
    if (!e.is_object()) continue;
    for (const auto& [key, value] : e.as_object()) {
      if (value.is_array()) {
        for (const auto& x : value.as_array()) out.push_back(x);
      } else {
        out.push_back(value);
      }
    }
  }
  return Value::sequence(std::move(out));
}

const Decimal* number_of(const Value& v) {
  return v.is_item() && v.item.is_number() ? &v.item.as_number() : nullptr;
}

std::optional<std::int64_t> index_of(const Decimal& d, std::size_t size) {
  auto i = d.floor().to_int64();
  if (!i) return std::nullopt;
  std::int64_t idx = *i;
  if (idx < 0) idx += static_cast<std::int64_t>(size);
  return idx;
}

}  // namespace

Value collapse(Value v) {
  if (!v.is_sequence()) return v;
  if (v.items.empty()) return Value::undefined();
  if (v.items.size() == 1 && !v.keep_singleton) return Value::of(std::move(v.items.front()));
  return v;
}

std::vector<DataNode> spread(const Value& v) {
  if (v.is_sequence()) return v.items;
  if (v.is_item()) {
    if (v.item.is_array()) return v.item.as_array();
    return {v.item};
  }
  return {};
}

std::optional<DataNode> to_data(const Value& v, const Span& span) {
  switch (v.type) {
    case Value::Type::Undefined:
      return std::nullopt;
    case Value::Type::Item:
      return v.item;
    case Value::Type::Sequence:
      return DataNode(v.items);
    case Value::Type::Function:
      throw EvaluationError(span, "a function cannot be used as a data value");
  }
  return std::nullopt;
}

namespace {
bool truthy_node(const DataNode& n) {
  switch (n.kind()) {
    case DataNode::Kind::Null:
      return false;
    case DataNode::Kind::Boolean:
      return n.as_bool();
    case DataNode::Kind::Number:
      return !n.as_number().is_zero();
    case DataNode::Kind::String:
      return !n.as_string().empty();
    case DataNode::Kind::Object:
      return !n.as_object().empty();
    case DataNode::Kind::Array:
      for (const auto& e : n.as_array()) {
        if (truthy_node(e)) return true;
      }
      return false;
  }
  return false;
}
}  // namespace

bool truthy(const Value& v) {
  if (v.is_item()) return truthy_node(v.item);
  if (v.is_sequence()) {
    for (const auto& e : v.items) {
      if (truthy_node(e)) return true;
    }
  }
  return false;
}

std::string to_text(const DataNode& node) {
  if (node.is_string()) return node.as_string();
  return serialize_json(node);
}

Value Evaluator::eval(const Node& node, const Value& input, const std::shared_ptr<Frame>& env) {
  if (depth_ >= options_.max_depth) throw EvaluationError(node.span, "maximum evaluation depth exceeded");
  if (++steps_ > options_.max_steps) throw EvaluationError(node.span, "evaluation step limit exceeded");
  DepthGuard guard(depth_);
  Value result;
  try {
    result = eval_raw(node, input, env);
  } catch (const std::overflow_error&) {
    throw EvaluationError(node.span, "number out of range");
  } catch (const std::domain_error&) {
    throw EvaluationError(node.span, "division by zero");
  }
  if (node.kind != NodeKind::Path) {
    for (const auto& stage : node.stages) result = filter(stage, result, env);
  }
  result = collapse(std::move(result));
  if (node.keep_array && node.kind != NodeKind::Path) {
    if (result.is_item() && !result.item.is_array()) {
      result = Value::sequence({result.item}, true);
    } else if (result.is_sequence()) {
      result.keep_singleton = true;
    }
  }
  return result;
}

Value Evaluator::filter(const Node& predicate, const Value& input, const std::shared_ptr<Frame>& env) {
  if (input.is_undefined()) return input;
  const std::vector<DataNode> items = spread(input);
  std::vector<DataNode> out;
  if (predicate.kind == NodeKind::Number) {
    auto idx = index_of(predicate.number, items.size());
    if (idx && *idx >= 0 && *idx < static_cast<std::int64_t>(items.size())) out.push_back(items[*idx]);
    return Value::sequence(std::move(out));
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Value r = eval(predicate, Value::of(items[i]), env);
    bool keep = false;
    const auto matches = [&](const Decimal& d) {
      auto idx = index_of(d, items.size());
      return idx && *idx == static_cast<std::int64_t>(i);
    };
    if (const Decimal* d = number_of(r)) {
      keep = matches(*d);
    } else if (array_like(r)) {
      const auto elems = spread(r);
      bool all_numbers = !elems.empty();
      for (const auto& e : elems) all_numbers = all_numbers && e.is_number();
      if (all_numbers) {
        for (const auto& e : elems) keep = keep || matches(e.as_number());
      } else {
        keep = truthy(r);
      }
    } else {
      keep = truthy(r);
    }
    if (keep) out.push_back(items[i]);
  }
  return Value::sequence(std::move(out));
}

Value Evaluator::eval_raw(const Node& node, const Value& input, const std::shared_ptr<Frame>& env) {
  switch (node.kind) {
    case NodeKind::Path:
      return eval_path(node, input, env);
    case NodeKind::Name:
      return lookup(input, node.text);
    case NodeKind::Wildcard:
      return wildcard(input);
    case NodeKind::Context:
      return input;
    case NodeKind::Root:
      return Value::of(root_);
    case NodeKind::Variable: {
      if (const Value* v = env->lookup(node.text)) return *v;
      if (BuiltinFn fn = find_builtin(node.text)) {
        auto callable = std::make_shared<Callable>();
        callable->info = find_function(node.text);
        callable->builtin = fn;
        Value v;
        v.type = Value::Type::Function;
        v.function = std::move(callable);
        return v;
      }
      return Value::undefined();
    }
    case NodeKind::String:
      return Value::of(DataNode(node.text));
    case NodeKind::Number:
      return Value::of(DataNode(node.number));
    case NodeKind::Boolean:
      return Value::of(DataNode(node.boolean));
    case NodeKind::Null:
      return Value::of(DataNode(nullptr));
    case NodeKind::Object:
      return eval_group(node, 0, input, env);
    case NodeKind::Group:
      return eval_group(node, 1, eval(node.children[0], input, env), env);
    case NodeKind::Array: {
      DataNode::Array out;
      for (const auto& child : node.children) {
        const Value v = eval(child, input, env);
        if (v.is_undefined()) continue;
        if (child.kind == NodeKind::Array) {
          out.push_back(*to_data(v, child.span));
        } else if (array_like(v)) {
          for (auto& e : spread(v)) out.push_back(std::move(e));
        } else {
          out.push_back(*to_data(v, child.span));
        }
      }
      return Value::of(DataNode(std::move(out)), node.cons_array);
    }
    case NodeKind::Binary:
      return eval_binary(node, input, env);
    case NodeKind::Negate: {
      const Value v = eval(node.children[0], input, env);
      if (v.is_undefined()) return v;
      const Decimal* d = number_of(v);
      if (d == nullptr) throw EvaluationError(node.span, "cannot negate a non-number value");
      return Value::of(DataNode(d->negated()));
    }
    case NodeKind::Condition: {
      if (truthy(eval(node.children[0], input, env))) return eval(node.children[1], input, env);
      if (node.children.size() > 2) return eval(node.children[2], input, env);
      return Value::undefined();
    }
    case NodeKind::Call:
      return eval_call(node, input, env);
    case NodeKind::Lambda: {
      auto callable = std::make_shared<Callable>();
      callable->lambda = &node;
      callable->closure = env;
      callable->input = input;
      Value v;
      v.type = Value::Type::Function;
      v.function = std::move(callable);
      return v;
    }
    case NodeKind::Block: {
      auto frame = std::make_shared<Frame>();
      frame->parent = env;
      Value result;
      for (const auto& child : node.children) result = eval(child, input, frame);
      return result;
    }
    case NodeKind::Bind: {
      Value v = eval(node.children[0], input, env);
      env->vars[node.text] = v;
      return v;
    }
  }
  return Value::undefined();
}

Value Evaluator::eval_path(const Node& node, const Value& input, const std::shared_ptr<Frame>& env) {
  std::vector<Value> current;
  const NodeKind head = node.children.front().kind;
  if (array_like(input) && head != NodeKind::Variable && head != NodeKind::Context && head != NodeKind::Root) {
    for (auto& e : spread(input)) current.push_back(Value::of(std::move(e)));
  } else {
    current.push_back(input);
  }
  const std::size_t last = node.children.size() - 1;
  for (std::size_t s = 0; s <= last; ++s) {
    const Node& step = node.children[s];
    if (s == 0 && step.cons_array && last > 0) {
      // A leading array constructor is evaluated once and becomes the sequence.
      std::vector<Value> next;
      for (auto& e : spread(eval(step, input, env))) next.push_back(Value::of(std::move(e)));
      if (next.empty()) return Value::undefined();
      current = std::move(next);
      continue;
    }
    std::vector<Value> results;
    for (const auto& item : current) {
      Value r = eval(step, item, env);
      if (!r.is_undefined()) results.push_back(std::move(r));
    }
    std::vector<Value> next;
    if (s == last && results.size() == 1 && results[0].is_item() && results[0].item.is_array()) {
      next.push_back(std::move(results[0]));
    } else {
      for (auto& r : results) {
        if (r.is_function()) throw EvaluationError(step.span, "a function cannot be used as a path step result");
        if (array_like(r) && !r.cons) {
          for (auto& e : spread(r)) next.push_back(Value::of(std::move(e)));
        } else {
          next.push_back(std::move(r));
        }
      }
    }
    if (next.empty()) return Value::undefined();
    current = std::move(next);
  }
  if (current.size() == 1 && current[0].is_item()) {
    Value only = std::move(current[0]);
    only.cons = false;
    if (node.keep_array && !only.item.is_array()) return Value::sequence({only.item}, true);
    return only;
  }
  std::vector<DataNode> items;
  items.reserve(current.size());
  for (auto& v : current) items.push_back(std::move(v.item));
  return Value::sequence(std::move(items), node.keep_array);
}

Value Evaluator::eval_group(const Node& node, std::size_t first_pair, const Value& input,
                            const std::shared_ptr<Frame>& env) {
  std::vector<Value> items;
  if (array_like(input)) {
    for (auto& e : spread(input)) items.push_back(Value::of(std::move(e)));
  } else {
    items.push_back(input);
  }
  struct Group {
    std::vector<DataNode> items;
    std::size_t pair;
  };
  std::vector<std::pair<std::string, Group>> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& item : items) {
    for (std::size_t p = first_pair; p + 1 < node.children.size(); p += 2) {
      const Node& key_node = node.children[p];
      const Value key = eval(key_node, item, env);
      if (key.is_undefined()) continue;
      if (!key.is_item() || !key.item.is_string()) {
        throw EvaluationError(key_node.span, "object key must evaluate to a string");
      }
      const std::string& k = key.item.as_string();
      auto it = index.find(k);
      if (it == index.end()) {
        index.emplace(k, groups.size());
        groups.push_back({k, Group{{}, p}});
        it = index.find(k);
      } else if (groups[it->second].second.pair != p) {
        throw EvaluationError(key_node.span, "several key expressions produce the key \"" + k + "\"");
      }
      if (!item.is_undefined()) {
        if (item.is_function()) throw EvaluationError(key_node.span, "cannot group a function value");
        groups[it->second].second.items.push_back(*to_data(item, key_node.span));
      }
    }
  }
  ObjectMap out;
  out.reserve(groups.size());
  for (auto& [key, group] : groups) {
    Value context = group.items.size() == 1 ? Value::of(group.items.front()) : collapse(Value::sequence(group.items));
    const Node& value_node = node.children[group.pair + 1];
    const Value v = eval(value_node, context, env);
    if (auto data = to_data(v, value_node.span)) out.set(key, std::move(*data));
  }
  return Value::of(DataNode(std::move(out)));
}

Value Evaluator::eval_binary(const Node& node, const Value& input, const std::shared_ptr<Frame>& env) {
  const std::string& op = node.text;
  const Node& lhs_node = node.children[0];
  const Node& rhs_node = node.children[1];

  if (op == "and") {
    if (!truthy(eval(lhs_node, input, env))) return Value::of(DataNode(false));
    return Value::of(DataNode(truthy(eval(rhs_node, input, env))));
  }
  if (op == "or") {
    if (truthy(eval(lhs_node, input, env))) return Value::of(DataNode(true));
    return Value::of(DataNode(truthy(eval(rhs_node, input, env))));
  }

  const Value lhs = eval(lhs_node, input, env);
  const Value rhs = eval(rhs_node, input, env);

  if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
    if (!lhs.is_undefined() && number_of(lhs) == nullptr) {
      throw EvaluationError(lhs_node.span, "left side of '" + op + "' must be a number");
    }
    if (!rhs.is_undefined() && number_of(rhs) == nullptr) {
      throw EvaluationError(rhs_node.span, "right side of '" + op + "' must be a number");
    }
    if (lhs.is_undefined() || rhs.is_undefined()) return Value::undefined();
    const Decimal& a = *number_of(lhs);
    const Decimal& b = *number_of(rhs);
    if ((op == "/" || op == "%") && b.is_zero()) throw EvaluationError(node.span, "division by zero");
    if (op == "+") return Value::of(DataNode(a + b));
    if (op == "-") return Value::of(DataNode(a - b));
    if (op == "*") return Value::of(DataNode(a * b));
    if (op == "/") return Value::of(DataNode(a / b));
    return Value::of(DataNode(a % b));
  }
  if (op == "=" || op == "!=") {
    bool equal = false;
    if (!lhs.is_undefined() && !rhs.is_undefined()) {
      if (lhs.is_function() || rhs.is_function()) {
        equal = lhs.function == rhs.function;
      } else {
        equal = equal_unordered(*to_data(lhs, lhs_node.span), *to_data(rhs, rhs_node.span));
      }
      return Value::of(DataNode(op == "=" ? equal : !equal));
    }
    return Value::of(DataNode(false));
  }
  if (op == "<" || op == "<=" || op == ">" || op == ">=") {
    const auto comparable = [](const Value& v) {
      return v.is_undefined() || (v.is_item() && (v.item.is_number() || v.item.is_string()));
    };
    if (!comparable(lhs)) throw EvaluationError(lhs_node.span, "'" + op + "' needs a number or a string");
    if (!comparable(rhs)) throw EvaluationError(rhs_node.span, "'" + op + "' needs a number or a string");
    if (lhs.is_undefined() || rhs.is_undefined()) return Value::undefined();
    if (lhs.item.kind() != rhs.item.kind()) {
      throw EvaluationError(node.span, "'" + op + "' cannot compare a number with a string");
    }
    std::strong_ordering order = lhs.item.is_number() ? lhs.item.as_number() <=> rhs.item.as_number()
                                                      : lhs.item.as_string().compare(rhs.item.as_string()) <=> 0;
    bool result = false;
    if (op == "<") result = order < 0;
    if (op == "<=") result = order <= 0;
    if (op == ">") result = order > 0;
    if (op == ">=") result = order >= 0;
    return Value::of(DataNode(result));
  }
  if (op == "&") {
    const auto text = [&](const Value& v, const Node& n) {
      auto data = to_data(v, n.span);
      return data ? to_text(*data) : std::string();
    };
    return Value::of(DataNode(text(lhs, lhs_node) + text(rhs, rhs_node)));
  }
  if (op == "..") {
    const auto bound = [&](const Value& v, const Node& n) -> std::optional<std::int64_t> {
      if (v.is_undefined()) return std::nullopt;
      const Decimal* d = number_of(v);
      if (d == nullptr || !d->is_integer() || !d->to_int64()) {
        throw EvaluationError(n.span, "range bounds must be integers");
      }
      return d->to_int64();
    };
    const auto lo = bound(lhs, lhs_node);
    const auto hi = bound(rhs, rhs_node);
    if (!lo || !hi) return Value::undefined();
    DataNode::Array out;
    if (*lo <= *hi) {
      if (*hi - *lo >= 10'000'000) throw EvaluationError(node.span, "range is too large");
      out.reserve(static_cast<std::size_t>(*hi - *lo + 1));
      for (std::int64_t i = *lo; i <= *hi; ++i) out.emplace_back(i);
    }
    return Value::of(DataNode(std::move(out)));
  }
  if (op == "in") {
    if (lhs.is_undefined() || rhs.is_undefined()) return Value::of(DataNode(false));
    const DataNode needle = *to_data(lhs, lhs_node.span);
    for (const auto& e : spread(rhs)) {
      if (equal_unordered(needle, e)) return Value::of(DataNode(true));
    }
    return Value::of(DataNode(false));
  }
  throw EvaluationError(node.span, "unknown operator '" + op + "'");
}

Value Evaluator::eval_call(const Node& node, const Value& input, const std::shared_ptr<Frame>& env) {
  Value fn;
  if (const Value* v = env->lookup(node.text)) {
    fn = *v;
    if (!fn.is_function()) throw EvaluationError(node.span, "$" + node.text + " is not a function");
  } else if (BuiltinFn builtin = find_builtin(node.text)) {
    auto callable = std::make_shared<Callable>();
    callable->info = find_function(node.text);
    callable->builtin = builtin;
    fn.type = Value::Type::Function;
    fn.function = std::move(callable);
  } else {
    throw EvaluationError(node.span, "unknown function $" + node.text);
  }
  std::vector<Value> args;
  args.reserve(node.children.size() + 1);
  for (const auto& child : node.children) args.push_back(eval(child, input, env));
  const FunctionInfo* info = fn.function->info;
  if (info != nullptr && info->context_default && args.size() + 1 == info->min_arity) {
    args.insert(args.begin(), input);
  }
  return call(fn, std::move(args), node.span);
}

Value Evaluator::call(const Value& fn, std::vector<Value> args, const Span& span) {
  if (!fn.is_function()) throw EvaluationError(span, "value is not a function");
  const Callable& c = *fn.function;
  if (depth_ >= options_.max_depth) throw EvaluationError(span, "maximum evaluation depth exceeded");
  DepthGuard guard(depth_);
  if (c.builtin != nullptr) {
    if (args.size() < c.info->min_arity || args.size() > c.info->max_arity) {
      throw EvaluationError(span, "wrong number of arguments for $" + c.info->name);
    }
    for (std::size_t i = 0; i < args.size() && i < c.info->params.size(); ++i) {
      if (c.info->params[i] == ArgKind::Function && !args[i].is_function()) {
        throw EvaluationError(span, "argument " + std::to_string(i + 1) + " of $" + c.info->name + " must be a function");
      }
    }
    return collapse(c.builtin(*this, args, span));
  }
  auto frame = std::make_shared<Frame>();
  frame->parent = c.closure;
  for (std::size_t i = 0; i < c.lambda->params.size(); ++i) {
    frame->vars[c.lambda->params[i]] = i < args.size() ? std::move(args[i]) : Value::undefined();
  }
  return eval(c.lambda->children[0], c.input, frame);
}

}  // namespace schemaforge::mapping::detail

namespace schemaforge::mapping {

std::optional<DataNode> evaluate_mapping(const MappingAst& ast, const DataNode& input, const EvalOptions& options) {
  detail::Evaluator evaluator(input, options);
  auto env = std::make_shared<detail::Frame>();
  const detail::Value result = evaluator.eval(ast.root(), detail::Value::of(input), env);
  if (result.is_function()) throw EvaluationError(ast.root().span, "expression evaluates to a function");
  return detail::to_data(result, ast.root().span);
}

}  // namespace schemaforge::mapping

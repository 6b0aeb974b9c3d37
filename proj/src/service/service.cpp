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
#include <charconv>
#include <ctime>
#include <fstream>
#include <sstream>

#include "schemaforge/formats.hpp"
#include "schemaforge/infer.hpp"
#include "schemaforge/json.hpp"
#include "schemaforge/service.hpp"

namespace schemaforge {
namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::optional<std::size_t> numeric_suffix(std::string_view text, std::string_view prefix) {
  if (text.substr(0, prefix.size()) != prefix || text.size() == prefix.size()) return std::nullopt;
  std::size_t value = 0;
  const char* first = text.data() + prefix.size();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || *first == '0') return std::nullopt;
  return value;
}

}  // namespace

DataNode Project::to_data() const {
  DataNode::Array items;
  for (const auto& [sid, state] : sessions) {
    items.emplace_back(ObjectMap{{"id", DataNode(sid)}, {"state", state.to_data()}});
  }
  return DataNode(ObjectMap{{"id", DataNode(id)},
                            {"created", DataNode(created)},
                            {"modified", DataNode(modified)},
                            {"schema", schema},
                            {"document", document},
                            {"sessions", DataNode(std::move(items))}});
}

Project Project::from_data(const DataNode& data) {
  Project p;
  p.id = data.get("id")->as_string();
  p.created = data.get("created")->as_string();
  p.modified = data.get("modified")->as_string();
  p.schema = *data.get("schema");
  p.document = *data.get("document");
  for (const auto& s : data.get("sessions")->as_array()) {
    p.sessions.emplace_back(s.get("id")->as_string(), SessionState::from_data(*s.get("state")));
  }
  return p;
}

ProjectStore::ProjectStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (entry.path().extension() != ".json") continue;
    if (auto n = numeric_suffix(entry.path().stem().string(), "p")) next_id_ = std::max(next_id_, *n + 1);
  }
}

Project ProjectStore::create(const std::string& timestamp) {
  Project project;
  {
    std::lock_guard lock(mutex_);
    project.id = "p" + std::to_string(next_id_++);
  }
  project.created = timestamp;
  project.modified = timestamp;
  save(project);
  return project;
}

std::optional<Project> ProjectStore::load(const std::string& id) const {
  if (!numeric_suffix(id, "p")) return std::nullopt;
  std::ifstream in(dir_ / (id + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return Project::from_data(parse_json(ss.str()));
}

void ProjectStore::save(const Project& project) const {
  const auto target = dir_ / (project.id + ".json");
  const auto temp = dir_ / (project.id + ".json.tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << serialize_json(project.to_data(), JsonStyle::Pretty) << '\n';
    out.flush();
    if (!out) throw Error("cannot write " + temp.string());
  }
  std::filesystem::rename(temp, target);
}

// ---------------------------------------------------------------------------
// Routing

namespace {

struct HttpError {
  int status;
  std::string code;
  std::string message;
  DataNode extra;  // object merged into the error body, or null
};

[[noreturn]] void fail(int status, std::string code, std::string message, DataNode extra = {}) {
  throw HttpError{status, std::move(code), std::move(message), std::move(extra)};
}

ApiResponse ok(int status, std::initializer_list<std::pair<std::string, DataNode>> fields) {
  ObjectMap body{{"status", DataNode("ok")}};
  for (const auto& [k, v] : fields) body.set(k, v);
  return {status, DataNode(std::move(body))};
}

const char* const kRequestSchemas = R"({
  "create_project": {"type": "object", "properties": {"schema": {}, "document": {}}, "additionalProperties": false},
  "put_schema": {"type": "object", "properties": {"schema": {"type": ["object", "boolean"]}}, "required": ["schema"],
                 "additionalProperties": false},
  "put_document": {"type": "object",
    "properties": {
      "format": {"enum": ["json", "yaml", "xml", "csv"]},
      "text": {"type": "string"},
      "document": {},
      "csv": {"type": "object", "properties": {"delimiter": {"type": "string", "minLength": 1, "maxLength": 1},
                                                "header": {"type": "boolean"}}, "additionalProperties": false}
    },
    "required": ["format"], "additionalProperties": false},
  "create_session": {"type": "object",
    "properties": {
      "kind": {"enum": ["schema_create", "schema_modify", "schema_query", "data_create", "data_modify", "data_query",
                        "mapping_generate"]},
      "inputs": {"$ref": "#/$defs/inputs"}
    },
    "required": ["kind"], "additionalProperties": false,
    "$defs": {"inputs": {"type": "object", "properties": {
      "description": {"type": "string"}, "context_path": {"type": "string"}, "target_schema": {"type": ["object", "boolean"]},
      "remarks": {"type": "string"}, "schema": {}, "document": {},
      "truncation": {"$ref": "#/$defs/truncation"}}, "additionalProperties": false},
      "truncation": {"type": "object", "properties": {"target_bytes": {"type": "integer", "minimum": 1},
        "n_start": {"type": "integer", "minimum": 1}, "n_min": {"type": "integer", "minimum": 1},
        "property_factor": {"type": "integer", "minimum": 1}}, "additionalProperties": false}}},
  "session_message": {"type": "object", "properties": {"description": {"type": "string"}, "remarks": {"type": "string"},
                      "context_path": {"type": "string"}, "target_schema": {"type": ["object", "boolean"]}},
                      "required": ["description"], "additionalProperties": false},
  "edit": {"type": "object", "properties": {"proposal": {"type": "string"}}, "required": ["proposal"],
           "additionalProperties": false},
  "empty": {"type": "object", "additionalProperties": false},
  "infer": {"type": "object", "properties": {"document": {}, "options": {"type": "object", "properties": {
              "detect_integer": {"type": "boolean"}, "required_mode": {"enum": ["intersection", "all_present"]},
              "merge_array_items": {"type": "boolean"}}, "additionalProperties": false}},
            "required": ["document"], "additionalProperties": false},
  "truncate": {"type": "object", "properties": {"document": {}, "config": {"type": "object", "properties": {
                 "target_bytes": {"type": "integer", "minimum": 1}, "n_start": {"type": "integer", "minimum": 1},
                 "n_min": {"type": "integer", "minimum": 1}, "property_factor": {"type": "integer", "minimum": 1}},
                 "additionalProperties": false}},
               "required": ["document"], "additionalProperties": false},
  "mapping_validate": {"type": "object", "properties": {"source": {"type": "string"}}, "required": ["source"],
                       "additionalProperties": false},
  "mapping_evaluate": {"type": "object", "properties": {"source": {"type": "string"}, "document": {}},
                       "required": ["source", "document"], "additionalProperties": false}
})";

const DataNode& request_schemas() {
  static const DataNode schemas = parse_json(kRequestSchemas);
  return schemas;
}

struct RouteSpec {
  const char* method;
  const char* pattern;  // {x} marks a parameter
  const char* schema;   // request schema name or nullptr
  const char* summary;
};

constexpr RouteSpec kRoutes[] = {
    {"POST", "/projects", "create_project", "Create a project"},
    {"GET", "/projects/{id}", nullptr, "Read a project"},
    {"PUT", "/projects/{id}/schema", "put_schema", "Replace the project schema"},
    {"PUT", "/projects/{id}/document", "put_document", "Replace the project document (json, yaml, xml or csv)"},
    {"POST", "/projects/{id}/sessions", "create_session", "Build a prompt, call the model and open a session"},
    {"GET", "/sessions/{sid}", nullptr, "Read a session"},
    {"POST", "/sessions/{sid}/messages", "session_message", "Send a follow-up message in a session"},
    {"POST", "/sessions/{sid}/edit", "edit", "Replace the proposal with an edited version"},
    {"POST", "/sessions/{sid}/apply", "empty", "Apply a valid proposal to the project"},
    {"POST", "/sessions/{sid}/discard", "empty", "Discard the proposal"},
    {"POST", "/infer", "infer", "Infer a schema from a document"},
    {"POST", "/truncate", "truncate", "Truncate a document to a byte budget"},
    {"POST", "/mapping/validate", "mapping_validate", "Check mapping syntax and function calls"},
    {"POST", "/mapping/evaluate", "mapping_evaluate", "Evaluate a mapping over a document"},
    {"GET", "/openapi.json", nullptr, "This document"},
};

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> out;
  const std::size_t query = path.find('?');
  if (query != std::string_view::npos) path = path.substr(0, query);
  std::size_t pos = 0;
  while (pos < path.size()) {
    if (path[pos] == '/') {
      ++pos;
      continue;
    }
    std::size_t end = path.find('/', pos);
    if (end == std::string_view::npos) end = path.size();
    out.push_back(path.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

bool match(std::string_view pattern, const std::vector<std::string_view>& segments, std::string& param) {
  const auto parts = split_path(pattern);
  if (parts.size() != segments.size()) return false;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].front() == '{') {
      param = std::string(segments[i]);
    } else if (parts[i] != segments[i]) {
      return false;
    }
  }
  return true;
}

DataNode parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return DataNode(ObjectMap{});
  try {
    return parse_json(body);
  } catch (const ParseError& e) {
    fail(422, "invalid_json", std::string("request body is not valid JSON: ") + e.what());
  }
}

void check_request(const char* schema_name, const DataNode& body) {
  const DataNode& all = request_schemas();
  ObjectMap schema = all.get(schema_name)->as_object();
  const ValidationReport report = validate_instance(body, SchemaNode(DataNode(std::move(schema))));
  if (!report.valid) {
    fail(422, "invalid_request", "request body does not match the " + std::string(schema_name) + " schema",
         DataNode(ObjectMap{{"report", report.to_data()}}));
  }
}

const DataNode* field(const DataNode& body, std::string_view key) { return body.get(key); }

std::size_t size_field(const DataNode& obj, const char* key, std::size_t fallback) {
  const DataNode* v = obj.get(key);
  if (v == nullptr) return fallback;
  return static_cast<std::size_t>(v->as_number().to_int64().value_or(static_cast<std::int64_t>(fallback)));
}

TruncationConfig truncation_config(const DataNode* obj) {
  TruncationConfig cfg;
  if (obj == nullptr) return cfg;
  cfg.target_bytes = size_field(*obj, "target_bytes", cfg.target_bytes);
  cfg.n_start = size_field(*obj, "n_start", cfg.n_start);
  cfg.n_min = size_field(*obj, "n_min", cfg.n_min);
  cfg.property_factor = size_field(*obj, "property_factor", cfg.property_factor);
  try {
    cfg.check();
  } catch (const PreconditionError& e) {
    fail(422, "invalid_config", e.what());
  }
  return cfg;
}

DocPath pointer(const std::string& text) {
  try {
    return DocPath::from_pointer(text);
  } catch (const PreconditionError& e) {
    fail(422, "invalid_path", e.what());
  }
}

DataNode outcome_to_data(const TruncationOutcome& outcome) {
  DataNode::Array trace;
  for (const auto& [n, bytes] : outcome.trace) {
    trace.emplace_back(ObjectMap{{"n", DataNode(static_cast<std::int64_t>(n))},
                                 {"bytes", DataNode(static_cast<std::int64_t>(bytes))}});
  }
  return DataNode(ObjectMap{{"document", outcome.doc},
                            {"final_n", DataNode(static_cast<std::int64_t>(outcome.final_n))},
                            {"iterations", DataNode(static_cast<std::int64_t>(outcome.iterations))},
                            {"bytes", DataNode(static_cast<std::int64_t>(outcome.bytes))},
                            {"budget_met", DataNode(outcome.budget_met)},
                            {"trace", DataNode(std::move(trace))}});
}

DataNode session_view(const std::string& sid, const SessionState& state) {
  ObjectMap out{{"id", DataNode(sid)}};
  const DataNode data = state.to_data();
  for (const auto& [k, v] : data.as_object()) out.set(k, v);
  return DataNode(std::move(out));
}

struct SessionRef {
  std::string project;
  std::size_t index;
};

SessionRef parse_session_id(const std::string& sid) {
  const std::size_t dash = sid.find("-s");
  if (dash == std::string::npos) fail(404, "not_found", "unknown session " + sid);
  const std::string project = sid.substr(0, dash);
  auto n = numeric_suffix(std::string_view(sid).substr(dash), "-s");
  if (!n || !numeric_suffix(project, "p")) fail(404, "not_found", "unknown session " + sid);
  return {project, *n - 1};
}

}  // namespace

std::shared_ptr<std::mutex> Service::project_lock(const std::string& id) {
  std::lock_guard lock(locks_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

Service::Service(ServiceOptions options) : options_(std::move(options)), store_(options_.data_dir) {
  if (!options_.transport) options_.transport = std::make_shared<HttpTransport>();
  if (!options_.clock) options_.clock = utc_now;
}

DataNode Service::openapi() {
  ObjectMap paths;
  for (const auto& route : kRoutes) {
    std::string method = route.method;
    for (char& c : method) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    ObjectMap op{{"summary", DataNode(route.summary)}};
    if (route.schema != nullptr) {
      op.set("requestBody",
             DataNode(ObjectMap{{"required", DataNode(true)},
                                {"content", DataNode(ObjectMap{{"application/json",
                                                                DataNode(ObjectMap{{"schema", *request_schemas().get(route.schema)}})}})}}));
    }
    ObjectMap responses;
    responses.set("200", DataNode(ObjectMap{{"description", DataNode("Success, body has status \"ok\"")}}));
    responses.set("404", DataNode(ObjectMap{{"description", DataNode("Unknown project or session")}}));
    responses.set("409", DataNode(ObjectMap{{"description", DataNode("Illegal session transition")}}));
    responses.set("422", DataNode(ObjectMap{{"description", DataNode("Validation failure with report")}}));
    responses.set("502", DataNode(ObjectMap{{"description", DataNode("Model gateway failure")}}));
    op.set("responses", DataNode(std::move(responses)));
    ObjectMap entry;
    if (const DataNode* existing = paths.find(route.pattern)) entry = existing->as_object();
    entry.set(method, DataNode(std::move(op)));
    paths.set(route.pattern, DataNode(std::move(entry)));
  }
  return DataNode(ObjectMap{{"openapi", DataNode("3.0.3")},
                            {"info", DataNode(ObjectMap{{"title", DataNode("SchemaForge service")},
                                                        {"version", DataNode("1.0.0")}})},
                            {"paths", DataNode(std::move(paths))}});
}

ApiResponse Service::handle(std::string_view method, std::string_view path, std::string_view raw_body) {
  const auto segments = split_path(path);
  const std::string& secret = options_.gateway.api_key;
  try {
    const RouteSpec* route = nullptr;
    std::string param;
    bool path_known = false;
    for (const auto& r : kRoutes) {
      std::string p;
      if (!match(r.pattern, segments, p)) continue;
      path_known = true;
      if (method == r.method) {
        route = &r;
        param = p;
        break;
      }
    }
    if (route == nullptr) {
      if (path_known) fail(405, "method_not_allowed", std::string(method) + " is not supported on " + std::string(path));
      fail(404, "not_found", "no such endpoint " + std::string(path));
    }
    DataNode body = parse_body(raw_body);
    if (route->schema != nullptr) check_request(route->schema, body);
    const std::string_view pattern = route->pattern;

    const auto load = [&](const std::string& id) {
      auto project = store_.load(id);
      if (!project) fail(404, "not_found", "unknown project " + id);
      return std::move(*project);
    };

    if (pattern == "/openapi.json") return {200, openapi()};

    if (pattern == "/projects") {
      Project project = store_.create(options_.clock());
      if (const DataNode* schema = field(body, "schema")) {
        const ValidationReport report = validate_schema(*schema);
        if (!report.valid) fail(422, "invalid_schema", "schema is not valid", DataNode(ObjectMap{{"report", report.to_data()}}));
        project.schema = *schema;
      }
      if (const DataNode* document = field(body, "document")) project.document = *document;
      store_.save(project);
      return ok(201, {{"project", project.to_data()}});
    }

    if (pattern == "/projects/{id}") return ok(200, {{"project", load(param).to_data()}});

    if (pattern == "/projects/{id}/schema" || pattern == "/projects/{id}/document") {
      auto lock = project_lock(param);
      std::lock_guard guard(*lock);
      Project project = load(param);
      if (pattern == "/projects/{id}/schema") {
        const DataNode& schema = *field(body, "schema");
        const ValidationReport report = validate_schema(schema);
        if (!report.valid) fail(422, "invalid_schema", "schema is not valid", DataNode(ObjectMap{{"report", report.to_data()}}));
        project.schema = schema;
      } else {
        const std::string& format = field(body, "format")->as_string();
        const DataNode* text = field(body, "text");
        const DataNode* document = field(body, "document");
        if (format == "json" && document != nullptr && text == nullptr) {
          project.document = *document;
        } else if (text == nullptr) {
          fail(422, "missing_input", "text is required for format " + format);
        } else {
          try {
            const std::string& t = text->as_string();
            if (format == "json") {
              project.document = parse_json(t);
            } else if (format == "yaml") {
              project.document = from_yaml(t);
            } else if (format == "xml") {
              project.document = from_xml(t);
            } else {
              CsvOptions csv;
              if (const DataNode* o = field(body, "csv")) {
                if (const DataNode* d = o->get("delimiter")) csv.delimiter = d->as_string().front();
                if (const DataNode* h = o->get("header")) csv.header = h->as_bool();
              }
              project.document = from_csv(t, csv);
            }
          } catch (const ParseError& e) {
            fail(422, "parse_error", e.what(),
                 DataNode(ObjectMap{{"line", DataNode(static_cast<std::int64_t>(e.line()))},
                                    {"column", DataNode(static_cast<std::int64_t>(e.column()))}}));
          } catch (const UnsupportedError& e) {
            fail(422, "unsupported", e.what());
          }
        }
      }
      project.modified = options_.clock();
      store_.save(project);
      return ok(200, {{"project", project.to_data()}});
    }

    if (pattern == "/projects/{id}/sessions") {
      auto lock = project_lock(param);
      std::lock_guard guard(*lock);
      Project project = load(param);
      const PromptKind kind = *parse_prompt_kind(field(body, "kind")->as_string());
      const DataNode empty_inputs = DataNode(ObjectMap{});
      const DataNode& in = field(body, "inputs") != nullptr ? *field(body, "inputs") : empty_inputs;
      PromptInputs inputs;
      if (const DataNode* v = in.get("description")) inputs.description = v->as_string();
      if (const DataNode* v = in.get("remarks")) inputs.remarks = v->as_string();
      if (const DataNode* v = in.get("context_path")) inputs.context_path = pointer(v->as_string());
      if (const DataNode* v = in.get("target_schema")) inputs.target_schema = *v;
      inputs.schema = in.get("schema") != nullptr ? *in.get("schema") : project.schema;
      if (const DataNode* v = in.get("document")) {
        inputs.document = *v;
      } else if (!project.document.is_null()) {
        inputs.document = project.document;
      }
      if (kind == PromptKind::SchemaModify && !inputs.context_path) inputs.context_path = DocPath{};
      inputs.truncation = truncation_config(in.get("truncation"));

      PromptBundle bundle;
      try {
        bundle = build_prompt(kind, inputs);
      } catch (const MissingInputError& e) {
        fail(422, "missing_input", e.what(), DataNode(ObjectMap{{"field", DataNode(e.field())}}));
      } catch (const NotFoundError& e) {
        fail(422, "invalid_path", e.what());
      } catch (const SchemaError& e) {
        fail(422, "invalid_schema", e.what());
      }
      const std::string sid = project.id + "-s" + std::to_string(project.sessions.size() + 1);
      SessionState state;
      state.kind = kind;
      state.context_path = bundle.context_path;
      std::optional<HttpError> gateway_error;
      try {
        state = submit(state, bundle, *options_.transport, options_.gateway, options_.log);
      } catch (const PreconditionError& e) {
        gateway_error = HttpError{502, "gateway_error", e.what(), {}};
      } catch (const GatewayError& e) {
        gateway_error = HttpError{502, "gateway_error", e.what(), {}};
      }
      project.sessions.emplace_back(sid, state);
      project.modified = options_.clock();
      store_.save(project);
      if (gateway_error) {
        fail(gateway_error->status, gateway_error->code, gateway_error->message,
             DataNode(ObjectMap{{"session", session_view(sid, state)}}));
      }
      return ok(201, {{"session", session_view(sid, state)}});
    }

    if (pattern.rfind("/sessions/", 0) == 0) {
      const SessionRef ref = parse_session_id(param);
      auto lock = project_lock(ref.project);
      std::lock_guard guard(*lock);
      auto loaded = store_.load(ref.project);
      if (!loaded || ref.index >= loaded->sessions.size()) fail(404, "not_found", "unknown session " + param);
      Project project = std::move(*loaded);
      SessionState& state = project.sessions[ref.index].second;
      const auto save_and_return = [&](int status, DataNode result = {}) {
        project.modified = options_.clock();
        store_.save(project);
        if (result.is_null()) return ok(status, {{"session", session_view(param, state)}});
        return ok(status, {{"session", session_view(param, state)}, {"result", result}});
      };
      try {
        if (pattern == "/sessions/{sid}") return ok(200, {{"session", session_view(param, state)}});
        if (pattern == "/sessions/{sid}/edit") {
          state = user_edit(state, field(body, "proposal")->as_string());
          return save_and_return(200);
        }
        if (pattern == "/sessions/{sid}/discard") {
          state = discard(state);
          return save_and_return(200);
        }
        if (pattern == "/sessions/{sid}/apply") {
          ApplyTarget target;
          target.schema = project.schema;
          if (!project.document.is_null()) target.document = project.document;
          ApplyResult applied;
          try {
            applied = apply(state, target);
          } catch (const SchemaRejected& e) {
            fail(422, "invalid_schema", e.what(), DataNode(ObjectMap{{"report", e.report().to_data()}}));
          } catch (const mapping::EvaluationError& e) {
            fail(422, "evaluation_error", e.what());
          } catch (const MissingInputError& e) {
            fail(422, "missing_input", e.what(), DataNode(ObjectMap{{"field", DataNode(e.field())}}));
          } catch (const NotFoundError& e) {
            fail(422, "invalid_path", e.what());
          }
          state = applied.state;
          if (is_schema_kind(*state.kind)) {
            project.schema = applied.result;
          } else if (*state.kind == PromptKind::DataCreate || *state.kind == PromptKind::DataModify) {
            project.document = applied.result;
          }
          return save_and_return(200, applied.result);
        }
        if (pattern == "/sessions/{sid}/messages") {
          PromptInputs inputs;
          inputs.description = field(body, "description")->as_string();
          if (const DataNode* v = field(body, "remarks")) inputs.remarks = v->as_string();
          inputs.context_path = field(body, "context_path") != nullptr ? pointer(field(body, "context_path")->as_string())
                                                                      : state.context_path;
          inputs.schema = project.schema;
          if (!project.document.is_null()) inputs.document = project.document;
          if (!state.proposal.empty()) inputs.prior_proposal = state.proposal;
          if (const DataNode* v = field(body, "target_schema")) inputs.target_schema = *v;
          PromptBundle bundle;
          try {
            bundle = build_prompt(*state.kind, inputs);
          } catch (const MissingInputError& e) {
            fail(422, "missing_input", e.what(), DataNode(ObjectMap{{"field", DataNode(e.field())}}));
          }
          try {
            state = submit(state, bundle, *options_.transport, options_.gateway, options_.log);
          } catch (const GatewayError& e) {
            fail(502, "gateway_error", e.what(), DataNode(ObjectMap{{"session", session_view(param, state)}}));
          }
          return save_and_return(200);
        }
      } catch (const BlockedApply& e) {
        fail(409, "blocked_apply", e.what());
      } catch (const IllegalTransition& e) {
        fail(409, "illegal_transition", e.what());
      }
    }

    if (pattern == "/infer") {
      InferenceOptions opts;
      if (const DataNode* o = field(body, "options")) {
        if (const DataNode* v = o->get("detect_integer")) opts.detect_integer = v->as_bool();
        if (const DataNode* v = o->get("merge_array_items")) opts.merge_array_items = v->as_bool();
        if (const DataNode* v = o->get("required_mode")) {
          opts.required_mode = v->as_string() == "all_present" ? RequiredMode::AllPresent : RequiredMode::Intersection;
        }
      }
      return ok(200, {{"schema", with_dialect(infer_schema(*field(body, "document"), opts)).doc()}});
    }

    if (pattern == "/truncate") {
      const TruncationConfig cfg = truncation_config(field(body, "config"));
      return ok(200, {{"outcome", outcome_to_data(truncate_document(*field(body, "document"), cfg))}});
    }

    if (pattern == "/mapping/validate") {
      return ok(200, {{"report", mapping::validate_syntax(field(body, "source")->as_string()).to_data()}});
    }

    if (pattern == "/mapping/evaluate") {
      const std::string& source = field(body, "source")->as_string();
      const mapping::SyntaxReport report = mapping::validate_syntax(source);
      if (!report.valid) fail(422, "syntax_error", "mapping has syntax errors", DataNode(ObjectMap{{"report", report.to_data()}}));
      try {
        const auto result = mapping::evaluate_mapping(mapping::parse_mapping(source), *field(body, "document"));
        return ok(200, {{"result", result.value_or(DataNode(nullptr))}, {"defined", DataNode(result.has_value())}});
      } catch (const mapping::EvaluationError& e) {
        fail(422, "evaluation_error", e.detail(),
             DataNode(ObjectMap{{"offset", DataNode(static_cast<std::int64_t>(e.span().offset))},
                                {"length", DataNode(static_cast<std::int64_t>(e.span().length))}}));
      }
    }
    fail(404, "not_found", "no such endpoint " + std::string(path));
  } catch (const HttpError& e) {
    ObjectMap error{{"code", DataNode(e.code)}, {"message", DataNode(redact(e.message, secret))}};
    if (e.extra.is_object()) {
      for (const auto& [k, v] : e.extra.as_object()) error.set(k, v);
    }
    return {e.status, DataNode(ObjectMap{{"status", DataNode("error")}, {"error", DataNode(std::move(error))}})};
  } catch (const std::exception& e) {
    ObjectMap error{{"code", DataNode("internal_error")}, {"message", DataNode(redact(e.what(), secret))}};
    return {500, DataNode(ObjectMap{{"status", DataNode("error")}, {"error", DataNode(std::move(error))}})};
  }
}

}  // namespace schemaforge

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
// Command-line front end. Data goes to stdout, diagnostics to stderr.
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 gateway error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "schemaforge/assist.hpp"
#include "schemaforge/formats.hpp"
#include "schemaforge/gateway.hpp"
#include "schemaforge/infer.hpp"
#include "schemaforge/json.hpp"
#include "schemaforge/mapping/mapping.hpp"
#include "schemaforge/service.hpp"
#include "schemaforge/truncate.hpp"

namespace sf = schemaforge;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;
constexpr int kGateway = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string endpoint;
  std::string model;
  std::string replay_dir;
  std::string record_dir;
  std::string config_file;
  bool pretty = false;
};

struct CsvFlags {
  std::string delimiter = ",";
  bool no_header = false;

  sf::CsvOptions options() const {
    if (delimiter.size() != 1) throw UsageError("--csv-delimiter must be one character");
    return {delimiter.front(), !no_header};
  }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw UsageError("cannot write " + path);
}

std::string extension_of(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

sf::DataNode load_document(const std::string& path, const CsvFlags& csv = {}) {
  const std::string ext = extension_of(path);
  const std::string text = read_text(path);
  if (ext == ".yaml" || ext == ".yml") return sf::from_yaml(text);
  if (ext == ".xml") return sf::from_xml(text);
  if (ext == ".csv") return sf::from_csv(text, csv.options());
  if (ext == ".tsv") return sf::from_csv(text, {'\t', !csv.no_header});
  return sf::parse_json(text);
}

void emit(const sf::DataNode& doc, bool pretty) {
  std::cout << sf::serialize_json(doc, pretty ? sf::JsonStyle::Pretty : sf::JsonStyle::Compact) << '\n';
}

sf::GatewayConfig gateway_config(const Globals& g) {
  sf::GatewayConfig config =
      sf::load_gateway_config(g.config_file.empty() ? std::nullopt : std::optional<std::filesystem::path>(g.config_file));
  if (!g.endpoint.empty()) config.base_url = g.endpoint;
  if (!g.model.empty()) config.model = g.model;
  return config;
}

std::shared_ptr<sf::Transport> make_transport(const Globals& g) {
  if (!g.replay_dir.empty() && !g.record_dir.empty()) throw UsageError("--replay and --record are exclusive");
  if (!g.replay_dir.empty()) return std::make_shared<sf::ReplayTransport>(sf::ReplayTransport::from_directory(g.replay_dir));
  auto live = std::make_shared<sf::HttpTransport>();
  if (!g.record_dir.empty()) return std::make_shared<sf::RecordingTransport>(live, g.record_dir);
  return live;
}

void log_to_stderr(std::string_view line) { std::cerr << "[gateway] " << line << '\n'; }

void print_validation(const sf::Validation& validation) {
  if (std::holds_alternative<std::monostate>(validation)) return;
  if (sf::validation_valid(validation)) {
    std::cerr << "validation: valid\n";
    return;
  }
  std::cerr << "validation: invalid\n";
  if (const auto* r = std::get_if<sf::ValidationReport>(&validation)) std::cerr << r->to_text();
  if (const auto* r = std::get_if<sf::mapping::SyntaxReport>(&validation)) std::cerr << r->to_text();
}

// Reads ":edit" lines up to a line holding a single ".".
std::string read_block(std::istream& in) {
  std::string text;
  std::string line;
  while (std::getline(in, line)) {
    if (line == "." || line == ".\r") break;
    text += line;
    text += '\n';
  }
  return text;
}

int schema_chat(const Globals& g, const std::string& schema_path, const std::string& select, const std::string& out_path) {
  const sf::GatewayConfig config = gateway_config(g);
  auto transport = make_transport(g);
  std::optional<sf::DataNode> schema;
  if (!schema_path.empty()) schema = load_document(schema_path);
  const sf::DocPath path = sf::DocPath::from_pointer(select);
  sf::SessionState session;

  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line == ":quit") break;
    if (line == ":show") {
      std::cerr << (schema ? sf::serialize_json(*schema, sf::JsonStyle::Pretty) : "(no schema yet)") << '\n';
      if (!session.proposal.empty()) std::cerr << "proposal:\n" << session.proposal << '\n';
      continue;
    }
    try {
      if (line == ":accept") {
        sf::ApplyTarget target;
        target.schema = schema;
        auto applied = sf::apply(session, target);
        session = applied.state;
        schema = applied.result;
        std::cerr << "applied\n";
      } else if (line == ":discard") {
        session = sf::discard(session);
        std::cerr << "discarded\n";
      } else if (line == ":edit") {
        session = sf::user_edit(session, read_block(std::cin));
        print_validation(session.validation);
      } else if (line.front() == ':') {
        std::cerr << "unknown command " << line << " (use :accept :discard :edit :show :quit)\n";
      } else {
        sf::PromptInputs inputs;
        inputs.description = line;
        const bool pending = session.phase == sf::Phase::Proposed || session.phase == sf::Phase::UserEditing;
        if (pending) inputs.prior_proposal = session.proposal;
        sf::PromptKind kind = sf::PromptKind::SchemaCreate;
        if (schema) {
          kind = sf::PromptKind::SchemaModify;
          inputs.schema = schema;
          inputs.context_path = path;
        }
        session = sf::submit(session, sf::build_prompt(kind, inputs), *transport, config, log_to_stderr);
        std::cerr << "proposal:\n" << session.proposal << '\n';
        print_validation(session.validation);
      }
    } catch (const sf::BlockedApply& e) {
      std::cerr << "blocked: " << e.what() << '\n';
    } catch (const sf::IllegalTransition& e) {
      std::cerr << "not now: " << e.what() << '\n';
    } catch (const sf::SchemaRejected& e) {
      std::cerr << "merge rejected:\n" << e.report().to_text();
    }
  }
  if (!schema) {
    std::cerr << "no schema was accepted\n";
    return kInvalid;
  }
  const std::string text = sf::serialize_json(*schema, sf::JsonStyle::Pretty) + "\n";
  if (!out_path.empty()) write_text(out_path, text);
  std::cout << text;
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"SchemaForge: JSON Schema authoring, inference, truncation and mapping"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--endpoint", g.endpoint, "Chat-completion base URL (OpenAI compatible)");
  app.add_option("--model", g.model, "Model name");
  app.add_option("--replay", g.replay_dir, "Answer model calls from <digest>.txt fixtures in this directory");
  app.add_option("--record", g.record_dir, "Call the live endpoint and save each response as a fixture here");
  app.add_option("--config", g.config_file, "Gateway config JSON (base_url, model, api_key, timeout, max_retries, temperature)");
  app.add_flag("--pretty", g.pretty, "Indent JSON output");

  CsvFlags csv;
  const auto add_csv = [&](CLI::App* cmd) {
    cmd->add_option("--csv-delimiter", csv.delimiter, "CSV field delimiter");
    cmd->add_flag("--no-header", csv.no_header, "CSV has no header row (keys col1..N)");
  };

  std::string input;
  std::string to = "json";
  auto* convert = app.add_subcommand("convert", "Convert json/yaml/xml/csv (by extension) to json or yaml");
  convert->add_option("input", input, "Input file")->required();
  convert->add_option("--to", to, "Output format")->check(CLI::IsMember({"json", "yaml"}));
  add_csv(convert);

  std::string required_mode = "intersection";
  bool no_integer = false;
  bool no_merge_items = false;
  auto* infer = app.add_subcommand("infer", "Infer a JSON Schema from a document");
  infer->add_option("input", input, "Document")->required();
  infer->add_option("--required", required_mode, "Which properties are required")
      ->check(CLI::IsMember({"intersection", "all"}));
  infer->add_flag("--no-integer", no_integer, "Report integers as number");
  infer->add_flag("--no-merge-items", no_merge_items, "Keep distinct array element schemas in anyOf");
  add_csv(infer);

  std::string schema_path;
  auto* validate = app.add_subcommand("validate", "Validate a document against a schema");
  validate->add_option("input", input, "Document")->required();
  validate->add_option("--schema", schema_path, "Schema file")->required();
  add_csv(validate);

  sf::TruncationConfig tcfg;
  const auto add_truncation = [&](CLI::App* cmd) {
    cmd->add_option("--truncate-target-bytes", tcfg.target_bytes, "Byte budget for the compact document");
    cmd->add_option("--truncate-n-start", tcfg.n_start, "First element limit");
    cmd->add_option("--truncate-n-min", tcfg.n_min, "Smallest element limit");
    cmd->add_option("--truncate-prop-factor", tcfg.property_factor, "Object member limit as a multiple of n");
  };
  auto* truncate = app.add_subcommand("truncate", "Shrink a document to a byte budget");
  truncate->add_option("input", input, "Document")->required();
  add_truncation(truncate);
  add_csv(truncate);

  std::string select;
  std::string out_path;
  auto* schema_cmd = app.add_subcommand("schema", "Schema assistance");
  schema_cmd->require_subcommand(1);
  auto* chat = schema_cmd->add_subcommand("chat", "Interactive schema chat reading messages from stdin");
  chat->add_option("--schema", schema_path, "Starting schema (omit to create one)");
  chat->add_option("--select", select, "JSON pointer of the part to modify");
  chat->add_option("--out", out_path, "Also write the final schema here");
  chat->footer(
      "Each input line is a message. Commands: :accept, :discard, :edit (lines up to a lone '.'), :show, :quit.\n"
      "The final schema is printed on stdout.");

  std::string target_schema;
  std::string remarks;
  std::string mapping_path;
  auto* map_cmd = app.add_subcommand("map", "Mapping generation and application");
  map_cmd->require_subcommand(1);
  auto* generate = map_cmd->add_subcommand("generate", "Ask the model for a mapping to a target schema");
  generate->add_option("--input", input, "Input document")->required();
  generate->add_option("--target-schema", target_schema, "Target schema")->required();
  generate->add_option("--remarks", remarks, "Extra instructions");
  generate->add_option("--output", mapping_path, "Also write the mapping text to this .jnt file");
  add_truncation(generate);
  add_csv(generate);
  auto* apply_cmd = map_cmd->add_subcommand("apply", "Evaluate a mapping over a document");
  apply_cmd->add_option("--input", input, "Input document")->required();
  apply_cmd->add_option("--mapping", mapping_path, "Mapping expression file (.jnt)")->required();
  add_csv(apply_cmd);

  int port = sf::kDefaultPort;
  std::string host = "127.0.0.1";
  std::string data_dir = "schemaforge-data";
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "Port");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--data-dir", data_dir, "Project directory");
  serve->add_option("--static-dir", static_dir, "Web UI files served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (convert->parsed()) {
    const sf::DataNode doc = load_document(input, csv);
    if (to == "yaml") {
      std::cout << sf::to_yaml(doc);
    } else {
      emit(doc, g.pretty);
    }
    return kOk;
  }
  if (infer->parsed()) {
    sf::InferenceOptions options;
    options.detect_integer = !no_integer;
    options.merge_array_items = !no_merge_items;
    options.required_mode = required_mode == "all" ? sf::RequiredMode::AllPresent : sf::RequiredMode::Intersection;
    emit(sf::with_dialect(sf::infer_schema(load_document(input, csv), options)).doc(), true);
    return kOk;
  }
  if (validate->parsed()) {
    const sf::DataNode doc = load_document(input, csv);
    const sf::ValidationReport report = sf::validate_instance(doc, sf::SchemaNode(load_document(schema_path)));
    emit(report.to_data(), g.pretty);
    if (!report.valid) std::cerr << report.to_text();
    return report.valid ? kOk : kInvalid;
  }
  if (truncate->parsed()) {
    tcfg.check();
    const sf::TruncationOutcome outcome = sf::truncate_document(load_document(input, csv), tcfg);
    sf::DataNode::Array trace;
    for (const auto& [n, bytes] : outcome.trace) {
      trace.emplace_back(sf::ObjectMap{{"n", sf::DataNode(static_cast<std::int64_t>(n))},
                                       {"bytes", sf::DataNode(static_cast<std::int64_t>(bytes))}});
    }
    emit(sf::DataNode(sf::ObjectMap{{"document", outcome.doc},
                                    {"final_n", sf::DataNode(static_cast<std::int64_t>(outcome.final_n))},
                                    {"iterations", sf::DataNode(static_cast<std::int64_t>(outcome.iterations))},
                                    {"bytes", sf::DataNode(static_cast<std::int64_t>(outcome.bytes))},
                                    {"budget_met", sf::DataNode(outcome.budget_met)},
                                    {"trace", sf::DataNode(std::move(trace))}}),
         g.pretty);
    return kOk;
  }
  if (chat->parsed()) return schema_chat(g, schema_path, select, out_path);
  if (generate->parsed()) {
    tcfg.check();
    sf::PromptInputs inputs;
    inputs.document = load_document(input, csv);
    inputs.target_schema = load_document(target_schema);
    if (!remarks.empty()) inputs.remarks = remarks;
    inputs.truncation = tcfg;
    const sf::PromptBundle bundle = sf::build_prompt(sf::PromptKind::MappingGenerate, inputs);
    std::cerr << "document sample: " << bundle.truncation->bytes << " bytes, n=" << bundle.truncation->final_n << '\n';
    const sf::SessionState session =
        sf::submit(sf::SessionState{}, bundle, *make_transport(g), gateway_config(g), log_to_stderr);
    print_validation(session.validation);
    if (!mapping_path.empty()) write_text(mapping_path, session.proposal + "\n");
    const auto& report = std::get<sf::mapping::SyntaxReport>(session.validation);
    emit(sf::DataNode(sf::ObjectMap{{"mapping", sf::DataNode(session.proposal)}, {"report", report.to_data()}}), g.pretty);
    return report.valid ? kOk : kInvalid;
  }
  if (apply_cmd->parsed()) {
    const std::string source = read_text(mapping_path);
    const sf::mapping::SyntaxReport report = sf::mapping::validate_syntax(source);
    if (!report.valid) {
      std::cerr << report.to_text();
      return kInvalid;
    }
    const auto result = sf::mapping::evaluate_mapping(sf::mapping::parse_mapping(source), load_document(input, csv));
    if (!result) std::cerr << "the mapping produced no value\n";
    emit(result.value_or(sf::DataNode(nullptr)), g.pretty);
    return kOk;
  }
  if (serve->parsed()) {
    sf::ServiceOptions options;
    options.data_dir = data_dir;
    if (!static_dir.empty()) options.static_dir = static_dir;
    options.gateway = gateway_config(g);
    options.transport = make_transport(g);
    options.log = log_to_stderr;
    sf::Service service(std::move(options));
    sf::HttpServer server(service);
    const int bound = server.bind(host, port);
    std::cerr << "listening on http://" << host << ":" << bound << '\n';
    server.listen();
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const sf::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const sf::GatewayError& e) {
    std::cerr << "gateway error: " << e.what() << '\n';
    return kGateway;
  } catch (const sf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInvalid;
  } catch (const sf::mapping::MappingSyntaxError& e) {
    std::cerr << "mapping syntax error: " << e.what() << '\n';
    return kInvalid;
  } catch (const sf::mapping::EvaluationError& e) {
    std::cerr << "evaluation error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

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
#include "schemaforge/gateway.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "schemaforge/json.hpp"

namespace schemaforge {
namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("sha-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Pulls error.message out of an OpenAI-style error body, else a prefix of the body.
std::string server_message(const std::string& body) {
  try {
    const DataNode doc = parse_json(body);
    if (const DataNode* error = doc.get("error")) {
      if (const DataNode* message = error->get("message"); message != nullptr && message->is_string()) {
        return message->as_string();
      }
    }
  } catch (const Error&) {
  }
  return body.substr(0, 300);
}

}  // namespace

std::string_view role_name(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::optional<Role> parse_role(std::string_view name) {
  if (name == "system") return Role::System;
  if (name == "user") return Role::User;
  if (name == "assistant") return Role::Assistant;
  return std::nullopt;
}

void GatewayConfig::check() const {
  if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0) {
    throw PreconditionError("base_url must start with http:// or https://");
  }
  if (model.empty()) throw PreconditionError("model must not be empty");
  if (!(timeout_seconds > 0)) throw PreconditionError("timeout must be positive");
  if (max_retries < 0 || max_retries > 10) throw PreconditionError("max_retries must be between 0 and 10");
  if (temperature.is_negative() || temperature > Decimal(2)) throw PreconditionError("temperature must be in [0, 2]");
}

GatewayConfig load_gateway_config(const std::optional<std::filesystem::path>& file) {
  GatewayConfig config;
  if (file) {
    const DataNode doc = parse_json(read_file(*file));
    if (!doc.is_object()) throw PreconditionError("gateway config must be a JSON object");
    const auto text = [&](const char* key, std::string& out) {
      if (const DataNode* v = doc.get(key)) {
        if (!v->is_string()) throw PreconditionError(std::string("config field ") + key + " must be a string");
        out = v->as_string();
      }
    };
    text("base_url", config.base_url);
    text("model", config.model);
    text("api_key", config.api_key);
    if (const DataNode* v = doc.get("timeout"); v != nullptr && v->is_number()) {
      config.timeout_seconds = v->as_number().to_double();
    }
    if (const DataNode* v = doc.get("max_retries"); v != nullptr && v->is_integer()) {
      config.max_retries = static_cast<int>(v->as_number().to_int64().value_or(3));
    }
    if (const DataNode* v = doc.get("temperature"); v != nullptr && v->is_number()) {
      config.temperature = v->as_number();
    }
  }
  if (const char* key = std::getenv(std::string(kApiKeyEnv).c_str()); key != nullptr && *key != '\0') {
    config.api_key = key;
  }
  return config;
}

std::string redact(std::string text, std::string_view secret) {
  if (secret.empty()) return text;
  static constexpr std::string_view kMask = "[redacted]";
  std::size_t pos = 0;
  while ((pos = text.find(secret, pos)) != std::string::npos) {
    text.replace(pos, secret.size(), kMask);
    pos += kMask.size();
  }
  return text;
}

DataNode request_body(const GatewayConfig& config, const std::vector<ChatMessage>& messages) {
  DataNode::Array items;
  items.reserve(messages.size());
  for (const auto& m : messages) {
    items.emplace_back(ObjectMap{{"role", DataNode(role_name(m.role))}, {"content", DataNode(m.content)}});
  }
  return DataNode(ObjectMap{{"model", DataNode(config.model)},
                            {"temperature", DataNode(config.temperature)},
                            {"messages", DataNode(std::move(items))}});
}

std::string request_digest(const GatewayConfig& config, const std::vector<ChatMessage>& messages) {
  return sha256_hex(serialize_json(request_body(config, messages)));
}

std::string complete(Transport& transport, const GatewayConfig& config, const std::vector<ChatMessage>& messages,
                     const LogSink& log) {
  config.check();
  if (messages.empty()) throw PreconditionError("message list must not be empty");
  for (const auto& m : messages) {
    if (m.content.empty()) throw PreconditionError("message content must not be empty");
  }
  const auto emit = [&](const std::string& line) {
    if (log) log(redact(line, config.api_key));
  };
  for (int attempt = 0;; ++attempt) {
    emit("request model=" + config.model + " messages=" + std::to_string(messages.size()) +
         " attempt=" + std::to_string(attempt + 1));
    try {
      return transport.send(config, messages);
    } catch (const RateLimitError& e) {
      if (attempt >= config.max_retries) {
        emit(std::string("giving up: ") + e.what());
        throw RateLimitError(redact(e.what(), config.api_key));
      }
      const auto delay = config.backoff_base * (1LL << attempt);
      emit("rate limited, retrying in " + std::to_string(delay.count()) + " ms");
      std::this_thread::sleep_for(delay);
    } catch (const GatewayError& e) {
      emit(std::string("request failed: ") + e.what());
      throw;
    }
  }
}

std::string HttpTransport::send(const GatewayConfig& config, const std::vector<ChatMessage>& messages) {
  const std::size_t scheme_end = config.base_url.find("://");
  const std::size_t path_start = config.base_url.find('/', scheme_end + 3);
  const std::string origin = config.base_url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : config.base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(origin);
  const auto seconds = std::chrono::duration<double>(config.timeout_seconds);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(seconds);
  client.set_connection_timeout(micros);
  client.set_read_timeout(micros);
  client.set_write_timeout(micros);
  client.enable_server_certificate_verification(true);

  httplib::Headers headers{{"Accept", "application/json"}};
  if (!config.api_key.empty()) headers.emplace("Authorization", "Bearer " + config.api_key);
  const std::string body = serialize_json(request_body(config, messages));

  const auto started = std::chrono::steady_clock::now();
  auto result = client.Post(prefix + "/chat/completions", headers, body, "application/json");
  if (!result) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const auto error = result.error();
    if (error == httplib::Error::ConnectionTimeout || elapsed >= seconds * 0.95) {
      throw TimeoutError("no response from " + origin + " within " + std::to_string(config.timeout_seconds) + " s");
    }
    throw GatewayError("request to " + origin + " failed: " + httplib::to_string(error));
  }
  const int status = result->status;
  if (status == 401 || status == 403) {
    throw AuthError(redact("authentication failed (HTTP " + std::to_string(status) + "): " + server_message(result->body),
                           config.api_key));
  }
  if (status == 429) {
    throw RateLimitError(redact("rate limited (HTTP 429): " + server_message(result->body), config.api_key));
  }
  if (status < 200 || status >= 300) {
    throw GatewayError(redact("HTTP " + std::to_string(status) + ": " + server_message(result->body), config.api_key));
  }
  DataNode doc;
  try {
    doc = parse_json(result->body);
  } catch (const ParseError& e) {
    throw MalformedResponseError(redact(std::string("response is not JSON: ") + e.what(), config.api_key));
  }
  const DataNode* choices = doc.get("choices");
  if (choices == nullptr || !choices->is_array() || choices->as_array().empty()) {
    throw MalformedResponseError("response has no choices");
  }
  const DataNode* message = choices->as_array().front().get("message");
  const DataNode* content = message != nullptr ? message->get("content") : nullptr;
  if (content == nullptr || !content->is_string()) {
    throw MalformedResponseError("response has no choices[0].message.content string");
  }
  return content->as_string();
}

ReplayTransport ReplayTransport::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw PreconditionError("fixture directory not found: " + dir.string());
  std::map<std::string, std::string> fixtures;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      fixtures.emplace(entry.path().stem().string(), read_file(entry.path()));
    }
  }
  return ReplayTransport(std::move(fixtures));
}

std::string ReplayTransport::send(const GatewayConfig& config, const std::vector<ChatMessage>& messages) {
  std::string digest = request_digest(config, messages);
  auto it = fixtures_.find(digest);
  if (it == fixtures_.end()) throw NoFixtureError(std::move(digest));
  return it->second;
}

std::string RecordingTransport::send(const GatewayConfig& config, const std::vector<ChatMessage>& messages) {
  std::string response = live_->send(config, messages);
  const std::string digest = request_digest(config, messages);
  std::lock_guard lock(mutex_);
  std::filesystem::create_directories(dir_);
  const auto target = dir_ / (digest + ".txt");
  const auto temp = dir_ / (digest + ".txt.tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << response;
    if (!out) throw Error("cannot write fixture " + temp.string());
  }
  std::filesystem::rename(temp, target);
  return response;
}

}  // namespace schemaforge

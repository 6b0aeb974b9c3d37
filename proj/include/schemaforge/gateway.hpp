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

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "schemaforge/data_node.hpp"
#include "schemaforge/errors.hpp"

namespace schemaforge {

inline constexpr std::string_view kApiKeyEnv = "SCHEMAFORGE_API_KEY";

enum class Role { System, User, Assistant };
std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view name);

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct GatewayConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o-mini";
  std::string api_key;
  double timeout_seconds = 120;
  int max_retries = 3;
  Decimal temperature;
  /// First retry delay; doubles per attempt.
  std::chrono::milliseconds backoff_base{500};

  /// Throws PreconditionError.
  void check() const;
};

/// Reads optional JSON config (base_url, model, api_key, timeout, max_retries,
/// temperature). SCHEMAFORGE_API_KEY, when set, overrides the file's key.
GatewayConfig load_gateway_config(const std::optional<std::filesystem::path>& file = std::nullopt);

class GatewayError : public Error {
 public:
  using Error::Error;
};
class AuthError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};
class RateLimitError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};
class TimeoutError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};
class MalformedResponseError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};
class NoFixtureError : public GatewayError {
 public:
  explicit NoFixtureError(std::string digest)
      : GatewayError("no fixture for request digest " + digest + " (expected file " + digest + ".txt)"),
        digest_(std::move(digest)) {}
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

/// Replaces every occurrence of `secret` with "[redacted]".
std::string redact(std::string text, std::string_view secret);

/// Request body sent to the endpoint: {model, temperature, messages}.
DataNode request_body(const GatewayConfig& config, const std::vector<ChatMessage>& messages);
/// Lowercase hex SHA-256 of the compact request body. The key is not part of it.
std::string request_digest(const GatewayConfig& config, const std::vector<ChatMessage>& messages);

/// One round trip; no retries. Implementations must be safe to call concurrently.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string send(const GatewayConfig& config, const std::vector<ChatMessage>& messages) = 0;
};

using LogSink = std::function<void(std::string_view)>;

/// Validates inputs, then sends with retries on RateLimitError
/// (backoff_base * 2^attempt). Log lines are redacted before reaching `log`.
std::string complete(Transport& transport, const GatewayConfig& config, const std::vector<ChatMessage>& messages,
                     const LogSink& log = {});

/// OpenAI-compatible POST {base_url}/chat/completions.
class HttpTransport : public Transport {
 public:
  std::string send(const GatewayConfig& config, const std::vector<ChatMessage>& messages) override;
};

/// Answers from recorded responses keyed by request_digest.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::map<std::string, std::string> fixtures) : fixtures_(std::move(fixtures)) {}
  /// Loads every <digest>.txt in `dir`.
  static ReplayTransport from_directory(const std::filesystem::path& dir);

  std::string send(const GatewayConfig& config, const std::vector<ChatMessage>& messages) override;
  std::size_t size() const noexcept { return fixtures_.size(); }

 private:
  std::map<std::string, std::string> fixtures_;
};

/// Forwards to `live` and writes each response to <dir>/<digest>.txt.
class RecordingTransport : public Transport {
 public:
  RecordingTransport(std::shared_ptr<Transport> live, std::filesystem::path dir)
      : live_(std::move(live)), dir_(std::move(dir)) {}

  std::string send(const GatewayConfig& config, const std::vector<ChatMessage>& messages) override;

 private:
  std::shared_ptr<Transport> live_;
  std::filesystem::path dir_;
  std::mutex mutex_;
};

}  // namespace schemaforge

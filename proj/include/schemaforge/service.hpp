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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "schemaforge/assist.hpp"
#include "schemaforge/data_node.hpp"
#include "schemaforge/gateway.hpp"

namespace schemaforge {

inline constexpr int kDefaultPort = 8817;

struct Project {
  std::string id;
  DataNode schema = DataNode(ObjectMap{});
  /// null until a document is uploaded.
  DataNode document;
  std::vector<std::pair<std::string, SessionState>> sessions;
  std::string created;
  std::string modified;

  DataNode to_data() const;
  static Project from_data(const DataNode& data);
};

/// One <id>.json file per project, written with write-then-rename.
class ProjectStore {
 public:
  explicit ProjectStore(std::filesystem::path dir);

  /// New project with the next free id (p1, p2, ...), already saved.
  Project create(const std::string& timestamp);
  std::optional<Project> load(const std::string& id) const;
  void save(const Project& project) const;

 private:
  std::filesystem::path dir_;
  std::mutex mutex_;
  std::size_t next_id_ = 1;
};

struct ServiceOptions {
  std::filesystem::path data_dir = "schemaforge-data";
  /// Web UI bundle served at /, when set.
  std::optional<std::filesystem::path> static_dir;
  GatewayConfig gateway;
  /// Defaults to HttpTransport.
  std::shared_ptr<Transport> transport;
  /// ISO-8601 timestamps; defaults to the current UTC time.
  std::function<std::string()> clock;
  LogSink log;
};

struct ApiResponse {
  int status = 200;
  DataNode body;
};

/// Request handling without any socket. Thread-safe; mutations of one
/// project are serialized.
class Service {
 public:
  explicit Service(ServiceOptions options);

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body);

  const ServiceOptions& options() const noexcept { return options_; }
  /// OpenAPI 3 description of every endpoint with its request schema.
  static DataNode openapi();

 private:
  struct Route;
  std::shared_ptr<std::mutex> project_lock(const std::string& id);

  ServiceOptions options_;
  ProjectStore store_;
  std::mutex locks_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

/// HTTP binding of a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace schemaforge

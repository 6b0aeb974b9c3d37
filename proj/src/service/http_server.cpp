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
#include <httplib.h>

#include "schemaforge/json.hpp"
#include "schemaforge/service.hpp"

namespace schemaforge {

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto& server = impl_->server;
  if (const auto& dir = service.options().static_dir) server.set_mount_point("/", dir->string());
  const auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse r = impl_->service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(serialize_json(r.body), "application/json");
  };
  server.Get("/", [this, forward](const httplib::Request& req, httplib::Response& res) {
    if (impl_->service.options().static_dir) return forward(req, res);
    res.set_content(serialize_json(DataNode(ObjectMap{{"status", DataNode("ok")},
                                                      {"service", DataNode("schemaforge")},
                                                      {"openapi", DataNode("/openapi.json")}})),
                    "application/json");
  });
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Put(".*", forward);
  server.Delete(".*", forward);
  server.Patch(".*", forward);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace schemaforge

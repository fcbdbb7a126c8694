// Copyright 2026 The vsc Authors
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

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "vsc/registry.hpp"

namespace vsc {

// Thin HTTP layer. Bodies are canonical JSON; errors travel as
// {"error": <Errc name>, "message": ...} with a matching status code.

struct HttpReply {
  int status = 0;
  std::string body;
};

/// "http://host:port/path" split into base and path. Throws InvalidArgument.
struct Url {
  std::string base;  // scheme://host:port
  std::string host;
  int port = 0;
  std::string path;  // starts with '/'

  static Url parse(const std::string& url);
};

using Headers = std::vector<std::pair<std::string, std::string>>;

/// Transport failures throw EndpointUnreachable.
HttpReply http_post(const std::string& url, const std::string& body, const Headers& headers = {},
                    int timeout_seconds = 10);
HttpReply http_get(const std::string& url, const Headers& headers = {}, int timeout_seconds = 10);

int http_status_for(Errc code) noexcept;

/// Parses a 2xx reply body, or rethrows the error the server reported.
Value expect_ok(const HttpReply& reply);

struct HttpRequest {
  std::string method;
  std::string path;
  std::string body;
  std::vector<std::string> matches;  // regex captures, [0] is the full path
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lowercased names
  std::string remote_addr;

  std::string header(const std::string& lower_name) const;
  bool from_loopback() const;
  /// Strict canonical parse of the body; MalformedPayload on failure.
  Value json() const;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";

  static HttpResponse json(const Value& v, int status = 200);
  static HttpResponse error(const Error& e);
};

using Handler = std::function<HttpResponse(const HttpRequest&)>;

/// Background HTTP server. Handlers run on the server's worker threads and
/// any vsc::Error they throw becomes an error reply.
class HttpServer {
 public:
  HttpServer();
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  void get(const std::string& pattern, Handler h);
  void post(const std::string& pattern, Handler h);

  /// Binds `host:port` (port 0 picks a free one) and starts serving.
  /// Returns the bound port. Throws Io.
  int start(const std::string& host, int port);
  void stop();
  /// Blocks until the server stops.
  void wait();

  int port() const noexcept { return port_; }
  std::string url() const { return "http://" + host_ + ":" + std::to_string(port_); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;
};

/// "host:port" -> (host, port). Throws InvalidArgument.
std::pair<std::string, int> parse_listen(const std::string& addr);

// ---------------------------------------------------------------- registry

/// Registry access over HTTP. Transport failures throw RegistryUnreachable.
/// The registry node is trusted for status lists; its history can be
/// audited through blocks().
class RemoteRegistry final : public RegistryClient {
 public:
  explicit RemoteRegistry(std::string base_url) : base_(std::move(base_url)) {}

  DidDocument resolve(const Did& did) const override;
  StatusList latest_status(const Did& issuer, const std::string& list_id) const override;
  RegistryBlock anchor(const AnchorRequest& request) override;
  RegistryBlock publish_status(const StatusUpdate& update) override;
  std::vector<RegistryBlock> blocks(std::size_t from = 0) const;

  const std::string& url() const noexcept { return base_; }

 private:
  Value call_get(const std::string& path) const;
  Value call_post(const std::string& path, const Value& body) const;
  std::string base_;
};

/// Routes: POST /anchor, POST /status, GET /resolve/{did},
/// GET /status/{issuer}/{list_id}, GET /chain?from=N.
void mount_registry(HttpServer& server, Registry& registry);

}  // namespace vsc

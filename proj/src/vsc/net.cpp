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

#include "vsc/net.hpp"

#include <algorithm>
#include <cctype>

#include "httplib.h"

namespace vsc {

Url Url::parse(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (!std::string_view(url).starts_with(kScheme)) fail(Errc::InvalidArgument, "only http:// URLs are supported: " + url);
  const auto rest = url.substr(kScheme.size());
  const auto slash = rest.find('/');
  const auto hostport = rest.substr(0, slash);
  Url u;
  u.path = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = hostport.rfind(':');
  if (colon == std::string::npos) {
    u.host = hostport;
    u.port = 80;
  } else {
    u.host = hostport.substr(0, colon);
    try {
      u.port = std::stoi(hostport.substr(colon + 1));
    } catch (const std::exception&) {
      fail(Errc::InvalidArgument, "bad port in " + url);
    }
  }
  if (u.host.empty() || u.port <= 0 || u.port > 65535) fail(Errc::InvalidArgument, "bad URL " + url);
  u.base = std::string(kScheme) + u.host + ":" + std::to_string(u.port);
  return u;
}

std::pair<std::string, int> parse_listen(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) fail(Errc::InvalidArgument, "listen address must be host:port");
  int port = -1;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
  }
  if (port < 0 || port > 65535) fail(Errc::InvalidArgument, "bad port in " + addr);
  return {addr.substr(0, colon), port};
}

namespace {

httplib::Headers to_httplib(const Headers& headers) {
  httplib::Headers out;
  for (const auto& [k, v] : headers) out.emplace(k, v);
  return out;
}

httplib::Client make_client(const Url& u, int timeout_seconds) {
  httplib::Client cli(u.host, u.port);
  cli.set_connection_timeout(timeout_seconds, 0);
  cli.set_read_timeout(timeout_seconds, 0);
  cli.set_write_timeout(timeout_seconds, 0);
  return cli;
}

HttpReply finish(const httplib::Result& res, const std::string& url) {
  if (!res) fail(Errc::EndpointUnreachable, url + ": " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

}  // namespace

HttpReply http_post(const std::string& url, const std::string& body, const Headers& headers, int timeout_seconds) {
  const Url u = Url::parse(url);
  auto cli = make_client(u, timeout_seconds);
  return finish(cli.Post(u.path, to_httplib(headers), body, "application/json"), url);
}

HttpReply http_get(const std::string& url, const Headers& headers, int timeout_seconds) {
  const Url u = Url::parse(url);
  auto cli = make_client(u, timeout_seconds);
  return finish(cli.Get(u.path, to_httplib(headers)), url);
}

int http_status_for(Errc code) noexcept {
  switch (code) {
    case Errc::NotFound:
    case Errc::UnknownRequest:
    case Errc::UnknownCustomer: return 404;
    case Errc::RequestExpired: return 410;
    case Errc::Unauthorized:
    case Errc::WrongPassphrase: return 403;
    case Errc::NonMonotoneStatus:
    case Errc::StatusSlotTaken:
    case Errc::AlreadyDecided:
    case Errc::ChainBroken: return 409;
    case Errc::RegistryUnreachable:
    case Errc::EndpointUnreachable: return 502;
    case Errc::Io: return 500;
    default: return 400;
  }
}

Value expect_ok(const HttpReply& reply) {
  if (reply.status >= 200 && reply.status < 300) {
    try {
      return parse(reply.body);
    } catch (const Error& e) {
      fail(Errc::MalformedPayload, std::string("reply body: ") + e.what());
    }
  }
  Errc code = Errc::Io;
  std::string message = "unexpected HTTP status " + std::to_string(reply.status);
  try {
    const Value v = parse(reply.body);
    if (auto known = errc_from_name(v.at("error").as_text())) {
      code = *known;
      message = v.at("message").as_text();
    }
  } catch (const Error&) {
    // not one of ours; report the status
  }
  fail(code, message);
}

std::string HttpRequest::header(const std::string& lower_name) const {
  auto it = headers.find(lower_name);
  return it == headers.end() ? std::string() : it->second;
}

bool HttpRequest::from_loopback() const {
  return remote_addr == "127.0.0.1" || remote_addr == "::1" || remote_addr.starts_with("::ffff:127.") ||
         remote_addr.starts_with("127.");
}

Value HttpRequest::json() const {
  try {
    return parse(body);
  } catch (const Error& e) {
    fail(Errc::MalformedPayload, std::string("request body: ") + e.what());
  }
}

HttpResponse HttpResponse::json(const Value& v, int status) { return {status, canonicalize(v), "application/json"}; }

HttpResponse HttpResponse::error(const Error& e) {
  std::string message = e.what();
  const auto prefix = std::string(errc_name(e.code())) + ": ";
  if (message.starts_with(prefix)) message.erase(0, prefix.size());
  return json(Value::Map{{"error", errc_name(e.code())}, {"message", message}}, http_status_for(e.code()));
}

// ------------------------------------------------------------------ server

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

httplib::Server::Handler wrap(Handler h) {
  return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
    HttpRequest r;
    r.method = req.method;
    r.path = req.path;
    r.body = req.body;
    for (const auto& m : req.matches) r.matches.push_back(m.str());
    for (const auto& [k, v] : req.params) r.query[k] = v;
    for (const auto& [k, v] : req.headers) {
      std::string key = k;
      std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
      r.headers[key] = v;
    }
    r.remote_addr = req.remote_addr;
    HttpResponse out;
    try {
      out = h(r);
    } catch (const Error& e) {
      out = HttpResponse::error(e);
    } catch (const std::exception& e) {
      out = HttpResponse::error(Error(Errc::Io, e.what()));
    }
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
}

}  // namespace

HttpServer::HttpServer() : impl_(std::make_unique<Impl>()) {
  impl_->server.set_payload_max_length(8u << 20);
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::get(const std::string& pattern, Handler h) { impl_->server.Get(pattern, wrap(std::move(h))); }
void HttpServer::post(const std::string& pattern, Handler h) { impl_->server.Post(pattern, wrap(std::move(h))); }

int HttpServer::start(const std::string& host, int port) {
  auto& s = impl_->server;
  if (port == 0) {
    port_ = s.bind_to_any_port(host);
    if (port_ < 0) fail(Errc::Io, "cannot bind " + host);
  } else {
    if (!s.bind_to_port(host, port)) fail(Errc::Io, "cannot bind " + host + ":" + std::to_string(port));
    port_ = port;
  }
  host_ = host;
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  s.wait_until_ready();
  return port_;
}

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

void HttpServer::wait() {
  if (thread_.joinable()) thread_.join();
}

// ---------------------------------------------------------------- registry

Value RemoteRegistry::call_get(const std::string& path) const {
  try {
    return expect_ok(http_get(base_ + path));
  } catch (const Error& e) {
    if (e.code() == Errc::EndpointUnreachable || e.code() == Errc::Io) fail(Errc::RegistryUnreachable, e.what());
    throw;
  }
}

Value RemoteRegistry::call_post(const std::string& path, const Value& body) const {
  try {
    return expect_ok(http_post(base_ + path, canonicalize(body)));
  } catch (const Error& e) {
    if (e.code() == Errc::EndpointUnreachable || e.code() == Errc::Io) fail(Errc::RegistryUnreachable, e.what());
    throw;
  }
}

DidDocument RemoteRegistry::resolve(const Did& did) const {
  auto doc = DidDocument::from_value(call_get("/resolve/" + did.str()));
  if (doc.did != did) fail(Errc::MalformedPayload, "registry answered for another DID");
  return doc;
}

StatusList RemoteRegistry::latest_status(const Did& issuer, const std::string& list_id) const {
  auto up = StatusUpdate::from_value(call_get("/status/" + issuer.str() + "/" + list_id));
  if (up.list.issuer != issuer || up.list.list_id != list_id) {
    fail(Errc::MalformedPayload, "registry answered for another status list");
  }
  return up.list;
}

RegistryBlock RemoteRegistry::anchor(const AnchorRequest& request) {
  return RegistryBlock::from_value(call_post("/anchor", request.to_value()));
}

RegistryBlock RemoteRegistry::publish_status(const StatusUpdate& update) {
  return RegistryBlock::from_value(call_post("/status", update.to_value()));
}

std::vector<RegistryBlock> RemoteRegistry::blocks(std::size_t from) const {
  std::vector<RegistryBlock> out;
  const Value reply = call_get("/chain?from=" + std::to_string(from));
  for (const auto& b : reply.at("blocks").as_list()) {
    out.push_back(RegistryBlock::from_value(b));
  }
  return out;
}

void mount_registry(HttpServer& server, Registry& registry) {
  server.post("/anchor", [&registry](const HttpRequest& r) {
    AnchorRequest req;
    try {
      req = AnchorRequest::from_value(r.json());
    } catch (const Error& e) {
      fail(Errc::MalformedPayload, e.what());
    }
    return HttpResponse::json(registry.anchor(req).to_value());
  });
  server.post("/status", [&registry](const HttpRequest& r) {
    return HttpResponse::json(registry.append(PayloadKind::StatusUpdate, r.json()).to_value());
  });
  server.get(R"(/resolve/([^/]+))", [&registry](const HttpRequest& r) {
    return HttpResponse::json(registry.resolve(Did::parse(r.matches.at(1))).to_value());
  });
  server.get(R"(/status/([^/]+)/([^/]+))", [&registry](const HttpRequest& r) {
    return HttpResponse::json(registry.latest_status_update(Did::parse(r.matches.at(1)), r.matches.at(2)).to_value());
  });
  server.get("/chain", [&registry](const HttpRequest& r) {
    std::size_t from = 0;
    if (auto it = r.query.find("from"); it != r.query.end()) {
      try {
        from = std::stoull(it->second);
      } catch (const std::exception&) {
        fail(Errc::InvalidArgument, "from must be a block index");
      }
    }
    Value::List blocks;
    for (const auto& b : registry.blocks(from)) blocks.push_back(b.to_value());
    return HttpResponse::json(Value::Map{{"blocks", std::move(blocks)}});
  });
}

}  // namespace vsc

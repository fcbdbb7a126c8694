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

#include "doctest.h"
#include "support.hpp"
#include "vsc/net.hpp"

using namespace vsc;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Io;
}

struct RegistryHost {
  Instant now = Instant::parse("2021-06-01T09:00:00Z");
  Registry registry{[this] { return now; }};
  HttpServer server;
  RegistryHost() {
    mount_registry(server, registry);
    server.start("127.0.0.1", 0);
  }
};

}  // namespace

TEST_CASE("url and listen parsing") {
  auto u = Url::parse("http://127.0.0.1:8080/a/b");
  CHECK(u.host == "127.0.0.1");
  CHECK(u.port == 8080);
  CHECK(u.path == "/a/b");
  CHECK(u.base == "http://127.0.0.1:8080");
  CHECK(Url::parse("http://example").port == 80);
  CHECK(code_of([] { Url::parse("https://x"); }) == Errc::InvalidArgument);
  CHECK(code_of([] { Url::parse("http://x:99999"); }) == Errc::InvalidArgument);
  CHECK(parse_listen("0.0.0.0:7000") == std::pair<std::string, int>{"0.0.0.0", 7000});
  CHECK(code_of([] { parse_listen("7000"); }) == Errc::InvalidArgument);
}

TEST_CASE("every error code maps to a status and back") {
  for (int i = 0; i <= static_cast<int>(Errc::Io); ++i) {
    const auto code = static_cast<Errc>(i);
    const auto reply = HttpResponse::error(Error(code, "boom"));
    CHECK(reply.status == http_status_for(code));
    CHECK(reply.body == canonicalize(Value::Map{{"error", errc_name(code)}, {"message", "boom"}}));
    CHECK(code_of([&] { expect_ok({reply.status, reply.body}); }) == code);
  }
  CHECK(http_status_for(Errc::UnknownCustomer) == 404);
  CHECK(http_status_for(Errc::RequestExpired) == 410);
  CHECK(http_status_for(Errc::WrongPassphrase) == 403);
  CHECK(http_status_for(Errc::AlreadyDecided) == 409);
  CHECK(http_status_for(Errc::RegistryUnreachable) == 502);
  CHECK(code_of([] { expect_ok({500, "not json"}); }) == Errc::Io);
}

TEST_CASE("registry over HTTP") {
  RegistryHost host;
  RemoteRegistry remote(host.server.url());

  auto g = generate_did(std::string("http://127.0.0.1:1/"));
  CHECK(code_of([&] { remote.resolve(g.did); }) == Errc::NotFound);
  remote.anchor(sign_anchor(g.document, g.keys.secret));
  CHECK(remote.resolve(g.did) == g.document);

  // Anchoring with a foreign key is refused with the registry's own code.
  auto other = generate_did();
  CHECK(code_of([&] { remote.anchor(sign_anchor(other.document, g.keys.secret)); }) == Errc::Unauthorized);

  ensure_status_list(g.keys, g.did, "status-0", remote);
  CHECK(remote.latest_status(g.did, "status-0").version == 0);
  revoke(g.keys, g.did, {"status-0", 5}, remote);
  auto list = remote.latest_status(g.did, "status-0");
  CHECK(list.version == 1);
  CHECK(list.test(5));
  CHECK(code_of([&] { remote.latest_status(g.did, "status-9"); }) == Errc::NotFound);

  auto blocks = remote.blocks();
  CHECK(blocks.size() == host.registry.blocks().size());
  CHECK(remote.blocks(1).size() == blocks.size() - 1);
  for (std::size_t i = 0; i < blocks.size(); ++i) CHECK(blocks[i].block_hash == host.registry.blocks()[i].block_hash);

  // Non-canonical bodies are rejected before they reach the registry.
  auto reply = http_post(host.server.url() + "/status", "{ }");
  CHECK(reply.status == 400);
  CHECK(code_of([&] { expect_ok(reply); }) == Errc::MalformedPayload);
}

TEST_CASE("unreachable registry") {
  RemoteRegistry remote("http://127.0.0.1:1");
  auto g = generate_did();
  CHECK(code_of([&] { remote.resolve(g.did); }) == Errc::RegistryUnreachable);
  CHECK(code_of([&] { remote.latest_status(g.did, "status-0"); }) == Errc::RegistryUnreachable);
  CHECK(code_of([&] { remote.anchor(sign_anchor(g.document, g.keys.secret)); }) == Errc::RegistryUnreachable);
}

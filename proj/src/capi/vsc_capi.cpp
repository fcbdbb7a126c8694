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

#include "vsc/vsc.h"

#include <cstring>
#include <memory>
#include <new>

#include "vsc/bank.hpp"
#include "vsc/holder.hpp"
#include "vsc/issuer.hpp"
#include "vsc/net.hpp"

using namespace vsc;

struct vsc_registry {
  std::unique_ptr<Registry> registry;
  std::unique_ptr<HttpServer> http;
};

struct vsc_issuer {
  std::unique_ptr<RemoteRegistry> registry;
  std::unique_ptr<IssuerService> service;
  std::unique_ptr<HttpServer> http;
};

struct vsc_bank {
  std::unique_ptr<RemoteRegistry> registry;
  std::unique_ptr<BankService> service;
  std::unique_ptr<HttpServer> http;
};

struct vsc_wallet {
  std::unique_ptr<RemoteRegistry> registry;
  std::unique_ptr<HolderAgent> agent;
  std::unique_ptr<HttpServer> http;
};

namespace {

thread_local std::string g_last_error;

constexpr int kErrcCount = static_cast<int>(Errc::Io) + 1;

template <class F>
vsc_status guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return VSC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<vsc_status>(static_cast<int>(e.code()) + 1);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return VSC_E_INTERNAL;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

std::string need(const char* s, const char* what) {
  if (!s) fail(Errc::InvalidArgument, std::string(what) + " is required");
  return s;
}

std::optional<std::string> opt(const char* s) {
  if (!s || !*s) return std::nullopt;
  return std::string(s);
}

template <class H>
H* need_handle(H* h) {
  if (!h) fail(Errc::InvalidArgument, "null handle");
  return h;
}

void stop(std::unique_ptr<HttpServer>& http) {
  if (http) {
    http->stop();
    http.reset();
  }
}

Headers bearer(const char* token) {
  if (!token || !*token) return {};
  return {{"Authorization", std::string("Bearer ") + token}};
}

std::string trim_slash(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

Value now_body(const char* now) {
  Value::Map m;
  if (now) m["now"] = encode_instant(Instant::parse(now));
  return m;
}

}  // namespace

extern "C" {

const char* vsc_version(void) { return "0.1.0"; }

const char* vsc_status_name(vsc_status status) {
  if (status == VSC_OK) return "Ok";
  const int i = static_cast<int>(status) - 1;
  if (i >= 0 && i < kErrcCount) return errc_name(static_cast<Errc>(i)).data();
  return "Internal";
}

const char* vsc_last_error(void) { return g_last_error.c_str(); }

void vsc_string_free(char* s) { std::free(s); }

// ------------------------------------------------------------ registry

vsc_status vsc_registry_open(const char* data_dir, vsc_registry** out) {
  return guard([&] {
    if (!out) fail(Errc::InvalidArgument, "out is required");
    auto h = std::make_unique<vsc_registry>();
    h->registry = data_dir ? std::make_unique<Registry>(std::filesystem::path(data_dir)) : std::make_unique<Registry>();
    *out = h.release();
  });
}

vsc_status vsc_registry_serve(vsc_registry* r, const char* listen, char** url_out) {
  return guard([&] {
    need_handle(r);
    if (r->http) fail(Errc::InvalidArgument, "already serving");
    auto [host, port] = parse_listen(need(listen, "listen"));
    auto http = std::make_unique<HttpServer>();
    mount_registry(*http, *r->registry);
    http->start(host, port);
    r->http = std::move(http);
    put(url_out, r->http->url());
  });
}

vsc_status vsc_registry_height(vsc_registry* r, size_t* out) {
  return guard([&] {
    need_handle(r);
    if (!out) fail(Errc::InvalidArgument, "out is required");
    *out = r->registry->size();
  });
}

void vsc_registry_stop(vsc_registry* r) {
  if (r) stop(r->http);
}

void vsc_registry_close(vsc_registry* r) {
  if (!r) return;
  stop(r->http);
  delete r;
}

// -------------------------------------------------------------- issuer

vsc_status vsc_issuer_open(const char* registry_url, const char* records, const char* state_dir, vsc_issuer** out) {
  return guard([&] {
    if (!out) fail(Errc::InvalidArgument, "out is required");
    auto h = std::make_unique<vsc_issuer>();
    h->registry = std::make_unique<RemoteRegistry>(trim_slash(need(registry_url, "registry_url")));
    std::optional<std::filesystem::path> dir;
    if (state_dir) dir = state_dir;
    h->service = std::make_unique<IssuerService>(*h->registry, dir);
    if (records) h->service->add_records(ingest(records));
    *out = h.release();
  });
}

vsc_status vsc_issuer_did(vsc_issuer* i, char** out) {
  return guard([&] { put(out, need_handle(i)->service->did().str()); });
}

vsc_status vsc_issuer_load_records(vsc_issuer* i, const char* records, size_t* count_out) {
  return guard([&] {
    need_handle(i);
    auto recs = ingest(need(records, "records"));
    if (count_out) *count_out = recs.size();
    i->service->add_records(std::move(recs));
  });
}

vsc_status vsc_issuer_serve(vsc_issuer* i, const char* listen, const char* admin_token, char** url_out) {
  return guard([&] {
    need_handle(i);
    if (i->http) fail(Errc::InvalidArgument, "already serving");
    auto [host, port] = parse_listen(need(listen, "listen"));
    auto http = std::make_unique<HttpServer>();
    i->service->mount(*http, opt(admin_token));
    http->start(host, port);
    i->http = std::move(http);
    put(url_out, i->http->url());
  });
}

vsc_status vsc_issuer_revoke(vsc_issuer* i, const char* credential_id) {
  return guard([&] { need_handle(i)->service->revoke_credential(need(credential_id, "credential_id")); });
}

vsc_status vsc_issuer_issued(vsc_issuer* i, char** json_out) {
  return guard([&] {
    Value::List l;
    for (const auto& info : need_handle(i)->service->issued()) {
      l.push_back(Value::Map{{"credential", info.credential.to_value()}, {"revoked", info.revoked}});
    }
    put(json_out, canonicalize(Value::Map{{"issued", std::move(l)}}));
  });
}

void vsc_issuer_stop(vsc_issuer* i) {
  if (i) stop(i->http);
}

void vsc_issuer_close(vsc_issuer* i) {
  if (!i) return;
  stop(i->http);
  delete i;
}

// ---------------------------------------------------------------- bank

vsc_status vsc_bank_open(const char* registry_url, const char* data_dir, vsc_bank** out) {
  return guard([&] {
    if (!out) fail(Errc::InvalidArgument, "out is required");
    auto h = std::make_unique<vsc_bank>();
    h->registry = std::make_unique<RemoteRegistry>(trim_slash(need(registry_url, "registry_url")));
    std::optional<std::filesystem::path> dir;
    if (data_dir) dir = data_dir;
    h->service = std::make_unique<BankService>(*h->registry, dir);
    *out = h.release();
  });
}

vsc_status vsc_bank_did(vsc_bank* b, char** out) {
  return guard([&] { put(out, need_handle(b)->service->did().str()); });
}

vsc_status vsc_bank_serve(vsc_bank* b, const char* listen, const char* public_url, const char* admin_token,
                          char** url_out) {
  return guard([&] {
    need_handle(b);
    if (b->http) fail(Errc::InvalidArgument, "already serving");
    auto [host, port] = parse_listen(need(listen, "listen"));
    auto http = std::make_unique<HttpServer>();
    b->service->mount(*http, opt(admin_token));
    http->start(host, port);
    b->service->set_public_url(public_url ? trim_slash(public_url) : http->url());
    b->http = std::move(http);
    put(url_out, b->http->url());
  });
}

vsc_status vsc_bank_register_customer(vsc_bank* b, const char* customer_ref, const char* holder_did) {
  return guard([&] {
    need_handle(b)->service->register_customer(need(customer_ref, "customer_ref"),
                                               Did::parse(need(holder_did, "holder_did")));
  });
}

vsc_status vsc_bank_open_exchange(vsc_bank* b, const char* customer_ref, const char* scenario_json,
                                  char** request_out) {
  return guard([&] {
    need_handle(b);
    auto spec = ScenarioSpec::from_value(parse(need(scenario_json, "scenario_json")));
    put(request_out, canonicalize(b->service->open_exchange(need(customer_ref, "customer_ref"), spec).to_value()));
  });
}

vsc_status vsc_bank_flags(vsc_bank* b, const char* customer_ref, char** json_out) {
  return guard([&] {
    const auto ref = need(customer_ref, "customer_ref");
    Value::List l;
    for (const auto& f : need_handle(b)->service->store().flags(ref)) l.push_back(f.to_value());
    put(json_out, canonicalize(Value::Map{{"customer_ref", ref}, {"flags", std::move(l)}}));
  });
}

vsc_status vsc_bank_review(vsc_bank* b, const char* now, char** json_out) {
  return guard([&] {
    need_handle(b);
    const Instant t = now ? Instant::parse(now) : system_clock()();
    put(json_out, canonicalize(review_report(b->service->store().run_review(t), t)));
  });
}

vsc_status vsc_bank_forget(vsc_bank* b, const char* customer_ref, char** json_out) {
  return guard([&] {
    need_handle(b);
    auto report = b->service->store().forget_customer(need(customer_ref, "customer_ref"), system_clock()());
    put(json_out, canonicalize(report.to_value()));
  });
}

void vsc_bank_stop(vsc_bank* b) {
  if (b) stop(b->http);
}

void vsc_bank_close(vsc_bank* b) {
  if (!b) return;
  stop(b->http);
  delete b;
}

vsc_status vsc_bank_store_review(const char* data_dir, const char* now, char** json_out) {
  return guard([&] {
    const std::filesystem::path dir = need(data_dir, "data_dir");
    if (!std::filesystem::is_directory(dir)) fail(Errc::NotFound, "no bank store at " + dir.string());
    BankStore store(dir);
    const Instant t = now ? Instant::parse(now) : system_clock()();
    put(json_out, canonicalize(review_report(store.run_review(t), t)));
  });
}

vsc_status vsc_bank_client_open_exchange(const char* bank_url, const char* token, const char* customer_ref,
                                         const char* holder_did, const char* scenario_json, char** request_out) {
  return guard([&] {
    Value::Map body{{"customer_ref", need(customer_ref, "customer_ref")},
                    {"scenario", parse(need(scenario_json, "scenario_json"))}};
    if (holder_did) body["holder_did"] = Did::parse(holder_did).str();
    auto reply = http_post(trim_slash(need(bank_url, "bank_url")) + "/exchange/open", canonicalize(body), bearer(token));
    put(request_out, canonicalize(expect_ok(reply)));
  });
}

vsc_status vsc_bank_client_review(const char* bank_url, const char* token, const char* now, char** json_out) {
  return guard([&] {
    auto reply = http_post(trim_slash(need(bank_url, "bank_url")) + "/flags/review", canonicalize(now_body(now)),
                           bearer(token));
    put(json_out, canonicalize(expect_ok(reply)));
  });
}

vsc_status vsc_bank_client_flags(const char* bank_url, const char* token, const char* customer_ref, char** json_out) {
  return guard([&] {
    auto reply = http_get(trim_slash(need(bank_url, "bank_url")) + "/flags/" + need(customer_ref, "customer_ref"),
                          bearer(token));
    put(json_out, canonicalize(expect_ok(reply)));
  });
}

// -------------------------------------------------------------- wallet

vsc_status vsc_wallet_create(const char* file, const char* passphrase, const char* registry_url, vsc_wallet** out) {
  return guard([&] {
    if (!out) fail(Errc::InvalidArgument, "out is required");
    auto h = std::make_unique<vsc_wallet>();
    h->registry = std::make_unique<RemoteRegistry>(trim_slash(need(registry_url, "registry_url")));
    h->agent = HolderAgent::create(need(file, "file"), need(passphrase, "passphrase"), *h->registry);
    *out = h.release();
  });
}

vsc_status vsc_wallet_open(const char* file, const char* passphrase, const char* registry_url, vsc_wallet** out) {
  return guard([&] {
    if (!out) fail(Errc::InvalidArgument, "out is required");
    auto h = std::make_unique<vsc_wallet>();
    h->registry = std::make_unique<RemoteRegistry>(trim_slash(need(registry_url, "registry_url")));
    h->agent = HolderAgent::open(need(file, "file"), need(passphrase, "passphrase"), *h->registry);
    *out = h.release();
  });
}

vsc_status vsc_wallet_did(vsc_wallet* w, char** out) {
  return guard([&] { put(out, need_handle(w)->agent->did().str()); });
}

vsc_status vsc_wallet_fetch(vsc_wallet* w, const char* issuer_url, const char* nhs_number, char** json_out) {
  return guard([&] {
    need_handle(w);
    auto pair = w->agent->fetch_from_issuer(trim_slash(need(issuer_url, "issuer_url")), need(nhs_number, "nhs_number"));
    std::vector<WalletEntry> fetched;
    for (const auto& e : w->agent->entries()) {
      const auto& id = e.credential.credential_id;
      if (id == pair.full.credential.credential_id || id == pair.fairness.credential.credential_id) fetched.push_back(e);
    }
    put(json_out, canonicalize(wallet_view(w->agent->did(), fetched)));
  });
}

vsc_status vsc_wallet_list(vsc_wallet* w, char** json_out) {
  return guard([&] {
    need_handle(w);
    put(json_out, canonicalize(wallet_view(w->agent->did(), w->agent->entries())));
  });
}

vsc_status vsc_wallet_refresh(vsc_wallet* w, char** json_out) {
  return guard([&] {
    need_handle(w);
    put(json_out, canonicalize(wallet_view(w->agent->did(), w->agent->status_refresh())));
  });
}

vsc_status vsc_wallet_serve(vsc_wallet* w, const char* listen, const char* public_url, char** url_out) {
  return guard([&] {
    need_handle(w);
    if (w->http) fail(Errc::InvalidArgument, "already serving");
    auto [host, port] = parse_listen(need(listen, "listen"));
    auto http = std::make_unique<HttpServer>();
    w->agent->mount(*http);
    http->start(host, port);
    try {
      w->agent->publish_endpoint(public_url ? trim_slash(public_url) : http->url());
    } catch (...) {
      http->stop();
      throw;
    }
    w->agent->start_expiry_timer(std::chrono::seconds(1));
    w->http = std::move(http);
    put(url_out, w->http->url());
  });
}

void vsc_wallet_stop(vsc_wallet* w) {
  if (!w) return;
  w->agent->stop_expiry_timer();
  stop(w->http);
}

void vsc_wallet_close(vsc_wallet* w) {
  if (!w) return;
  vsc_wallet_stop(w);
  delete w;
}

vsc_status vsc_agent_inbox(const char* agent_url, char** json_out) {
  return guard([&] {
    put(json_out, canonicalize(expect_ok(http_get(trim_slash(need(agent_url, "agent_url")) + "/inbox"))));
  });
}

vsc_status vsc_agent_decide(const char* agent_url, const char* request_id, vsc_decision decision,
                            const size_t* granted, size_t count, char** json_out) {
  return guard([&] {
    Value::Map body;
    switch (decision) {
      case VSC_DECISION_ACCEPT_ALL: body["decision"] = "ACCEPT_ALL"; break;
      case VSC_DECISION_DENY: body["decision"] = "DENY"; break;
      case VSC_DECISION_PARTIAL: {
        body["decision"] = "PARTIAL";
        if (count && !granted) fail(Errc::InvalidArgument, "granted is required");
        Value::List l;
        for (size_t k = 0; k < count; ++k) l.push_back(static_cast<std::int64_t>(granted[k]));
        body["granted"] = std::move(l);
        break;
      }
      default: fail(Errc::InvalidArgument, "unknown decision");
    }
    const auto url = trim_slash(need(agent_url, "agent_url")) + "/inbox/" + need(request_id, "request_id") + "/decide";
    put(json_out, canonicalize(expect_ok(http_post(url, canonicalize(body)))));
  });
}

vsc_status vsc_agent_audit(const char* agent_url, char** json_out) {
  return guard([&] {
    put(json_out, canonicalize(expect_ok(http_get(trim_slash(need(agent_url, "agent_url")) + "/audit"))));
  });
}

}  // extern "C"

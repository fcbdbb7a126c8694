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

#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cli_common.hpp"

namespace {

constexpr const char* kPassEnv = "VSC_WALLET_PASSPHRASE";

std::vector<size_t> parse_indices(const std::string& csv) {
  std::vector<size_t> out;
  std::stringstream ss(csv);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part.empty()) continue;
    try {
      size_t used = 0;
      const long v = std::stol(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      out.push_back(static_cast<size_t>(v));
    } catch (const std::exception&) {
      std::fprintf(stderr, "--grant: bad index '%s'\n", part.c_str());
      throw cli::Failure{2};
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Holder wallet and consent agent"};
  app.require_subcommand(1);

  std::string store, registry, pass_file;
  auto store_opts = [&](CLI::App* sub) {
    sub->add_option("--store", store, "Encrypted wallet file")->required();
    sub->add_option("--registry", registry, "Registry base URL")->required();
    sub->add_option("--passphrase-file", pass_file, std::string("Passphrase file (or ") + kPassEnv + ")");
  };

  auto* init = app.add_subcommand("init", "Create a wallet and anchor a new DID");
  store_opts(init);

  std::string issuer, nhs;
  auto* fetch = app.add_subcommand("fetch", "Obtain credentials from an issuer");
  store_opts(fetch);
  fetch->add_option("--issuer", issuer, "Issuer base URL")->required();
  fetch->add_option("--nhs", nhs, "NHS number the issuer holds for you")->required();

  auto* list = app.add_subcommand("list", "Show stored credentials");
  store_opts(list);
  bool refresh = false;
  list->add_flag("--refresh", refresh, "Re-check revocation status first");

  std::string listen = "127.0.0.1:8470", public_url;
  auto* serve = app.add_subcommand("serve", "Run the agent: receive requests, serve the local consent API");
  store_opts(serve);
  serve->add_option("--listen", listen, "host:port")->capture_default_str();
  serve->add_option("--public-url", public_url, "URL published in the DID document (default: the bound URL)");

  std::string agent = "http://127.0.0.1:8470";
  auto* inbox = app.add_subcommand("inbox", "Show pending and past requests");
  inbox->add_option("--agent", agent, "Agent URL")->capture_default_str();

  std::string request_id, grant;
  bool accept = false, deny = false;
  auto* decide = app.add_subcommand("decide", "Answer a request");
  decide->add_option("request-id", request_id)->required();
  auto* choice = decide->add_option_group("decision");
  choice->add_flag("--accept", accept, "Share everything requested");
  choice->add_flag("--deny", deny, "Share nothing");
  choice->add_option("--grant", grant, "Share only these item indices, e.g. 0,2");
  choice->require_option(1);
  decide->add_option("--agent", agent, "Agent URL")->capture_default_str();

  auto* audit = app.add_subcommand("audit", "Show the disclosure history");
  audit->add_option("--agent", agent, "Agent URL")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  return cli::run([&] {
    char* out = nullptr;
    if (*inbox) {
      cli::check(vsc_agent_inbox(agent.c_str(), &out), "inbox");
      cli::print(out);
      return 0;
    }
    if (*audit) {
      cli::check(vsc_agent_audit(agent.c_str(), &out), "audit");
      cli::print(out);
      return 0;
    }
    if (*decide) {
      std::vector<size_t> granted;
      vsc_decision d = accept ? VSC_DECISION_ACCEPT_ALL : VSC_DECISION_DENY;
      if (!accept && !deny) {
        d = VSC_DECISION_PARTIAL;
        granted = parse_indices(grant);
      }
      cli::check(vsc_agent_decide(agent.c_str(), request_id.c_str(), d, granted.data(), granted.size(), &out),
                 "decide");
      cli::print(out);
      return 0;
    }

    const std::string pass = cli::secret(kPassEnv, pass_file, "passphrase");
    std::optional<sigset_t> signals;
    if (*serve) signals = cli::block_shutdown_signals();
    vsc_wallet* w = nullptr;
    if (*init) {
      cli::check(vsc_wallet_create(store.c_str(), pass.c_str(), registry.c_str(), &w), "create wallet");
    } else {
      cli::check(vsc_wallet_open(store.c_str(), pass.c_str(), registry.c_str(), &w), "open wallet");
    }
    struct Closer {
      vsc_wallet* w;
      ~Closer() { vsc_wallet_close(w); }
    } closer{w};

    if (*init) {
      cli::check(vsc_wallet_did(w, &out), "did");
    } else if (*fetch) {
      cli::check(vsc_wallet_fetch(w, issuer.c_str(), nhs.c_str(), &out), "fetch");
    } else if (*list) {
      cli::check(refresh ? vsc_wallet_refresh(w, &out) : vsc_wallet_list(w, &out), "list");
    } else {
      cli::check(vsc_wallet_serve(w, listen.c_str(), cli::or_null(public_url), &out), "serve");
      cli::print(out);
      cli::wait_for_shutdown(*signals);
      return 0;
    }
    cli::print(out);
    return 0;
  });
}

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

#include "CLI11.hpp"
#include "cli_common.hpp"

namespace {

// The two built-in request shapes; anything else comes from --request.
std::string scenario_json(const std::string& scheme, const std::string& request_file) {
  if (!request_file.empty()) return cli::slurp(request_file);
  if (scheme == "ffa") return R"({"purpose":"Fairness for All support check","scheme":"FairnessForAll"})";
  std::fprintf(stderr, "unknown scheme %s\n", scheme.c_str());
  throw cli::Failure{2};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bank verifier"};
  app.require_subcommand(1);

  std::string registry, listen = "127.0.0.1:8420", data, public_url, token_file;
  auto* serve = app.add_subcommand("serve", "Run the verifier service");
  serve->add_option("--registry", registry, "Registry base URL")->required();
  serve->add_option("--listen", listen, "host:port")->capture_default_str();
  serve->add_option("--data", data, "Key and store directory (omit for in-memory)");
  serve->add_option("--public-url", public_url, "URL holders post responses to (default: the bound URL)");
  serve->add_option("--admin-token-file", token_file, "Bearer token for agent routes (or VSC_ADMIN_TOKEN)");

  std::string now, url;
  auto* review = app.add_subcommand("review", "List flags due for review or arrears follow-up");
  review->add_option("--now", now, "ISO-8601 instant (default: current time)");
  auto* review_src = review->add_option_group("source");
  review_src->add_option("--data", data, "Store directory");
  review_src->add_option("--url", url, "Running bank");
  review_src->require_option(1);
  review->add_option("--admin-token-file", token_file, "Agent token (or VSC_ADMIN_TOKEN)");

  std::string customer, holder_did, scheme = "ffa", request_file;
  auto* open = app.add_subcommand("open", "Send a presentation request to a customer's wallet");
  open->add_option("--url", url, "Running bank")->required();
  open->add_option("--customer", customer, "Customer reference")->required();
  open->add_option("--holder-did", holder_did, "Registers the customer's DID first");
  open->add_option("--scheme", scheme, "Built-in request: ffa")->capture_default_str();
  open->add_option("--request", request_file, "Scenario JSON file {purpose, scheme?, items?}")->check(CLI::ExistingFile);
  open->add_option("--admin-token-file", token_file, "Agent token (or VSC_ADMIN_TOKEN)");

  auto* flags = app.add_subcommand("flags", "Show a customer's flags");
  flags->add_option("--url", url, "Running bank")->required();
  flags->add_option("--customer", customer, "Customer reference")->required();
  flags->add_option("--admin-token-file", token_file, "Agent token (or VSC_ADMIN_TOKEN)");

  CLI11_PARSE(app, argc, argv);

  return cli::run([&] {
    std::string token;
    if (!token_file.empty() || std::getenv("VSC_ADMIN_TOKEN")) token = cli::secret("VSC_ADMIN_TOKEN", token_file, "admin token");
    char* out = nullptr;

    if (*serve) {
      auto signals = cli::block_shutdown_signals();
      vsc_bank* b = nullptr;
      cli::check(vsc_bank_open(registry.c_str(), cli::or_null(data), &b), "open bank");
      if (auto s = vsc_bank_serve(b, listen.c_str(), cli::or_null(public_url), cli::or_null(token), &out); s != VSC_OK) {
        vsc_bank_close(b);
        cli::check(s, "serve");
      }
      char* did = nullptr;
      vsc_bank_did(b, &did);
      std::cerr << "bank: " << cli::take(did) << std::endl;
      cli::print(out);
      cli::wait_for_shutdown(signals);
      vsc_bank_close(b);
      return 0;
    }
    if (*review) {
      if (!data.empty()) {
        cli::check(vsc_bank_store_review(data.c_str(), cli::or_null(now), &out), "review");
      } else {
        cli::check(vsc_bank_client_review(url.c_str(), cli::or_null(token), cli::or_null(now), &out), "review");
      }
    } else if (*open) {
      const auto spec = scenario_json(scheme, request_file);
      cli::check(vsc_bank_client_open_exchange(url.c_str(), cli::or_null(token), customer.c_str(),
                                               cli::or_null(holder_did), spec.c_str(), &out),
                 "open exchange");
    } else {
      cli::check(vsc_bank_client_flags(url.c_str(), cli::or_null(token), customer.c_str(), &out), "flags");
    }
    cli::print(out);
    return 0;
  });
}

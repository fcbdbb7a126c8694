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

int main(int argc, char** argv) {
  CLI::App app{"Health-authority credential issuer"};
  app.require_subcommand(1);

  std::string records, registry, listen = "127.0.0.1:8410", state, token_file;
  auto* serve = app.add_subcommand("serve", "Issue credentials to authenticated subjects");
  serve->add_option("--records", records, "Subject records (.csv, .jsonl)")->required()->check(CLI::ExistingFile);
  serve->add_option("--registry", registry, "Registry base URL")->required();
  serve->add_option("--listen", listen, "host:port")->capture_default_str();
  serve->add_option("--state", state, "Key and issuance journal directory (omit for in-memory)");
  serve->add_option("--admin-token-file", token_file,
                    "Bearer token for /admin routes (or VSC_ADMIN_TOKEN; loopback-only when neither is set)");

  CLI11_PARSE(app, argc, argv);

  return cli::run([&] {
    std::string token;
    if (!token_file.empty() || std::getenv("VSC_ADMIN_TOKEN")) token = cli::secret("VSC_ADMIN_TOKEN", token_file, "admin token");
    auto signals = cli::block_shutdown_signals();
    vsc_issuer* i = nullptr;
    cli::check(vsc_issuer_open(registry.c_str(), records.c_str(), cli::or_null(state), &i), "open issuer");
    char* url = nullptr;
    if (auto s = vsc_issuer_serve(i, listen.c_str(), cli::or_null(token), &url); s != VSC_OK) {
      vsc_issuer_close(i);
      cli::check(s, "serve");
    }
    char* did = nullptr;
    vsc_issuer_did(i, &did);
    std::cerr << "issuer: " << cli::take(did) << std::endl;
    cli::print(url);
    cli::wait_for_shutdown(signals);
    vsc_issuer_close(i);
    return 0;
  });
}

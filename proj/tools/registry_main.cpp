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
  CLI::App app{"DID and status-list registry"};
  app.require_subcommand(1);

  std::string data, listen = "127.0.0.1:8400";
  auto* serve = app.add_subcommand("serve", "Serve the registry over HTTP");
  serve->add_option("--data", data, "Chain directory (omit for in-memory)");
  serve->add_option("--listen", listen, "host:port")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  return cli::run([&] {
    auto signals = cli::block_shutdown_signals();
    vsc_registry* r = nullptr;
    cli::check(vsc_registry_open(cli::or_null(data), &r), "open registry");
    char* url = nullptr;
    if (auto s = vsc_registry_serve(r, listen.c_str(), &url); s != VSC_OK) {
      vsc_registry_close(r);
      cli::check(s, "serve");
    }
    size_t height = 0;
    vsc_registry_height(r, &height);
    std::cerr << "registry: " << height << " blocks" << std::endl;
    cli::print(url);
    cli::wait_for_shutdown(signals);
    vsc_registry_close(r);
    return 0;
  });
}

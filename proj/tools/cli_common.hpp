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

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include "vsc/vsc.h"

namespace cli {

// Exit codes: 0 ok, vsc_status value on a library error, 2 on usage.
struct Failure {
  int code;
};

inline void check(vsc_status s, const char* what) {
  if (s == VSC_OK) return;
  std::fprintf(stderr, "%s: %s (%s)\n", what, vsc_last_error(), vsc_status_name(s));
  throw Failure{static_cast<int>(s)};
}

/// Takes ownership of a library string.
inline std::string take(char* s) {
  std::string out = s ? s : "";
  vsc_string_free(s);
  return out;
}

inline void print(char* s) { std::cout << take(s) << std::endl; }

inline const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "cannot read %s\n", path.c_str());
    throw Failure{2};
  }
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Env var first, then a file whose first line is the secret.
inline std::string secret(const char* env, const std::string& file, const char* what) {
  if (!file.empty()) {
    std::string s = slurp(file);
    if (auto nl = s.find_first_of("\r\n"); nl != std::string::npos) s.resize(nl);
    return s;
  }
  if (const char* v = std::getenv(env); v && *v) return v;
  std::fprintf(stderr, "%s: set %s or pass a file\n", what, env);
  throw Failure{2};
}

/// Blocks SIGINT/SIGTERM for this thread and every thread started after.
/// Call before starting servers; then wait_for_shutdown().
inline sigset_t block_shutdown_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

inline void wait_for_shutdown(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
}

template <class F>
int run(F&& f) {
  try {
    return f();
  } catch (const Failure& e) {
    return e.code;
  }
}

}  // namespace cli

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

#include <random>
#include <string>

#include "vsc/exchange.hpp"

namespace vsc::testing {

/// Seeded RNG for generators; the seed is printed on failure by callers.
inline std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5eed5eedULL);
  return g;
}

inline std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng());
}

/// A registry with an issuer, a holder and a bank anchored on it, and a
/// clock the test can move.
struct World {
  Instant now = Instant::parse("2021-06-01T09:00:00Z");
  Registry registry{[this] { return now; }};
  GeneratedDid issuer = generate_did();
  GeneratedDid holder = generate_did(std::string("http://127.0.0.1:9/"));
  GeneratedDid bank = generate_did();
  StatusAllocator slots;

  World() {
    for (auto* g : {&issuer, &holder, &bank}) registry.anchor(sign_anchor(g->document, g->keys.secret));
  }
  World(const World&) = delete;

  static Value::Map full_values(std::int64_t months = 2, bool health = true) {
    return {{"nhs_number", "9434765919"},
            {"date_of_birth", Date::parse("1996-03-04")},
            {"birth_year", 1996},
            {"assessment_date", Date::parse("2021-04-12")},
            {"driver_health", health},
            {"driver_life_events", false},
            {"driver_low_resilience", false},
            {"driver_low_capability", false},
            {"work_incapacity_months", months},
            {"detail", "long covid, reduced hours"}};
  }

  static Value::Map fairness_values(std::int64_t months = 2, bool health = true) {
    return {{"driver_health", health},
            {"driver_life_events", false},
            {"driver_low_resilience", false},
            {"driver_low_capability", false},
            {"work_incapacity_months", months}};
  }

  IssuedCredential issue(const SchemaDefinition& schema, const Value::Map& values) {
    auto slot = slots.next();
    ensure_status_list(issuer.keys, issuer.did, slot.list_id, registry);
    return vsc::issue(schema, issuer.keys, issuer.did, holder.did, values, slot, slots, now);
  }
  IssuedCredential issue_full(const Value::Map& values = full_values()) {
    return issue(vulnerability_status_schema(), values);
  }
  IssuedCredential issue_fairness(const Value::Map& values = fairness_values()) {
    return issue(fairness_for_all_schema(), values);
  }

  HolderIdentity holder_identity() const { return {holder.did, holder.keys}; }

  DeriveContext context(const Nonce& nonce) const {
    return {holder.keys, holder.did, bank.did, nonce, now, std::string(kFinancialAudience)};
  }
};

}  // namespace vsc::testing

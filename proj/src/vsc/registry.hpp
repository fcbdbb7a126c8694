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

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "vsc/canonical.hpp"
#include "vsc/did.hpp"
#include "vsc/time.hpp"

namespace vsc {

inline constexpr std::size_t kStatusListBits = 1024;

/// Revocation bitstring. Bit i lives in byte i/8, most significant bit
/// first. A set bit means revoked and never clears.
struct StatusList {
  Did issuer;
  std::string list_id;
  std::array<std::uint8_t, kStatusListBits / 8> bits{};
  std::int64_t version = 0;

  bool test(std::size_t index) const;
  void set(std::size_t index);
  std::size_t popcount() const noexcept;
  /// True when every bit set in `older` is also set here.
  bool covers(const StatusList& older) const noexcept;

  Value to_value() const;
  static StatusList from_value(const Value& v);

  bool operator==(const StatusList&) const = default;
};

struct StatusUpdate {
  StatusList list;
  Signature signature{};

  Value to_value() const;
  static StatusUpdate from_value(const Value& v);
};

StatusUpdate sign_status(const StatusList& list, const Seed& issuer_secret);

enum class PayloadKind { DidAnchor, StatusUpdate };
std::string_view payload_kind_name(PayloadKind kind) noexcept;

struct RegistryBlock {
  std::int64_t index = 0;
  Instant created_at;
  Hash32 previous_hash{};
  PayloadKind kind = PayloadKind::DidAnchor;
  Value payload;
  Hash32 payload_hash{};
  Hash32 block_hash{};

  /// The fields block_hash commits to.
  Value header_value() const;
  Value to_value() const;
  static RegistryBlock from_value(const Value& v);
};

/// True iff every payload hash, block hash and back-link recomputes exactly
/// and indices run 0, 1, 2, ...
bool verify_chain(std::span<const RegistryBlock> blocks);

/// Read side of the verifiable data registry.
class RegistryView {
 public:
  virtual ~RegistryView() = default;

  /// Latest anchored document whose history validates back to version 0.
  /// Throws NotFound or ChainBroken (RegistryUnreachable for remote views).
  virtual DidDocument resolve(const Did& did) const = 0;
  /// Highest-version status list; throws NotFound.
  virtual StatusList latest_status(const Did& issuer, const std::string& list_id) const = 0;
};

/// Read/write access as used by issuers and holders.
class RegistryClient : public RegistryView {
 public:
  virtual RegistryBlock anchor(const AnchorRequest& request) = 0;
  virtual RegistryBlock publish_status(const StatusUpdate& update) = 0;
};

/// Single-node, append-only, hash-linked log of DID anchors and status
/// updates. Optionally persisted to `<dir>/chain.log` as length-prefixed
/// canonical block records; opening an existing log replays and re-verifies
/// it and refuses corrupted data.
class Registry final : public RegistryClient {
 public:
  explicit Registry(Clock clock = system_clock());
  Registry(const std::filesystem::path& data_dir, Clock clock = system_clock());
  ~Registry() override;

  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  /// Validates and appends. Errors: Unauthorized, NonMonotoneStatus,
  /// MalformedPayload.
  RegistryBlock append(PayloadKind kind, const Value& payload);

  DidDocument resolve(const Did& did) const override;
  StatusList latest_status(const Did& issuer, const std::string& list_id) const override;
  /// Latest list together with the issuer's signature over it.
  StatusUpdate latest_status_update(const Did& issuer, const std::string& list_id) const;
  RegistryBlock anchor(const AnchorRequest& request) override;
  RegistryBlock publish_status(const StatusUpdate& update) override;

  std::vector<RegistryBlock> blocks(std::size_t from = 0) const;
  std::size_t size() const;
  bool verify() const;

  static constexpr const char* kLogName = "chain.log";

 private:
  struct PendingEffect;
  PendingEffect check(PayloadKind kind, const Value& payload) const;
  void commit(const PendingEffect& effect);
  void replay(const std::filesystem::path& log_path);
  void write_record(const RegistryBlock& block);

  Clock clock_;
  mutable std::shared_mutex mu_;
  std::vector<RegistryBlock> blocks_;
  std::map<std::string, std::vector<DidDocument>> anchors_;
  std::map<std::pair<std::string, std::string>, StatusUpdate> status_;
  std::FILE* log_ = nullptr;
};

}  // namespace vsc

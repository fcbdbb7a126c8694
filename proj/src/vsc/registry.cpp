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

#include "vsc/registry.hpp"

#include <unistd.h>

#include <bit>
#include <fstream>
#include <mutex>
#include <variant>

namespace vsc {

bool StatusList::test(std::size_t index) const {
  if (index >= kStatusListBits) fail(Errc::InvalidArgument, "status index out of range");
  return (bits[index / 8] & (0x80u >> (index % 8))) != 0;
}

void StatusList::set(std::size_t index) {
  if (index >= kStatusListBits) fail(Errc::InvalidArgument, "status index out of range");
  bits[index / 8] |= static_cast<std::uint8_t>(0x80u >> (index % 8));
}

std::size_t StatusList::popcount() const noexcept {
  std::size_t n = 0;
  for (auto b : bits) n += static_cast<std::size_t>(std::popcount(b));
  return n;
}

bool StatusList::covers(const StatusList& older) const noexcept {
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if ((older.bits[i] & ~bits[i]) != 0) return false;
  }
  return true;
}

Value StatusList::to_value() const {
  return Value::Map{{"bits", encode_bytes(bits)},
                    {"issuer", issuer.str()},
                    {"list_id", list_id},
                    {"version", version}};
}

StatusList StatusList::from_value(const Value& v) {
  expect_keys(v, {"bits", "issuer", "list_id", "version"});
  StatusList s;
  s.bits = decode_array<kStatusListBits / 8>(v.at("bits"));
  s.issuer = Did::parse(v.at("issuer").as_text());
  s.list_id = v.at("list_id").as_text();
  s.version = v.at("version").as_int();
  if (s.list_id.empty() || s.version < 0) fail(Errc::MalformedValue, "bad status list header");
  return s;
}

Value StatusUpdate::to_value() const {
  return Value::Map{{"signature", encode_bytes(signature)}, {"status", list.to_value()}};
}

StatusUpdate StatusUpdate::from_value(const Value& v) {
  expect_keys(v, {"signature", "status"});
  return {StatusList::from_value(v.at("status")), decode_array<64>(v.at("signature"))};
}

StatusUpdate sign_status(const StatusList& list, const Seed& issuer_secret) {
  return {list, sign(issuer_secret, as_bytes(canonicalize(list.to_value())))};
}

std::string_view payload_kind_name(PayloadKind kind) noexcept {
  return kind == PayloadKind::DidAnchor ? "DID_ANCHOR" : "STATUS_UPDATE";
}

namespace {

PayloadKind parse_kind(const std::string& s) {
  if (s == "DID_ANCHOR") return PayloadKind::DidAnchor;
  if (s == "STATUS_UPDATE") return PayloadKind::StatusUpdate;
  fail(Errc::MalformedValue, "unknown payload kind");
}

}  // namespace

Value RegistryBlock::header_value() const {
  return Value::Map{{"created_at", encode_instant(created_at)},
                    {"index", index},
                    {"payload_hash", encode_bytes(payload_hash)},
                    {"payload_kind", payload_kind_name(kind)},
                    {"previous_hash", encode_bytes(previous_hash)}};
}

Value RegistryBlock::to_value() const {
  Value v = header_value();
  v.as_map()["payload"] = payload;
  v.as_map()["block_hash"] = encode_bytes(block_hash);
  return v;
}

RegistryBlock RegistryBlock::from_value(const Value& v) {
  expect_keys(v, {"block_hash", "created_at", "index", "payload", "payload_hash", "payload_kind", "previous_hash"});
  RegistryBlock b;
  b.index = v.at("index").as_int();
  b.created_at = decode_instant(v.at("created_at"));
  b.previous_hash = decode_array<32>(v.at("previous_hash"));
  b.kind = parse_kind(v.at("payload_kind").as_text());
  b.payload = v.at("payload");
  b.payload_hash = decode_array<32>(v.at("payload_hash"));
  b.block_hash = decode_array<32>(v.at("block_hash"));
  return b;
}

bool verify_chain(std::span<const RegistryBlock> blocks) {
  Hash32 expected_prev{};
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    try {
      if (b.index != static_cast<std::int64_t>(i) || b.previous_hash != expected_prev ||
          b.payload_hash != digest_value(b.payload) || b.block_hash != digest_value(b.header_value())) {
        return false;
      }
    } catch (const Error&) {
      return false;  // payload not canonicalizable
    }
    expected_prev = b.block_hash;
  }
  return true;
}

// ---------------------------------------------------------------------------

struct Registry::PendingEffect {
  PayloadKind kind;
  Value payload;
  std::variant<DidDocument, StatusUpdate> effect;
};

Registry::Registry(Clock clock) : clock_(std::move(clock)) {}

Registry::Registry(const std::filesystem::path& data_dir, Clock clock) : clock_(std::move(clock)) {
  std::filesystem::create_directories(data_dir);
  const auto log_path = data_dir / kLogName;
  if (std::filesystem::exists(log_path)) replay(log_path);
  log_ = std::fopen(log_path.c_str(), "ab");
  if (!log_) fail(Errc::Io, "cannot open " + log_path.string());
}

Registry::~Registry() {
  if (log_) std::fclose(log_);
}

Registry::PendingEffect Registry::check(PayloadKind kind, const Value& payload) const {
  if (kind == PayloadKind::DidAnchor) {
    AnchorRequest req;
    try {
      req = AnchorRequest::from_value(payload);
    } catch (const Error& e) {
      fail(Errc::MalformedPayload, e.what());
    }
    const auto msg = canonicalize(req.document.to_value());
    auto it = anchors_.find(req.document.did.id);
    if (it == anchors_.end()) {
      if (req.document.version != 0 || !self_consistent(req.document)) {
        fail(Errc::MalformedPayload, "first anchor must be a self-consistent version 0 document");
      }
      if (!verify_signature(req.document.verification_key, as_bytes(msg), req.signature)) {
        fail(Errc::Unauthorized, "version 0 document not signed by its own key");
      }
    } else if (!verify_signature(it->second.back().verification_key, as_bytes(msg), req.signature)) {
      fail(Errc::Unauthorized, "document update not signed by the current verification key");
    }
    return {kind, payload, req.document};
  }

  StatusUpdate up;
  try {
    up = StatusUpdate::from_value(payload);
  } catch (const Error& e) {
    fail(Errc::MalformedPayload, e.what());
  }
  auto history = anchors_.find(up.list.issuer.id);
  if (history == anchors_.end()) fail(Errc::Unauthorized, "status issuer is not anchored");
  DidDocument issuer_doc;
  try {
    issuer_doc = resolve_history(history->second);
  } catch (const Error&) {
    fail(Errc::Unauthorized, "status issuer does not resolve");
  }
  if (!verify_signature(issuer_doc.verification_key, as_bytes(canonicalize(up.list.to_value())), up.signature)) {
    fail(Errc::Unauthorized, "status update not signed by the list's issuer");
  }
  auto prev = status_.find({up.list.issuer.id, up.list.list_id});
  if (prev == status_.end()) {
    if (up.list.version != 0) fail(Errc::NonMonotoneStatus, "a new status list starts at version 0");
  } else {
    if (up.list.version != prev->second.list.version + 1) {
      fail(Errc::NonMonotoneStatus, "status version must advance by one");
    }
    if (!up.list.covers(prev->second.list)) fail(Errc::NonMonotoneStatus, "status update clears a revoked bit");
  }
  return {kind, payload, up};
}

void Registry::commit(const PendingEffect& effect) {
  if (auto doc = std::get_if<DidDocument>(&effect.effect)) {
    anchors_[doc->did.id].push_back(*doc);
  } else {
    const auto& up = std::get<StatusUpdate>(effect.effect);
    status_.insert_or_assign({up.list.issuer.id, up.list.list_id}, up);
  }
}

void Registry::write_record(const RegistryBlock& block) {
  const auto bytes = canonicalize(block.to_value());
  const std::uint32_t n = static_cast<std::uint32_t>(bytes.size());
  const unsigned char len[4] = {static_cast<unsigned char>(n >> 24), static_cast<unsigned char>(n >> 16),
                                static_cast<unsigned char>(n >> 8), static_cast<unsigned char>(n)};
  if (std::fwrite(len, 1, 4, log_) != 4 || std::fwrite(bytes.data(), 1, bytes.size(), log_) != bytes.size() ||
      std::fflush(log_) != 0) {
    fail(Errc::Io, "registry log write failed");
  }
  ::fsync(::fileno(log_));
}

void Registry::replay(const std::filesystem::path& log_path) {
  std::ifstream in(log_path, std::ios::binary);
  std::vector<RegistryBlock> blocks;
  for (;;) {
    unsigned char len[4];
    in.read(reinterpret_cast<char*>(len), 4);
    if (in.gcount() == 0) break;
    if (in.gcount() != 4) fail(Errc::ChainBroken, "truncated registry record header");
    const std::uint32_t n = (std::uint32_t{len[0]} << 24) | (std::uint32_t{len[1]} << 16) |
                            (std::uint32_t{len[2]} << 8) | std::uint32_t{len[3]};
    std::string rec(n, '\0');
    in.read(rec.data(), n);
    if (static_cast<std::uint32_t>(in.gcount()) != n) fail(Errc::ChainBroken, "truncated registry record");
    try {
      blocks.push_back(RegistryBlock::from_value(parse(rec)));
    } catch (const Error& e) {
      fail(Errc::ChainBroken, std::string("corrupt registry record: ") + e.what());
    }
  }
  if (!verify_chain(blocks)) fail(Errc::ChainBroken, "registry log fails hash-chain verification");
  for (auto& b : blocks) {
    try {
      commit(check(b.kind, b.payload));
    } catch (const Error& e) {
      fail(Errc::ChainBroken, "registry block " + std::to_string(b.index) + " fails validation: " + e.what());
    }
    blocks_.push_back(std::move(b));
  }
}

RegistryBlock Registry::append(PayloadKind kind, const Value& payload) {
  std::unique_lock lock(mu_);
  auto effect = check(kind, payload);
  RegistryBlock b;
  b.index = static_cast<std::int64_t>(blocks_.size());
  b.created_at = clock_();
  b.previous_hash = blocks_.empty() ? Hash32{} : blocks_.back().block_hash;
  b.kind = kind;
  b.payload = payload;
  b.payload_hash = digest_value(payload);
  b.block_hash = digest_value(b.header_value());
  if (log_) write_record(b);
  commit(effect);
  blocks_.push_back(b);
  return b;
}

DidDocument Registry::resolve(const Did& did) const {
  std::shared_lock lock(mu_);
  auto it = anchors_.find(did.id);
  if (it == anchors_.end()) fail(Errc::NotFound, "did not anchored: " + did.str());
  return resolve_history(it->second);
}

StatusList Registry::latest_status(const Did& issuer, const std::string& list_id) const {
  return latest_status_update(issuer, list_id).list;
}

StatusUpdate Registry::latest_status_update(const Did& issuer, const std::string& list_id) const {
  std::shared_lock lock(mu_);
  auto it = status_.find({issuer.id, list_id});
  if (it == status_.end()) fail(Errc::NotFound, "no status list " + list_id + " for " + issuer.str());
  return it->second;
}

RegistryBlock Registry::anchor(const AnchorRequest& request) { return append(PayloadKind::DidAnchor, request.to_value()); }

RegistryBlock Registry::publish_status(const StatusUpdate& update) {
  return append(PayloadKind::StatusUpdate, update.to_value());
}

std::vector<RegistryBlock> Registry::blocks(std::size_t from) const {
  std::shared_lock lock(mu_);
  if (from >= blocks_.size()) return {};
  return {blocks_.begin() + static_cast<std::ptrdiff_t>(from), blocks_.end()};
}

std::size_t Registry::size() const {
  std::shared_lock lock(mu_);
  return blocks_.size();
}

bool Registry::verify() const {
  std::shared_lock lock(mu_);
  return verify_chain(blocks_);
}

}  // namespace vsc

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

#include "vsc/did.hpp"

namespace vsc {

Did Did::parse(std::string_view text) {
  if (!text.starts_with(kPrefix)) fail(Errc::MalformedValue, "not a did:local identifier");
  Did d{std::string(text.substr(kPrefix.size()))};
  if (d.id.size() != kIdLength) fail(Errc::MalformedValue, "did id has wrong length");
  from_base32(d.id);  // validates alphabet and trailing bits
  return d;
}

Value DidDocument::id_basis() const {
  Value::Map m;
  m["verification_key"] = encode_bytes(verification_key);
  m["version"] = version;
  if (service_endpoint) m["service_endpoint"] = *service_endpoint;
  if (previous_hash) m["previous_hash"] = encode_bytes(*previous_hash);
  return m;
}

Value DidDocument::to_value() const {
  Value v = id_basis();
  v.as_map()["did"] = did.str();
  return v;
}

DidDocument DidDocument::from_value(const Value& v) {
  expect_keys(v, {"did", "verification_key", "version"}, {"service_endpoint", "previous_hash"});
  DidDocument d;
  d.did = Did::parse(v.at("did").as_text());
  d.verification_key = decode_array<32>(v.at("verification_key"));
  d.version = v.at("version").as_int();
  if (d.version < 0) fail(Errc::MalformedValue, "negative document version");
  if (auto e = v.find("service_endpoint")) d.service_endpoint = e->as_text();
  if (auto p = v.find("previous_hash")) d.previous_hash = decode_array<32>(*p);
  return d;
}

Did derive_did(const DidDocument& version0) {
  return Did{to_base32(digest_value(version0.id_basis()))};
}

bool self_consistent(const DidDocument& doc) {
  if (doc.version == 0) return !doc.previous_hash && derive_did(doc) == doc.did;
  return doc.version > 0 && doc.previous_hash.has_value();
}

GeneratedDid generate_did(std::optional<std::string> service_endpoint) {
  return generate_did(KeyPair::generate(), std::move(service_endpoint));
}

GeneratedDid generate_did(const KeyPair& keys, std::optional<std::string> service_endpoint) {
  DidDocument doc;
  doc.verification_key = keys.public_key;
  doc.service_endpoint = std::move(service_endpoint);
  doc.did = derive_did(doc);
  return {doc.did, doc, keys};
}

DidDocument next_version(const DidDocument& current, const PublicKey& new_key,
                         std::optional<std::string> service_endpoint) {
  DidDocument next;
  next.did = current.did;
  next.verification_key = new_key;
  next.service_endpoint = std::move(service_endpoint);
  next.version = current.version + 1;
  next.previous_hash = current.hash();
  return next;
}

Value AnchorRequest::to_value() const {
  return Value::Map{{"document", document.to_value()}, {"signature", encode_bytes(signature)}};
}

AnchorRequest AnchorRequest::from_value(const Value& v) {
  expect_keys(v, {"document", "signature"});
  return {DidDocument::from_value(v.at("document")), decode_array<64>(v.at("signature"))};
}

AnchorRequest sign_anchor(const DidDocument& doc, const Seed& controller) {
  return {doc, sign(controller, as_bytes(canonicalize(doc.to_value())))};
}

DidDocument resolve_history(const std::vector<DidDocument>& history) {
  if (history.empty()) fail(Errc::NotFound, "did not anchored");
  const DidDocument& first = history.front();
  if (!self_consistent(first) || first.version != 0) fail(Errc::ChainBroken, "version 0 does not derive its id");
  for (std::size_t i = 1; i < history.size(); ++i) {
    const auto& prev = history[i - 1];
    const auto& cur = history[i];
    if (cur.did != first.did || cur.version != prev.version + 1 || !cur.previous_hash ||
        *cur.previous_hash != prev.hash()) {
      fail(Errc::ChainBroken, "document version " + std::to_string(cur.version) + " does not link to its predecessor");
    }
  }
  return history.back();
}

}  // namespace vsc

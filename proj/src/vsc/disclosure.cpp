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

#include "vsc/disclosure.hpp"

#include <algorithm>
#include <set>

namespace vsc {

Value DisclosedClaim::to_value() const {
  Value::Map m{{"name", name}, {"path", path_to_value(path)}, {"salt", encode_bytes(salt)}, {"value", value}};
  if (ladder) m["ladder"] = ladder->to_value();
  return m;
}

DisclosedClaim DisclosedClaim::from_value(const Value& v) {
  expect_keys(v, {"name", "path", "salt", "value"}, {"ladder"});
  DisclosedClaim d;
  d.name = v.at("name").as_text();
  d.path = path_from_value(v.at("path"));
  d.salt = decode_array<32>(v.at("salt"));
  d.value = v.at("value");
  if (auto l = v.find("ladder")) d.ladder = LadderAnchor::from_value(*l);
  return d;
}

Value PredicateProof::to_value() const {
  return Value::Map{{"claim", claim},
                    {"commitment", encode_bytes(commitment)},
                    {"ladder", ladder.to_value()},
                    {"op", direction_name(op)},
                    {"path", path_to_value(path)},
                    {"threshold", threshold},
                    {"witness", encode_bytes(witness)}};
}

PredicateProof PredicateProof::from_value(const Value& v) {
  expect_keys(v, {"claim", "commitment", "ladder", "op", "path", "threshold", "witness"});
  PredicateProof p;
  p.claim = v.at("claim").as_text();
  p.commitment = decode_array<32>(v.at("commitment"));
  p.ladder = LadderAnchor::from_value(v.at("ladder"));
  p.op = parse_direction(v.at("op").as_text());
  p.path = path_from_value(v.at("path"));
  p.threshold = v.at("threshold").as_int();
  p.witness = decode_array<32>(v.at("witness"));
  return p;
}

Value Presentation::body_value() const {
  Value::List ds, ps;
  for (const auto& d : disclosed) ds.push_back(d.to_value());
  for (const auto& p : predicates) ps.push_back(p.to_value());
  return Value::Map{{"created_at", encode_instant(created_at)},
                    {"credential", credential.to_value()},
                    {"disclosed", std::move(ds)},
                    {"holder", holder.str()},
                    {"nonce", encode_bytes(nonce)},
                    {"predicates", std::move(ps)},
                    {"verifier", verifier.str()}};
}

Value Presentation::to_value() const {
  Value v = body_value();
  v.as_map()["holder_signature"] = encode_bytes(holder_signature);
  return v;
}

Presentation Presentation::from_value(const Value& v) {
  expect_keys(v, {"created_at", "credential", "disclosed", "holder", "holder_signature", "nonce", "predicates",
                  "verifier"});
  Presentation p;
  p.created_at = decode_instant(v.at("created_at"));
  p.credential = VerifiableCredential::from_value(v.at("credential"));
  for (const auto& d : v.at("disclosed").as_list()) p.disclosed.push_back(DisclosedClaim::from_value(d));
  p.holder = Did::parse(v.at("holder").as_text());
  p.holder_signature = decode_array<64>(v.at("holder_signature"));
  p.nonce = decode_array<16>(v.at("nonce"));
  for (const auto& e : v.at("predicates").as_list()) p.predicates.push_back(PredicateProof::from_value(e));
  p.verifier = Did::parse(v.at("verifier").as_text());
  return p;
}

Bytes Presentation::signing_input() const {
  Bytes out;
  append(out, canonicalize(body_value()));
  append(out, as_bytes(nonce));
  append(out, verifier.str());
  return out;
}

std::vector<std::string> expand_groups(const VerifiableCredential& vc, const std::vector<std::string>& names) {
  std::set<std::string> out(names.begin(), names.end());
  for (const auto& g : vc.groups) {
    const bool touched = std::any_of(g.members.begin(), g.members.end(),
                                     [&](const std::string& m) { return out.count(m) != 0; });
    if (touched) out.insert(g.members.begin(), g.members.end());
  }
  return {out.begin(), out.end()};
}

namespace {

/// First group that `names` covers partially, if any.
const DisclosureGroup* split_group(const VerifiableCredential& vc, const std::set<std::string>& names) {
  for (const auto& g : vc.groups) {
    const auto n = std::count_if(g.members.begin(), g.members.end(),
                                 [&](const std::string& m) { return names.count(m) != 0; });
    if (n != 0 && static_cast<std::size_t>(n) != g.members.size()) return &g;
  }
  return nullptr;
}

}  // namespace

Presentation derive(const VerifiableCredential& vc, const HolderSecrets& secrets, const DisclosureSelection& selection,
                    const DeriveContext& ctx) {
  if (ctx.holder != vc.subject) fail(Errc::InvalidArgument, "holder is not the credential subject");
  if (secrets.credential_id != vc.credential_id || secrets.root() != vc.claims_root) {
    fail(Errc::RootMismatch, "holder secrets do not match the credential");
  }

  const std::set<std::string> reveal(selection.reveal.begin(), selection.reveal.end());
  for (const auto& name : reveal) {
    if (!secrets.find(name)) fail(Errc::UnknownClaim, "credential has no claim " + name);
  }
  for (const auto& p : selection.predicates) {
    if (!secrets.find(p.claim)) fail(Errc::UnknownClaim, "credential has no claim " + p.claim);
  }
  if (const auto* g = split_group(vc, reveal)) {
    fail(Errc::GroupViolation, "selection splits disclosure group " + g->group_id);
  }
  if (vc.intended_audience && ctx.verifier_audience != vc.intended_audience) {
    fail(Errc::AudienceViolation, "credential is restricted to audience " + *vc.intended_audience);
  }

  const auto leaves = secrets.leaves();
  Presentation p;
  p.credential = vc;
  p.holder = ctx.holder;
  p.verifier = ctx.verifier;
  p.nonce = ctx.nonce;
  p.created_at = ctx.now;

  for (const auto& name : reveal) {  // std::set iterates in name order
    const ClaimSecret& c = *secrets.find(name);
    p.disclosed.push_back({c.name, c.value, c.salt, c.anchor(), merkle_path(leaves, secrets.position(name))});
  }

  auto preds = selection.predicates;
  std::sort(preds.begin(), preds.end(), [](const auto& a, const auto& b) {
    return std::tie(a.claim, a.threshold) < std::tie(b.claim, b.threshold);
  });
  for (const auto& req : preds) {
    const ClaimSecret& c = *secrets.find(req.claim);
    if (!c.ladder || !c.ladder_seed || c.ladder->direction != req.op) {
      fail(Errc::PredicateUnsatisfiable, req.claim + " does not support " + std::string(direction_name(req.op)));
    }
    const LadderAnchor anchor = *c.anchor();
    PredicateProof proof;
    proof.claim = c.name;
    proof.op = req.op;
    proof.threshold = req.threshold;
    proof.witness = make_witness(anchor, *c.ladder_seed, c.value.as_int(), req.threshold);
    proof.commitment = c.commitment();
    proof.ladder = anchor;
    proof.path = merkle_path(leaves, secrets.position(c.name));
    p.predicates.push_back(std::move(proof));
  }

  p.holder_signature = sign(ctx.holder_keys.secret, p.signing_input());
  return p;
}

// ------------------------------------------------------------------ nonces

void NonceCache::make_room(Instant now) {
  while (entries_.size() >= capacity_ && !order_.empty()) {
    auto victim = order_.begin();
    for (auto it = order_.begin(); it != order_.end(); ++it) {
      if (entries_.at(it->second).expires <= now) {
        victim = it;
        break;
      }
    }
    entries_.erase(victim->second);
    order_.erase(victim);
  }
}

void NonceCache::insert(const Nonce& nonce, Entry e, Instant now) {
  make_room(now);
  e.seq = next_seq_++;
  order_.emplace(e.seq, nonce);
  entries_.emplace(nonce, e);
}

void NonceCache::issue(const Nonce& nonce, Instant valid_until, Instant now) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(nonce);
  const Instant expires = std::max(valid_until, now + retention_);
  if (it != entries_.end()) {
    it->second.expires = std::max(it->second.expires, expires);
    return;
  }
  insert(nonce, {false, expires, 0}, now);
}

bool NonceCache::is_used(const Nonce& nonce) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(nonce);
  return it != entries_.end() && it->second.used;
}

bool NonceCache::consume(const Nonce& nonce, Instant now) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(nonce);
  if (it == entries_.end()) {
    insert(nonce, {true, now + retention_, 0}, now);
    return true;
  }
  if (it->second.used) return false;
  it->second.used = true;
  it->second.expires = std::max(it->second.expires, now + retention_);
  return true;
}

std::size_t NonceCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

// ------------------------------------------------------------ verification

Value Fact::to_value() const {
  Value::Map m{{"claim", claim}};
  if (value) m["value"] = *value;
  if (predicate) {
    m["op"] = direction_name(predicate->op);
    m["threshold"] = predicate->threshold;
  }
  return m;
}

Fact Fact::from_value(const Value& v) {
  expect_keys(v, {"claim"}, {"value", "op", "threshold"});
  Fact f;
  f.claim = v.at("claim").as_text();
  if (auto x = v.find("value")) f.value = *x;
  if (auto op = v.find("op")) {
    f.predicate = PredicateRequest{f.claim, parse_direction(op->as_text()), v.at("threshold").as_int()};
  }
  return f;
}

PresentationVerdict verify_presentation(const Presentation& p, const RegistryView& registry,
                                        const Nonce& expected_nonce, const Did& expected_verifier, Instant now,
                                        NonceCache& nonces) {
  auto reject = [](FailReason r) { return PresentationVerdict{Verdict::fail(r), {}}; };

  if (p.nonce != expected_nonce) return reject(FailReason::NonceMismatch);
  if (nonces.is_used(p.nonce)) return reject(FailReason::NonceReplayed);

  if (auto v = verify_full(p.credential, registry, now); !v.ok()) return {v, {}};
  const Hash32& root = p.credential.claims_root;

  std::set<std::string> opened;
  std::vector<Fact> facts;
  for (const auto& d : p.disclosed) {
    if (!opened.insert(d.name).second) return reject(FailReason::Malformed);
    Hash32 leaf;
    try {
      leaf = claim_leaf(d.name, claim_commitment(d.salt, d.name, d.value), d.ladder);
    } catch (const Error&) {
      return reject(FailReason::Malformed);
    }
    if (root_from_path(leaf, d.path) != root) return reject(FailReason::PathMismatch);
    facts.push_back({d.name, d.value, std::nullopt});
  }

  for (const auto& pr : p.predicates) {
    const Hash32 leaf = claim_leaf(pr.claim, pr.commitment, pr.ladder);
    if (root_from_path(leaf, pr.path) != root) return reject(FailReason::PathMismatch);
    if (pr.op != pr.ladder.direction || !check_witness(pr.ladder, pr.threshold, pr.witness)) {
      return reject(FailReason::PredicateInvalid);
    }
    facts.push_back({pr.claim, std::nullopt, PredicateRequest{pr.claim, pr.op, pr.threshold}});
  }

  if (split_group(p.credential, opened)) return reject(FailReason::GroupViolation);

  if (p.holder != p.credential.subject || p.verifier != expected_verifier) {
    return reject(FailReason::HolderBindingInvalid);
  }
  DidDocument holder_doc;
  try {
    holder_doc = registry.resolve(p.holder);
  } catch (const Error& e) {
    if (e.code() == Errc::RegistryUnreachable) throw;
    return reject(FailReason::HolderBindingInvalid);
  }
  if (!verify_signature(holder_doc.verification_key, p.signing_input(), p.holder_signature)) {
    return reject(FailReason::HolderBindingInvalid);
  }

  if (!nonces.consume(p.nonce, now)) return reject(FailReason::NonceReplayed);
  return {Verdict::pass(), std::move(facts)};
}

}  // namespace vsc

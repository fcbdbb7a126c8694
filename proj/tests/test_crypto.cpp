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

#include "doctest.h"
#include "support.hpp"
#include "vsc/crypto.hpp"

using namespace vsc;
using vsc::testing::uniform;

namespace {

struct Rfc8032Vector {
  const char* secret;
  const char* public_key;
  const char* message;
  const char* signature;
};

// RFC 8032 section 7.1, tests 1-3.
const Rfc8032Vector kVectors[] = {
    {"9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60",
     "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a", "",
     "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e065224901555fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe2465"
     "5141438e7a100b"},
    {"4ccd089b28ff96da9db6c346ec114e0f5b8a319f35aba624da8cf6ed4fb8a6fb",
     "3d4017c3e843895a92b70aa74d1b7ebc9c982ccf2ec4968cc0cd55f12af4660c", "72",
     "92a009a9f0d4cab8720e820b5f642540a2b27b5416503f8fb3762223ebdb69da085ac1e43e15996e458f3613d0f11d8c387b2eaeb4302aeeb0"
     "0d291612bb0c00"},
    {"c5aa8df43f9f837bedb7442f31dcb7b166d38535076f094b85ce3a2e0b4458f7",
     "fc51cd8e6218a1a38da47ed00230f0580816ed13ba3303ac5deb911548908025", "af82",
     "6291d657deec24024827e69c3abe01a30ce548a284743a445e3680d7db5ac3ac18ff9b538d16f290ae67f760984dc6594a7c15e9716ed28dc0"
     "27beceea1ec40a"},
};

}  // namespace

TEST_CASE("Ed25519 RFC 8032 vectors") {
  for (const auto& v : kVectors) {
    CAPTURE(v.public_key);
    const auto kp = KeyPair::from_seed(to_array<32>(from_hex(v.secret)));
    CHECK(to_hex(kp.public_key) == v.public_key);
    const Bytes msg = from_hex(v.message);
    const Signature sig = sign(kp.secret, msg);
    CHECK(to_hex(sig) == v.signature);
    CHECK(verify_signature(kp.public_key, msg, sig));

    Signature bad = sig;
    bad[0] ^= 1;
    CHECK_FALSE(verify_signature(kp.public_key, msg, bad));
    Bytes other = msg;
    other.push_back(0);
    CHECK_FALSE(verify_signature(kp.public_key, other, sig));
  }
}

TEST_CASE("generated keys sign and verify") {
  const auto a = KeyPair::generate();
  const auto b = KeyPair::generate();
  CHECK(a.public_key != b.public_key);
  CHECK(KeyPair::from_seed(a.secret).public_key == a.public_key);
  const auto sig = sign(a.secret, as_bytes(std::string_view("hello")));
  CHECK(verify_signature(a.public_key, as_bytes(std::string_view("hello")), sig));
  CHECK_FALSE(verify_signature(b.public_key, as_bytes(std::string_view("hello")), sig));
}

TEST_CASE("hex round trip and rejection") {
  CHECK(to_hex(from_hex("00ff10")) == "00ff10");
  CHECK_THROWS_AS(from_hex("0"), Error);
  CHECK_THROWS_AS(from_hex("zz"), Error);
}

TEST_CASE("base64url is unpadded and strict") {
  // RFC 4648 section 10 vectors, translated to the URL-safe unpadded form.
  CHECK(to_base64url(as_bytes(std::string_view(""))) == "");
  CHECK(to_base64url(as_bytes(std::string_view("f"))) == "Zg");
  CHECK(to_base64url(as_bytes(std::string_view("fo"))) == "Zm8");
  CHECK(to_base64url(as_bytes(std::string_view("foo"))) == "Zm9v");
  CHECK(to_base64url(as_bytes(std::string_view("foobar"))) == "Zm9vYmFy");
  CHECK(to_base64url(Bytes{0xfb, 0xff}) == "-_8");
  CHECK_THROWS_AS(from_base64url("Zg=="), Error);
  CHECK_THROWS_AS(from_base64url("Zh"), Error);  // non-zero trailing bits
  CHECK_THROWS_AS(from_base64url("+/8"), Error);
  for (int i = 0; i < 500; ++i) {
    Bytes b(static_cast<std::size_t>(uniform(0, 70)));
    for (auto& x : b) x = static_cast<std::uint8_t>(uniform(0, 255));
    REQUIRE(from_base64url(to_base64url(b)) == b);
  }
}

TEST_CASE("base32 is lowercase, unpadded and strict") {
  // RFC 4648 section 10 vectors, lowercased and unpadded.
  CHECK(to_base32(as_bytes(std::string_view("f"))) == "my");
  CHECK(to_base32(as_bytes(std::string_view("fo"))) == "mzxq");
  CHECK(to_base32(as_bytes(std::string_view("foo"))) == "mzxw6");
  CHECK(to_base32(as_bytes(std::string_view("foob"))) == "mzxw6yq");
  CHECK(to_base32(as_bytes(std::string_view("fooba"))) == "mzxw6ytb");
  CHECK(to_base32(as_bytes(std::string_view("foobar"))) == "mzxw6ytboi");
  CHECK_THROWS_AS(from_base32("MZXW6"), Error);
  CHECK_THROWS_AS(from_base32("mz"), Error);  // trailing bits set
  for (int i = 0; i < 500; ++i) {
    Bytes b(static_cast<std::size_t>(uniform(0, 40)));
    for (auto& x : b) x = static_cast<std::uint8_t>(uniform(0, 255));
    REQUIRE(from_base32(to_base32(b)) == b);
  }
}

TEST_CASE("contains") {
  const Bytes hay{1, 2, 3, 4};
  CHECK(contains(hay, Bytes{2, 3}));
  CHECK_FALSE(contains(hay, Bytes{3, 2}));
  CHECK(contains(hay, Bytes{}));
}

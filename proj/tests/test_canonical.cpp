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

#include <openssl/sha.h>

#include <map>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "vsc/canonical.hpp"

using namespace vsc;
using vsc::testing::rng;
using vsc::testing::uniform;

namespace {

std::string openssl_sha256_hex(std::string_view s) {
  unsigned char out[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(s.data()), s.size(), out);
  return to_hex(ByteView(out, sizeof out));
}

// Second serializer, written against nlohmann's data model. It follows the
// encoding rules directly and shares no code with the library.
void oracle_string(const std::string& s, std::string& out) {
  static const char* hex = "0123456789abcdef";
  out += '"';
  for (unsigned char c : s) {
    if (c == '"') {
      out += "\\\"";
    } else if (c == '\\') {
      out += "\\\\";
    } else if (c < 0x20) {
      out += "\\u00";
      out += hex[c >> 4];
      out += hex[c & 15];
    } else {
      out += static_cast<char>(c);
    }
  }
  out += '"';
}

void oracle_dump(const nlohmann::json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: out += "null"; break;
    case nlohmann::json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned: out += std::to_string(j.get<std::int64_t>()); break;
    case nlohmann::json::value_t::string: oracle_string(j.get<std::string>(), out); break;
    case nlohmann::json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        oracle_dump(e, out);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::object: {
      // nlohmann objects are std::map-backed: keys already in byte order.
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        oracle_string(it.key(), out);
        out += ':';
        oracle_dump(it.value(), out);
      }
      out += '}';
      break;
    }
    default: FAIL("unexpected json type");
  }
}

std::string oracle(const nlohmann::json& j) {
  std::string out;
  oracle_dump(j, out);
  return out;
}

std::string random_text() {
  static const std::vector<std::string> pieces = {"a", "Z", "0", " ", "\"", "\\", "\n", "\x01", "\x1f", "/",
                                                  "é", "€", "𝄞", "key", "-", "_", "{", "]", ":"};
  std::string s;
  const auto n = uniform(0, 6);
  for (int i = 0; i < n; ++i) s += pieces[uniform(0, pieces.size() - 1)];
  return s;
}

// Generates a value together with its oracle model.
std::pair<Value, nlohmann::json> random_value(int depth) {
  const int kind = static_cast<int>(uniform(0, depth > 2 ? 4 : 6));
  switch (kind) {
    case 0: return {Value(), nullptr};
    case 1: {
      bool b = uniform(0, 1) == 1;
      return {Value(b), b};
    }
    case 2: {
      std::int64_t i;
      switch (uniform(0, 3)) {
        case 0: i = uniform(-10, 10); break;
        case 1: i = std::numeric_limits<std::int64_t>::min() + uniform(0, 3); break;
        case 2: i = std::numeric_limits<std::int64_t>::max() - uniform(0, 3); break;
        default: i = static_cast<std::int64_t>(rng()()); break;
      }
      return {Value(i), i};
    }
    case 3: {
      auto s = random_text();
      return {Value(s), s};
    }
    case 4: {
      Date d{static_cast<int>(uniform(1, 9999)), static_cast<unsigned>(uniform(1, 12)), 1};
      d.day = static_cast<unsigned>(uniform(1, days_in_month(d.year, d.month)));
      return {Value(d), d.iso()};
    }
    case 5: {
      Value::List l;
      auto j = nlohmann::json::array();
      const auto n = uniform(0, 4);
      for (int i = 0; i < n; ++i) {
        auto [v, jv] = random_value(depth + 1);
        l.push_back(v);
        j.push_back(jv);
      }
      return {Value(l), j};
    }
    default: {
      Value::Map m;
      auto j = nlohmann::json::object();
      const auto n = uniform(0, 4);
      for (int i = 0; i < n; ++i) {
        auto key = random_text();
        auto [v, jv] = random_value(depth + 1);
        m[key] = v;
        j[key] = jv;
      }
      return {Value(m), j};
    }
  }
}

}  // namespace

TEST_CASE("empty map and key order") {
  CHECK(canonicalize(Value::Map{}) == "{}");
  CHECK(canonicalize(Value::Map{{"b", 1}, {"a", true}}) == R"({"a":true,"b":1})");
  CHECK(canonicalize(Value::List{Value(), false, -7, "x"}) == R"([null,false,-7,"x"])");
}

TEST_CASE("date-of-birth map digest matches an independent serializer and SHA-256") {
  const Value v = Value::Map{{"dob", Date::parse("1996-03-04")}};
  const std::string bytes = canonicalize(v);
  CHECK(bytes == oracle(nlohmann::json{{"dob", "1996-03-04"}}));
  CHECK(to_hex(digest_value(v)) == openssl_sha256_hex(bytes));
  CHECK(to_hex(digest_value(v)) == "1f5234e5bd1e84bef4afc870f71e3ad64bd340fa5ed3750d6990a6825eac79bb");
}

TEST_CASE("string escapes are minimal") {
  CHECK(canonicalize(Value("a\"b\\c")) == R"("a\"b\\c")");
  CHECK(canonicalize(Value("\n\x01\x7f/")) == "\"\\u000a\\u0001\x7f/\"");
  CHECK(canonicalize(Value("é")) == "\"é\"");
}

TEST_CASE("integers are minimal base 10") {
  CHECK(canonicalize(Value(0)) == "0");
  CHECK(canonicalize(Value(-1)) == "-1");
  CHECK(canonicalize(Value(std::numeric_limits<std::int64_t>::min())) == "-9223372036854775808");
  CHECK(parse("-9223372036854775808").as_int() == std::numeric_limits<std::int64_t>::min());
}

TEST_CASE("invalid values are refused") {
  CHECK_THROWS_AS(canonicalize(Value(Date{2021, 2, 29})), Error);
  CHECK_THROWS_AS(canonicalize(Value(std::string("\xff"))), Error);
  CHECK_THROWS_AS(canonicalize(Value(std::string("\xc0\x80"))), Error);       // overlong
  CHECK_THROWS_AS(canonicalize(Value(std::string("\xed\xa0\x80"))), Error);   // surrogate
  CHECK_THROWS_AS(canonicalize(Value::Map{{std::string("\xe2\x82"), 1}}), Error);
}

TEST_CASE("parser accepts only canonical bytes") {
  for (const char* bad : {" {}", "{} ", "{\"b\":1,\"a\":2}", "{\"a\":1,\"a\":1}", "1.0", "1e3", "01", "-0",
                          "\"\\/\"", "\"\\u0041\"", "\"\\u000A\"", "\"\\n\"", "[1,]", "{\"a\" :1}", "tru",
                          "nul", "\"\x01\"", "9223372036854775808", "-9223372036854775809", "", "[", "+1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse(std::string_view(bad)), Error);
  }
  CHECK(parse(std::string_view(R"({"a":[1,true,null],"b":"\u001f"})")) ==
        Value(Value::Map{{"a", Value::List{1, true, Value()}}, {"b", "\x1f"}}));
}

TEST_CASE("parser depth limit") {
  std::string deep(100, '[');
  deep += std::string(100, ']');
  CHECK_THROWS_AS(parse(std::string_view(deep)), Error);
}

TEST_CASE("round trip and oracle agreement over generated values") {
  std::map<std::string, Value> seen;
  for (int i = 0; i < 10000; ++i) {
    auto [v, j] = random_value(0);
    const std::string bytes = canonicalize(v);
    REQUIRE(bytes == oracle(j));
    const Value back = parse(bytes);
    REQUIRE(back == v);
    REQUIRE(canonicalize(back) == bytes);
    // Distinct values never share bytes.
    auto [it, fresh] = seen.emplace(bytes, v);
    if (!fresh) REQUIRE(it->second == v);
  }
}

TEST_CASE("date and its ISO text compare equal") {
  CHECK(Value(Date{1996, 3, 4}) == Value("1996-03-04"));
  CHECK(Value("1996-03-04").as_date() == Date{1996, 3, 4});
  CHECK_FALSE(Value(Date{1996, 3, 4}) == Value("1996-3-4"));
}

TEST_CASE("digest vectors and sensitivity") {
  CHECK(to_hex(digest(ByteView{})) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(to_hex(digest(std::string_view("abc"))) == openssl_sha256_hex("abc"));
  CHECK(digest(std::string_view("abc")) == digest(std::string_view("abc")));
  for (int i = 0; i < 1000; ++i) {
    Bytes b(static_cast<std::size_t>(uniform(1, 200)));
    for (auto& x : b) x = static_cast<std::uint8_t>(uniform(0, 255));
    const Hash32 before = digest(b);
    REQUIRE(to_hex(before) == openssl_sha256_hex(std::string_view(reinterpret_cast<char*>(b.data()), b.size())));
    b[uniform(0, b.size() - 1)] ^= static_cast<std::uint8_t>(1u << uniform(0, 7));
    REQUIRE(digest(b) != before);
  }
}

TEST_CASE("expect_keys") {
  const Value v = Value::Map{{"a", 1}, {"b", 2}};
  CHECK_NOTHROW(expect_keys(v, {"a", "b"}));
  CHECK_NOTHROW(expect_keys(v, {"a"}, {"b", "c"}));
  CHECK_THROWS_AS(expect_keys(v, {"a"}), Error);
  CHECK_THROWS_AS(expect_keys(v, {"a", "b", "c"}), Error);
}

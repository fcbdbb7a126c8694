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

#include "vsc/canonical.hpp"

#include <charconv>
#include <limits>

namespace vsc {

namespace {

[[noreturn]] void malformed(const std::string& what) { fail(Errc::MalformedValue, what); }

const char* type_name(Value::Type t) {
  switch (t) {
    case Value::Type::Null: return "null";
    case Value::Type::Bool: return "boolean";
    case Value::Type::Int: return "integer";
    case Value::Type::Text: return "text";
    case Value::Type::Date: return "date";
    case Value::Type::List: return "list";
    case Value::Type::Map: return "map";
  }
  return "?";
}

[[noreturn]] void mismatch(Value::Type want, Value::Type got) {
  malformed(std::string("expected ") + type_name(want) + ", got " + type_name(got));
}

}  // namespace

bool Value::as_bool() const {
  if (auto p = std::get_if<bool>(&v_)) return *p;
  mismatch(Type::Bool, type());
}

std::int64_t Value::as_int() const {
  if (auto p = std::get_if<std::int64_t>(&v_)) return *p;
  mismatch(Type::Int, type());
}

const std::string& Value::as_text() const {
  if (auto p = std::get_if<std::string>(&v_)) return *p;
  mismatch(Type::Text, type());
}

Date Value::as_date() const {
  if (auto p = std::get_if<Date>(&v_)) {
    if (!p->valid()) malformed("invalid calendar date");
    return *p;
  }
  if (auto p = std::get_if<std::string>(&v_)) return Date::parse(*p);
  mismatch(Type::Date, type());
}

const Value::List& Value::as_list() const {
  if (auto p = std::get_if<List>(&v_)) return *p;
  mismatch(Type::List, type());
}

const Value::Map& Value::as_map() const {
  if (auto p = std::get_if<Map>(&v_)) return *p;
  mismatch(Type::Map, type());
}

Value::Map& Value::as_map() {
  if (auto p = std::get_if<Map>(&v_)) return *p;
  mismatch(Type::Map, type());
}

const Value* Value::find(std::string_view key) const {
  const auto& m = as_map();
  auto it = m.find(std::string(key));
  return it == m.end() ? nullptr : &it->second;
}

const Value& Value::at(std::string_view key) const {
  if (const Value* v = find(key)) return *v;
  malformed("missing field '" + std::string(key) + "'");
}

bool operator==(const Value& a, const Value& b) {
  using T = Value::Type;
  if (a.type() == T::Date && b.type() == T::Text) return a.as_date().iso() == b.as_text();
  if (a.type() == T::Text && b.type() == T::Date) return b == a;
  return a.v_ == b.v_;
}

bool valid_utf8(std::string_view s) noexcept {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      extra = 1;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    // Overlong forms, surrogates, out of range.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

namespace {

void write_string(std::string& out, std::string_view s) {
  if (!valid_utf8(s)) malformed("text is not valid UTF-8");
  static constexpr char kHex[] = "0123456789abcdef";
  out.push_back('"');
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (ch == '"' || ch == '\\') {
      out.push_back('\\');
      out.push_back(ch);
    } else if (c < 0x20) {
      out += "\\u00";
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    } else {
      out.push_back(ch);
    }
  }
  out.push_back('"');
}

void write_value(std::string& out, const Value& v) {
  switch (v.type()) {
    case Value::Type::Null: out += "null"; break;
    case Value::Type::Bool: out += v.as_bool() ? "true" : "false"; break;
    case Value::Type::Int: out += std::to_string(v.as_int()); break;
    case Value::Type::Text: write_string(out, v.as_text()); break;
    case Value::Type::Date: write_string(out, v.as_date().iso()); break;
    case Value::Type::List: {
      out.push_back('[');
      bool first = true;
      for (const auto& e : v.as_list()) {
        if (!first) out.push_back(',');
        first = false;
        write_value(out, e);
      }
      out.push_back(']');
      break;
    }
    case Value::Type::Map: {
      out.push_back('{');
      bool first = true;
      for (const auto& [k, e] : v.as_map()) {
        if (!first) out.push_back(',');
        first = false;
        write_string(out, k);
        out.push_back(':');
        write_value(out, e);
      }
      out.push_back('}');
      break;
    }
  }
}

class Parser {
 public:
  explicit Parser(std::string_view in) : in_(in) {}

  Value parse_document() {
    Value v = parse_value(0);
    if (pos_ != in_.size()) malformed("trailing bytes at offset " + std::to_string(pos_));
    return v;
  }

 private:
  static constexpr int kMaxDepth = 64;

  char peek() const {
    if (pos_ >= in_.size()) malformed("unexpected end of input");
    return in_[pos_];
  }

  void expect(char c) {
    if (peek() != c) malformed(std::string("expected '") + c + "' at offset " + std::to_string(pos_));
    ++pos_;
  }

  void expect_word(std::string_view w) {
    if (in_.substr(pos_, w.size()) != w) malformed("invalid literal at offset " + std::to_string(pos_));
    pos_ += w.size();
  }

  Value parse_value(int depth) {
    if (depth > kMaxDepth) malformed("nesting too deep");
    switch (peek()) {
      case '{': return parse_map(depth);
      case '[': return parse_list(depth);
      case '"': return Value(parse_string());
      case 't': expect_word("true"); return Value(true);
      case 'f': expect_word("false"); return Value(false);
      case 'n': expect_word("null"); return Value(nullptr);
      default: return parse_int();
    }
  }

  Value parse_map(int depth) {
    expect('{');
    Value::Map m;
    if (peek() == '}') {
      ++pos_;
      return Value(std::move(m));
    }
    const std::string* last = nullptr;
    for (;;) {
      std::string key = parse_string();
      if (last && !(*last < key)) malformed("map keys not strictly sorted");
      expect(':');
      Value v = parse_value(depth + 1);
      auto [it, inserted] = m.emplace(std::move(key), std::move(v));
      last = &it->first;
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return Value(std::move(m));
    }
  }

  Value parse_list(int depth) {
    expect('[');
    Value::List l;
    if (peek() == ']') {
      ++pos_;
      return Value(std::move(l));
    }
    for (;;) {
      l.push_back(parse_value(depth + 1));
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(']');
      return Value(std::move(l));
    }
  }

  static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;  // uppercase is never produced, so never accepted
  }

  std::string parse_string() {
    expect('"');
    std::string out;
    for (;;) {
      const char c = peek();
      ++pos_;
      if (c == '"') break;
      if (static_cast<unsigned char>(c) < 0x20) malformed("raw control character in string");
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      const char e = peek();
      ++pos_;
      if (e == '"' || e == '\\') {
        out.push_back(e);
      } else if (e == 'u') {
        if (in_.substr(pos_, 2) != "00") malformed("only \\u00XX escapes are canonical");
        pos_ += 2;
        const int hi = hex_digit(peek());
        ++pos_;
        const int lo = hex_digit(peek());
        ++pos_;
        if (hi < 0 || lo < 0) malformed("bad \\u escape");
        const int code = hi * 16 + lo;
        if (code >= 0x20) malformed("needless \\u escape");
        out.push_back(static_cast<char>(code));
      } else {
        malformed("non-canonical escape");
      }
    }
    if (!valid_utf8(out)) malformed("text is not valid UTF-8");
    return out;
  }

  Value parse_int() {
    const std::size_t start = pos_;
    if (pos_ < in_.size() && in_[pos_] == '-') ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < in_.size() && in_[pos_] >= '0' && in_[pos_] <= '9') ++pos_;
    if (pos_ == digits) malformed("unexpected character at offset " + std::to_string(start));
    if (pos_ < in_.size() && (in_[pos_] == '.' || in_[pos_] == 'e' || in_[pos_] == 'E')) {
      malformed("floating-point values are not supported");
    }
    const std::string_view tok = in_.substr(start, pos_ - start);
    if ((in_[digits] == '0' && pos_ - digits > 1) || tok == "-0") malformed("non-minimal integer");
    std::int64_t value = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || p != tok.data() + tok.size()) malformed("integer out of range");
    return Value(value);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string canonicalize(const Value& v) {
  std::string out;
  write_value(out, v);
  return out;
}

Value parse(std::string_view bytes) { return Parser(bytes).parse_document(); }

void expect_keys(const Value& map, std::initializer_list<std::string_view> required,
                 std::initializer_list<std::string_view> optional) {
  const auto& m = map.as_map();
  std::size_t seen = 0;
  for (auto key : required) {
    if (m.find(std::string(key)) == m.end()) malformed("missing field '" + std::string(key) + "'");
    ++seen;
  }
  for (auto key : optional) {
    if (m.find(std::string(key)) != m.end()) ++seen;
  }
  if (seen != m.size()) malformed("unexpected fields in structure");
}

}  // namespace vsc

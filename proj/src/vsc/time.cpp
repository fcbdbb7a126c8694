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

#include "vsc/time.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "vsc/error.hpp"

namespace vsc {

bool is_leap_year(int year) noexcept { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

unsigned days_in_month(int year, unsigned month) noexcept {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap_year(year)) return 29;
  return kDays[month - 1];
}

bool Date::valid() const noexcept {
  return year >= 1 && year <= 9999 && month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

// Civil-from-days / days-from-civil after H. Hinnant's public-domain algorithms.
std::int64_t Date::days_since_epoch() const noexcept {
  const std::int64_t y = static_cast<std::int64_t>(year) - (month <= 2 ? 1 : 0);
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const std::int64_t yoe = y - era * 400;
  const std::int64_t mp = (static_cast<std::int64_t>(month) + 9) % 12;
  const std::int64_t doy = (153 * mp + 2) / 5 + day - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

Date Date::from_days(std::int64_t z) noexcept {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const std::int64_t doe = z - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t y = yoe + era * 400 + (m <= 2 ? 1 : 0);
  return Date{static_cast<int>(y), static_cast<unsigned>(m), static_cast<unsigned>(d)};
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

namespace {

bool parse_digits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  out = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    out = out * 10 + (s[i] - '0');
  }
  return true;
}

}  // namespace

Date Date::parse(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !parse_digits(text, 0, 4, y) ||
      !parse_digits(text, 5, 2, m) || !parse_digits(text, 8, 2, d)) {
    fail(Errc::MalformedValue, "date must be YYYY-MM-DD: " + std::string(text));
  }
  Date date{y, static_cast<unsigned>(m), static_cast<unsigned>(d)};
  if (!date.valid()) fail(Errc::MalformedValue, "invalid calendar date: " + std::string(text));
  return date;
}

Date Instant::date() const noexcept {
  std::int64_t days = seconds / kDay;
  if (seconds % kDay < 0) --days;
  return Date::from_days(days);
}

std::string Instant::iso() const {
  std::int64_t days = seconds / kDay;
  std::int64_t rem = seconds % kDay;
  if (rem < 0) {
    rem += kDay;
    --days;
  }
  const Date d = Date::from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", d.year, d.month, d.day,
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

Instant Instant::parse(std::string_view text) {
  int hh = 0, mm = 0, ss = 0;
  if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z' ||
      !parse_digits(text, 11, 2, hh) || !parse_digits(text, 14, 2, mm) || !parse_digits(text, 17, 2, ss) ||
      hh > 23 || mm > 59 || ss > 59) {
    fail(Errc::MalformedValue, "instant must be YYYY-MM-DDTHH:MM:SSZ: " + std::string(text));
  }
  return from_date(Date::parse(text.substr(0, 10)), hh, mm, ss);
}

Instant Instant::from_date(const Date& d, int hour, int minute, int second) noexcept {
  return Instant{d.days_since_epoch() * kDay + hour * 3600 + minute * 60 + second};
}

Date add_months(const Date& d, int months) noexcept {
  const std::int64_t total = static_cast<std::int64_t>(d.year) * 12 + (d.month - 1) + months;
  std::int64_t y = total / 12;
  std::int64_t m0 = total % 12;
  if (m0 < 0) {
    m0 += 12;
    --y;
  }
  Date out{static_cast<int>(y), static_cast<unsigned>(m0 + 1), d.day};
  out.day = std::min(out.day, days_in_month(out.year, out.month));
  return out;
}

Instant add_months(Instant t, int months) noexcept {
  const Date d = t.date();
  const std::int64_t time_of_day = t.seconds - Instant::from_date(d).seconds;
  return Instant{Instant::from_date(add_months(d, months)).seconds + time_of_day};
}

Instant system_now() {
  using namespace std::chrono;
  return Instant{duration_cast<seconds>(system_clock::now().time_since_epoch()).count()};
}

Clock system_clock() { return [] { return system_now(); }; }

}  // namespace vsc

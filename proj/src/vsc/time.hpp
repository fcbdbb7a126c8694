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

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace vsc {

/// Calendar date, day granularity. Claims never carry a time of day.
struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  auto operator<=>(const Date&) const = default;

  bool valid() const noexcept;
  /// Days since 1970-01-01 (proleptic Gregorian).
  std::int64_t days_since_epoch() const noexcept;
  static Date from_days(std::int64_t days) noexcept;

  std::string iso() const;                         // YYYY-MM-DD
  static Date parse(std::string_view text);        // throws MalformedValue
};

/// UTC instant with one-second resolution.
struct Instant {
  std::int64_t seconds = 0;  // since the Unix epoch

  auto operator<=>(const Instant&) const = default;

  Instant operator+(std::int64_t s) const noexcept { return {seconds + s}; }
  Instant operator-(std::int64_t s) const noexcept { return {seconds - s}; }

  Date date() const noexcept;
  std::string iso() const;                         // YYYY-MM-DDTHH:MM:SSZ
  static Instant parse(std::string_view text);     // throws MalformedValue
  static Instant from_date(const Date& d, int hour = 0, int minute = 0, int second = 0) noexcept;
};

inline constexpr std::int64_t kMinute = 60;
inline constexpr std::int64_t kDay = 86400;

bool is_leap_year(int year) noexcept;
unsigned days_in_month(int year, unsigned month) noexcept;

/// Calendar-month addition, clamping to month end (Jan 31 + 1 = Feb 28/29).
/// Time of day is preserved.
Instant add_months(Instant t, int months) noexcept;
Date add_months(const Date& d, int months) noexcept;

/// Source of "now" for services; tests substitute a fixed or stepping clock.
using Clock = std::function<Instant()>;
Instant system_now();
Clock system_clock();

}  // namespace vsc

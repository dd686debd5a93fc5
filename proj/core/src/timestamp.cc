//
// Copyright 2026 The xtars Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "xtars/timestamp.h"

#include <cctype>
#include <cstdio>

#include "xtars/error.h"

namespace xtars {
namespace {

// Days from civil date (proleptic Gregorian), after H. Hinnant.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                     unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  int digits(std::size_t n) {
    int v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        bad();
      }
      v = v * 10 + (s_[pos_++] - '0');
    }
    return v;
  }
  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) bad();
    ++pos_;
  }
  bool accept(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  std::size_t skip_digits() {
    std::size_t n = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
      ++n;
    }
    return n;
  }
  bool done() const { return pos_ == s_.size(); }
  [[noreturn]] void bad() const {
    fail(ErrorCode::kParse, "invalid ISO-8601 timestamp: '" + std::string(s_) + "'");
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Timestamp parse_iso8601(std::string_view text) {
  Cursor c(text);
  const int year = c.digits(4);
  c.expect('-');
  const int month = c.digits(2);
  c.expect('-');
  const int day = c.digits(2);
  if (month < 1 || month > 12 || day < 1 || day > 31) c.bad();
  std::int64_t seconds = 0;
  if (c.accept('T') || c.accept(' ')) {
    const int hh = c.digits(2);
    c.expect(':');
    const int mm = c.digits(2);
    int ss = 0;
    if (c.accept(':')) {
      ss = c.digits(2);
      if (c.accept('.')) {
        // Fractional seconds are truncated.
        if (c.skip_digits() == 0) c.bad();
      }
    }
    if (hh > 23 || mm > 59 || ss > 60) c.bad();
    seconds = hh * 3600 + mm * 60 + ss;
    if (!c.accept('Z')) {
      int sign = 0;
      if (c.accept('+')) sign = 1;
      else if (c.accept('-')) sign = -1;
      if (sign != 0) {
        const int oh = c.digits(2);
        c.accept(':');
        const int om = c.digits(2);
        seconds -= sign * (oh * 3600 + om * 60);
      }
    }
  }
  if (!c.done()) c.bad();
  return days_from_civil(year, month, day) * 86400 + seconds;
}

std::string format_iso8601(Timestamp ts) {
  std::int64_t days = ts / 86400;
  std::int64_t rem = ts % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<long long>(y), m, d, static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
  return buf;
}

}  // namespace xtars

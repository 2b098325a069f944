/*
 * Copyright (c) 2026, The bbacheck Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bbacheck/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>
#include <numeric>

namespace bbacheck {
namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Wide gcdWide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = gcdWide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

std::int64_t parseInt(std::string_view digits, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw InvalidArgument("malformed number '" + std::string(whole) + "'");
  }
  return value;
}

bool allDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

Rational Rational::parse(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty()) throw InvalidArgument("empty number");
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto n = text.substr(0, slash);
    auto d = text.substr(slash + 1);
    if (!allDigits(n) || !allDigits(d)) {
      throw InvalidArgument("malformed number '" + std::string(whole) + "'");
    }
    result = make(parseInt(n, whole), parseInt(d, whole));
  } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto intPart = text.substr(0, dot);
    auto fracPart = text.substr(dot + 1);
    if ((!intPart.empty() && !allDigits(intPart)) || (!fracPart.empty() && !allDigits(fracPart)) ||
        (intPart.empty() && fracPart.empty()) || fracPart.size() > 18) {
      throw InvalidArgument("malformed number '" + std::string(whole) + "'");
    }
    Wide scale = 1;
    for (std::size_t i = 0; i < fracPart.size(); ++i) scale *= 10;
    Wide num = intPart.empty() ? 0 : parseInt(intPart, whole);
    num *= scale;
    if (!fracPart.empty()) num += parseInt(fracPart, whole);
    result = make(num, scale);
  } else {
    if (!allDigits(text)) throw InvalidArgument("malformed number '" + std::string(whole) + "'");
    result = Rational(parseInt(text, whole));
  }
  return negative ? -result : result;
}

Rational Rational::operator+(const Rational& o) const {
  return make(Wide(num_) * o.den_ + Wide(o.num_) * den_, Wide(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return make(Wide(num_) * o.den_ - Wide(o.num_) * den_, Wide(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return make(Wide(num_) * o.num_, Wide(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw InvalidArgument("rational division by zero");
  return make(Wide(num_) * o.den_, Wide(den_) * o.num_);
}

Rational Rational::operator-() const { return make(-Wide(num_), den_); }

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  return Wide(num_) * o.den_ <=> Wide(o.num_) * den_;
}

bool Rational::isTerminatingDecimal() const {
  std::int64_t d = den_;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1;
}

std::string Rational::toString() const {
  if (!isTerminatingDecimal()) {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  int twos = 0, fives = 0;
  for (std::int64_t d = den_; d % 2 == 0; d /= 2) ++twos;
  for (std::int64_t d = den_; d % 5 == 0; d /= 5) ++fives;
  const int digits = std::max({twos, fives, 1});
  Wide scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Wide scaled = Wide(num_ < 0 ? -num_ : num_) * (scale / den_);
  Wide intPart = scaled / scale;
  Wide fracPart = scaled % scale;
  std::string frac = std::to_string(static_cast<std::int64_t>(fracPart));
  frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
  std::string out = num_ < 0 ? "-" : "";
  out += std::to_string(static_cast<std::int64_t>(intPart));
  out += '.';
  out += frac;
  return out;
}

std::size_t Rational::hash() const {
  std::size_t h = std::hash<std::int64_t>{}(num_);
  return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.toString(); }

bool isProbability(const Rational& p) { return p > Rational(0) && p <= Rational(1); }

}  // namespace bbacheck

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

#ifndef BBACHECK_RATIONAL_HPP_
#define BBACHECK_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "bbacheck/error.hpp"

namespace bbacheck {

/**
 * Exact rational number with 64-bit numerator and denominator.
 *
 * Always kept in lowest terms with a positive denominator, so structural
 * equality coincides with numeric equality. Arithmetic is overflow-checked.
 * Probabilities carried by transition labels use this type so that label
 * equality is exact.
 */
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Parses "0.7424", "3", "1/3" or "-2.5". Throws InvalidArgument.
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const;

  bool operator==(const Rational& o) const = default;
  std::strong_ordering operator<=>(const Rational& o) const;

  double toDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // True if the value has a finite decimal expansion.
  bool isTerminatingDecimal() const;

  // Exact rendering: the shortest decimal with at least one fractional digit
  // ("0.75", "1.0") when it terminates, otherwise "num/den".
  std::string toString() const;

  std::size_t hash() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// True if 0 < p <= 1.
bool isProbability(const Rational& p);

}  // namespace bbacheck

template <>
struct std::hash<bbacheck::Rational> {
  std::size_t operator()(const bbacheck::Rational& r) const { return r.hash(); }
};

#endif  // BBACHECK_RATIONAL_HPP_

/*
 * Copyright 2026 the hvg authors
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

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "hvg/errors.hpp"

namespace hvg {

// Arbitrary-precision nonnegative integer / exact rational. GMP does the
// heavy lifting; everything downstream only sees these two names.
using BigNat = mpz_class;
using Rational = mpq_class;

// Reduced rational num/den. den must be nonzero.
Rational make_rational(const BigNat& num, const BigNat& den);

// C(n, k); zero when k > n.
BigNat binomial(unsigned long n, unsigned long k);

// 2^e.
BigNat pow2(unsigned long e);

// "num/den", always with the slash, fully reduced ("3/8", "1/1", "0/1").
std::string to_fraction(const Rational& r);

// Accepts "a/b" or a bare integer "a". Denominator must be nonzero.
Rational parse_fraction(const std::string& text);

// Accepts optionally signed fixed-point decimals: "42", "0.75", "16.5".
Rational parse_decimal(const std::string& text);

// Fixed-point decimal with exactly sig_figs significant digits, ties rounded
// half-to-even ("banker's rounding"), computed exactly. Zero renders as "0".
std::string to_decimal(const Rational& r, int sig_figs);

// Cuts a fixed-point decimal string down to sig_figs significant digits
// WITHOUT rounding; digits left of the decimal point are zero-filled.
// ("0.0003127", 3) -> "0.000312", ("2.977", 3) -> "2.97".
std::string truncate_sig_figs(const std::string& rendered, int sig_figs);

// A nonnegative magnitude stored as its base-2 logarithm, for counts too big
// to keep exactly. Exact zero gets its own flag since log2(0) has no double.
struct Log2Value {
  double log2 = 0.0;  // meaningful only when !zero
  bool zero = true;

  static Log2Value zero_value() { return Log2Value{}; }
  static Log2Value one() { return Log2Value{0.0, false}; }
  static Log2Value from_pow2(double exponent) { return Log2Value{exponent, false}; }
  static Log2Value from_u64(std::uint64_t v);
  static Log2Value from_bignat(const BigNat& v);
  static Log2Value from_rational(const Rational& r);  // r must be >= 0

  // Nearest integer; only meaningful when the value is genuinely integral.
  BigNat round_to_bignat() const;
  double to_double() const;  // 2^log2 (0 / inf on double under/overflow)

  // Value-space arithmetic. + is log-sum-exp; * and / are log add/subtract.
  Log2Value& operator+=(const Log2Value& o);
  Log2Value& operator*=(const Log2Value& o);
  Log2Value& operator/=(const Log2Value& o);
  friend Log2Value operator+(Log2Value a, const Log2Value& b) { return a += b; }
  friend Log2Value operator*(Log2Value a, const Log2Value& b) { return a *= b; }
  friend Log2Value operator/(Log2Value a, const Log2Value& b) { return a /= b; }
};

// Decimal rendering for log-space magnitudes: fixed-point when the decimal
// exponent is moderate, scientific ("1.2345e-890") otherwise.
std::string log2_to_decimal(const Log2Value& v, int sig_figs);

}  // namespace hvg

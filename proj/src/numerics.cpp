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

#include "hvg/numerics.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace hvg {

Rational make_rational(const BigNat& num, const BigNat& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigNat binomial(unsigned long n, unsigned long k) {
  BigNat r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

BigNat pow2(unsigned long e) {
  BigNat r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

std::string to_fraction(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational parse_fraction(const std::string& text) {
  auto slash = text.find('/');
  std::string ns = slash == std::string::npos ? text : text.substr(0, slash);
  std::string ds = slash == std::string::npos ? "1" : text.substr(slash + 1);
  BigNat num, den;
  if (ns.empty() || ds.empty() || mpz_set_str(num.get_mpz_t(), ns.c_str(), 10) != 0 ||
      mpz_set_str(den.get_mpz_t(), ds.c_str(), 10) != 0) {
    throw DomainError("not a fraction: '" + text + "'");
  }
  return make_rational(num, den);
}

Rational parse_decimal(const std::string& text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
  std::string digits;
  long frac_digits = -1;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (frac_digits >= 0) throw DomainError("not a decimal: '" + text + "'");
      frac_digits = 0;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (frac_digits >= 0) ++frac_digits;
    } else {
      throw DomainError("not a decimal: '" + text + "'");
    }
  }
  if (digits.empty()) throw DomainError("not a decimal: '" + text + "'");
  BigNat num(digits, 10);
  if (neg) num = -num;
  BigNat den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits < 0 ? 0 : frac_digits);
  return make_rational(num, den);
}

namespace {

BigNat pow10z(unsigned long e) {
  BigNat r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

// sign of num/den - 10^e for positive num, den
int cmp_pow10(const BigNat& num, const BigNat& den, long e) {
  if (e >= 0) return cmp(num, den * pow10z(e));
  return cmp(num * pow10z(-e), den);
}

}  // namespace

std::string to_decimal(const Rational& r, int sig_figs) {
  if (sig_figs < 1) throw DomainError("sig_figs must be >= 1");
  if (r == 0) return "0";
  Rational c = r;
  c.canonicalize();
  bool neg = c < 0;
  BigNat num = abs(c.get_num());
  BigNat den = c.get_den();

  // e = floor(log10(num/den)); the digit-count estimate is off by at most one.
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 10));
  while (cmp_pow10(num, den, e) < 0) --e;
  while (cmp_pow10(num, den, e + 1) >= 0) ++e;

  // Scale so the value has exactly sig_figs digits before the (shifted)
  // point, then divide with round-half-even on the remainder.
  long shift = sig_figs - 1 - e;
  BigNat sn = num, sd = den;
  if (shift >= 0) sn *= pow10z(shift); else sd *= pow10z(-shift);
  BigNat q, rem;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), sn.get_mpz_t(), sd.get_mpz_t());
  int half = cmp(2 * rem, sd);
  if (half > 0 || (half == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  if (q == pow10z(sig_figs)) {  // 999.. rounded up to 1000..
    q /= 10;
    ++e;
  }

  std::string digits = q.get_str();  // exactly sig_figs characters
  std::string out;
  if (e >= 0) {
    long int_len = e + 1;
    if (int_len >= static_cast<long>(digits.size())) {
      out = digits + std::string(int_len - digits.size(), '0');
    } else {
      out = digits.substr(0, int_len) + "." + digits.substr(int_len);
    }
  } else {
    out = "0." + std::string(-e - 1, '0') + digits;
  }
  return neg ? "-" + out : out;
}

std::string truncate_sig_figs(const std::string& rendered, int sig_figs) {
  if (sig_figs < 1) throw DomainError("sig_figs must be >= 1");
  std::string out;
  int seen = 0;
  bool past_point = false;
  for (char c : rendered) {
    if (c == '-' || c == '+') {
      out.push_back(c);
    } else if (c == '.') {
      past_point = true;
      out.push_back(c);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      if (seen == 0 && c == '0') {
        out.push_back(c);  // leading zeros are not significant
      } else if (seen < sig_figs) {
        out.push_back(c);
        ++seen;
      } else if (!past_point) {
        out.push_back('0');  // keep magnitude left of the point
      } else {
        break;
      }
    } else {
      throw DomainError("not a fixed-point decimal: '" + rendered + "'");
    }
  }
  if (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

Log2Value Log2Value::from_u64(std::uint64_t v) {
  if (v == 0) return zero_value();
  return Log2Value{std::log2(static_cast<double>(v)), false};
}

Log2Value Log2Value::from_bignat(const BigNat& v) {
  if (v == 0) return zero_value();
  if (v < 0) throw DomainError("log2 of negative value");
  long exp = 0;
  double d = mpz_get_d_2exp(&exp, v.get_mpz_t());  // v = d * 2^exp, d in [0.5, 1)
  return Log2Value{static_cast<double>(exp) + std::log2(d), false};
}

Log2Value Log2Value::from_rational(const Rational& r) {
  if (r < 0) throw DomainError("log2 of negative value");
  if (r == 0) return zero_value();
  Rational c = r;
  c.canonicalize();
  Log2Value n = from_bignat(c.get_num());
  n /= from_bignat(c.get_den());
  return n;
}

BigNat Log2Value::round_to_bignat() const {
  if (zero) return BigNat(0);
  long i = static_cast<long>(std::floor(log2));
  if (i <= 52) {
    return BigNat(static_cast<long>(std::llround(std::exp2(log2))));
  }
  // Pull 53 bits of mantissa, then shift the rest back in as zeros.
  double m = std::exp2(log2 - static_cast<double>(i));  // [1, 2)
  auto mant = static_cast<long long>(std::llround(m * 9007199254740992.0));  // * 2^53
  BigNat r(static_cast<long>(mant >> 32));
  r <<= 32;
  r += static_cast<unsigned long>(mant & 0xffffffffll);
  long back = i - 53;
  if (back >= 0) r <<= back; else r >>= -back;
  return r;
}

double Log2Value::to_double() const { return zero ? 0.0 : std::exp2(log2); }

Log2Value& Log2Value::operator+=(const Log2Value& o) {
  if (o.zero) return *this;
  if (zero) {
    *this = o;
    return *this;
  }
  double hi = log2 >= o.log2 ? log2 : o.log2;
  double lo = log2 >= o.log2 ? o.log2 : log2;
  // log2(2^hi + 2^lo) = hi + log2(1 + 2^(lo-hi))
  log2 = hi + std::log1p(std::exp2(lo - hi)) * 1.4426950408889634;  // 1/ln 2
  return *this;
}

Log2Value& Log2Value::operator*=(const Log2Value& o) {
  if (zero || o.zero) {
    *this = zero_value();
  } else {
    log2 += o.log2;
  }
  return *this;
}

Log2Value& Log2Value::operator/=(const Log2Value& o) {
  if (o.zero) throw DomainError("log-space division by zero");
  if (!zero) log2 -= o.log2;
  return *this;
}

std::string log2_to_decimal(const Log2Value& v, int sig_figs) {
  // A double carries fewer than 17 meaningful decimal digits; far beyond that
  // the request is a bug, and the rendering buffer below is sized for 60.
  if (sig_figs < 1 || sig_figs > 60) throw DomainError("sig_figs must be in [1, 60]");
  if (v.zero) return "0";
  double d10 = v.log2 * 0.30102999566398120;  // log10(2)
  long e10 = static_cast<long>(std::floor(d10));
  double mant = std::pow(10.0, d10 - static_cast<double>(e10));
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*f", sig_figs - 1, mant);
  std::string digits(buf);
  if (digits.compare(0, 3, "10.") == 0 || digits == "10") {  // rounded up past 9.99..
    ++e10;
    std::snprintf(buf, sizeof buf, "%.*f", sig_figs - 1, 1.0);
    digits = buf;
  }
  std::string flat;
  for (char c : digits)
    if (c != '.') flat.push_back(c);
  if (e10 >= -6 && e10 <= 15) {
    if (e10 >= 0) {
      long int_len = e10 + 1;
      if (int_len >= static_cast<long>(flat.size()))
        return flat + std::string(int_len - flat.size(), '0');
      return flat.substr(0, int_len) + "." + flat.substr(int_len);
    }
    return "0." + std::string(-e10 - 1, '0') + flat;
  }
  return digits + "e" + std::to_string(e10);
}

}  // namespace hvg

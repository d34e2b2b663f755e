// Copyright 2026 The Ergoflow Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

#include "ergoflow/errors.hpp"

namespace ergoflow {

// Exact arithmetic over GMP. mpq_class values are kept canonical (lowest
// terms, positive denominator) by construction; every helper below preserves
// that invariant.
using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int int_pow(const Int& base, unsigned long e) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

/// base^e for integer e of either sign; throws on 0^negative.
inline Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  const unsigned long mag = e > 0 ? static_cast<unsigned long>(e)
                                  : static_cast<unsigned long>(-(e + 1)) + 1;
  Int num = int_pow(Int(base.get_num()), mag);
  Int den = int_pow(Int(base.get_den()), mag);
  if (e < 0) {
    if (num == 0) throw ValidationError("zero raised to a negative power");
    std::swap(num, den);
  }
  return make_rat(num, den);
}

inline Int binomial(unsigned long n, unsigned long k) {
  Int out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// Floor of a rational as an integer.
inline Int rat_floor(const Rat& q) {
  Int out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

inline Int rat_ceil(const Rat& q) {
  Int out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

namespace detail {

inline Int parse_int(const std::string& text) {
  if (text.empty()) throw ParseError("empty integer literal");
  std::size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (start == text.size()) throw ParseError("sign without digits: " + text);
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      throw ParseError("invalid integer literal: " + text);
  }
  return Int(text, 10);
}

}  // namespace detail

/// Parses "p/q", plain integers, and decimal literals ("0.5") exactly.
inline Rat rat_from_string(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (c != ' ' && c != '\t') text.push_back(c);
  if (text.empty()) throw ParseError("empty rational literal");

  if (auto slash = text.find('/'); slash != std::string::npos) {
    if (text.find('/', slash + 1) != std::string::npos)
      throw ParseError("invalid rational literal: " + raw);
    return make_rat(detail::parse_int(text.substr(0, slash)),
                    detail::parse_int(text.substr(slash + 1)));
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const bool neg = text[0] == '-';
    std::string head = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.empty()) throw ParseError("invalid decimal literal: " + raw);
    if (head.empty() || head == "+" || head == "-") head += "0";
    Int scale = int_pow(Int(10), frac.size());
    Int whole = detail::parse_int(head);
    Int part = detail::parse_int(frac);
    Int num = whole * scale + (neg ? -part : part);
    return make_rat(num, scale);
  }
  return Rat(detail::parse_int(text));
}

/// "num/den" in lowest terms; integers render without the "/1".
inline std::string rat_to_string(const Rat& q) {
  if (is_integer(q)) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Decimal expansion truncated toward zero at `digits` fractional digits.
/// Deterministic, locale independent.
inline std::string to_decimal_string(const Rat& q, std::size_t digits = 12) {
  const bool neg = q < 0;
  Int num = abs(Int(q.get_num()));
  const Int den = q.get_den();
  Int whole, rem;
  mpz_fdiv_qr(whole.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
              den.get_mpz_t());
  std::string out = (neg && (whole != 0 || rem != 0)) ? "-" : "";
  out += whole.get_str();
  if (digits == 0) return out;
  out.push_back('.');
  for (std::size_t i = 0; i < digits; ++i) {
    rem *= 10;
    Int d;
    mpz_fdiv_q(d.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t());
    rem -= d * den;
    out += d.get_str();
  }
  return out;
}

}  // namespace ergoflow

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

#include <cstdlib>
#include <map>
#include <string>
#include <utility>

#include "ergoflow/errors.hpp"
#include "ergoflow/interval.hpp"
#include "ergoflow/rational.hpp"

namespace ergoflow {

/// Comparison precision cap in bits; ERGOFLOW_PRECISION overrides the
/// default of 256.
inline unsigned default_precision() {
  static const unsigned value = [] {
    if (const char* env = std::getenv("ERGOFLOW_PRECISION")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != nullptr && *end == '\0' && v >= 8 && v <= 65536)
        return static_cast<unsigned>(v);
    }
    return 256u;
  }();
  return value;
}

/// Declared identities lambda = base^exponent used to rewrite forms before
/// comparison. Declarations are checked exactly at declaration time.
class MultiplicativeRelations {
 public:
  void declare(const Rat& value, const Rat& base, unsigned long exponent) {
    if (!(base > 0 && base < 1))
      throw ValidationError("relation base must lie in (0,1)");
    if (exponent == 0) throw ValidationError("relation exponent must be >= 1");
    if (rat_pow(base, static_cast<long>(exponent)) != value)
      throw ValidationError("relation does not hold: value != base^exponent");
    auto [it, inserted] = map_.emplace(value, std::make_pair(base, exponent));
    if (!inserted && it->second != std::make_pair(base, exponent))
      throw ValidationError("conflicting relation for the same value");
  }

  const std::map<Rat, std::pair<Rat, unsigned long>>& map() const {
    return map_;
  }

 private:
  std::map<Rat, std::pair<Rat, unsigned long>> map_;
};

/// Exact integer combination sum_i c_i * log(b_i) with rational bases b_i > 0.
/// Terms are keyed by base value; zero coefficients are erased.
class LogLinearForm {
 public:
  LogLinearForm() = default;

  static LogLinearForm log_of(const Rat& base) { return scaled(Int(1), base); }

  static LogLinearForm scaled(const Int& coeff, const Rat& base) {
    LogLinearForm f;
    f.accumulate(base, coeff);
    return f;
  }

  LogLinearForm& accumulate(const Rat& base, const Int& coeff) {
    if (base <= 0) throw ValidationError("log-linear basis value must be > 0");
    if (coeff == 0 || base == 1) return *this;
    auto [it, inserted] = terms_.emplace(base, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
    return *this;
  }

  bool empty() const { return terms_.empty(); }
  const std::map<Rat, Int>& terms() const { return terms_; }

  LogLinearForm& operator+=(const LogLinearForm& o) {
    for (const auto& [base, coeff] : o.terms_) accumulate(base, coeff);
    return *this;
  }
  LogLinearForm& operator-=(const LogLinearForm& o) {
    for (const auto& [base, coeff] : o.terms_) accumulate(base, -coeff);
    return *this;
  }
  LogLinearForm& operator*=(const Int& c) {
    if (c == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [base, coeff] : terms_) coeff *= c;
    return *this;
  }

  friend LogLinearForm operator+(LogLinearForm a, const LogLinearForm& b) {
    a += b;
    return a;
  }
  friend LogLinearForm operator-(LogLinearForm a, const LogLinearForm& b) {
    a -= b;
    return a;
  }
  friend LogLinearForm operator-(LogLinearForm a) {
    a *= Int(-1);
    return a;
  }
  friend LogLinearForm operator*(const Int& c, LogLinearForm a) {
    a *= c;
    return a;
  }

  bool same_terms(const LogLinearForm& o) const { return terms_ == o.terms_; }

 private:
  std::map<Rat, Int> terms_;
};

namespace detail {

// Splits off prime factors by trial division (and a primality certificate for
// the remainder). Unfactored composite remainders stay as opaque keys; they
// merge by equality only, so a hidden common factor can cost decidability but
// never soundness.
inline void factor_accumulate(std::map<Int, Int>& acc, Int n,
                              const Int& coeff) {
  if (n <= 0) throw ValidationError("cannot factor a nonpositive integer");
  auto add = [&acc](const Int& key, const Int& c) {
    auto [it, inserted] = acc.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) acc.erase(it);
    }
  };
  constexpr unsigned long kTrialBound = 100000;
  for (unsigned long d = 2; d <= kTrialBound && n > 1;
       d = (d == 2) ? 3 : d + 2) {
    if (Int(d) * Int(d) > n) break;
    Int count = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
      ++count;
    }
    if (count != 0) add(Int(d), coeff * count);
  }
  if (n > 1) add(n, coeff);
}

}  // namespace detail

/// Rewrites a form through the declared relations and then through exact
/// prime factorization of the remaining bases. The result is an integer
/// vector over keys K >= 2 representing sum c_K * log K; two forms are equal
/// exactly when their canonical vectors coincide.
inline std::map<Int, Int> canonical_exponents(
    const LogLinearForm& form,
    const MultiplicativeRelations& relations = {}) {
  std::map<Int, Int> acc;
  for (const auto& [raw_base, raw_coeff] : form.terms()) {
    Rat base = raw_base;
    Int coeff = raw_coeff;
    unsigned depth = 0;
    for (auto it = relations.map().find(base); it != relations.map().end();
         it = relations.map().find(base)) {
      base = it->second.first;
      coeff *= Int(it->second.second);
      if (++depth > 64)
        throw ValidationError("relation rewriting did not terminate");
    }
    detail::factor_accumulate(acc, Int(base.get_num()), coeff);
    detail::factor_accumulate(acc, Int(base.get_den()), -coeff);
  }
  return acc;
}

namespace detail {

inline RatInterval eval_canonical(const std::map<Int, Int>& canonical,
                                  unsigned precision) {
  if (canonical.empty()) return {Rat(0), Rat(0)};
  Int coeff_mass = 0;
  for (const auto& [key, coeff] : canonical) coeff_mass += abs(coeff);
  const unsigned budget =
      precision + 2 +
      static_cast<unsigned>(mpz_sizeinbase(coeff_mass.get_mpz_t(), 2));
  RatInterval total{Rat(0), Rat(0)};
  for (const auto& [key, coeff] : canonical)
    total = total + scale(log_interval(Rat(key), budget), coeff);
  return outward_round(total, precision + 2);
}

}  // namespace detail

/// Certified bracket of width <= 2^-precision around the exact value.
inline RatInterval eval_interval(const LogLinearForm& form, unsigned precision,
                                 const MultiplicativeRelations& relations = {}) {
  if (precision == 0) throw ValidationError("precision must be >= 1");
  return detail::eval_canonical(canonical_exponents(form, relations),
                                precision);
}

/// Certified sign in {-1, 0, +1}. Zero is reported only for an empty
/// canonical vector; a nonzero vector whose sign cannot be separated within
/// max_precision raises UndecidedComparison.
inline int form_sign(const LogLinearForm& form,
                     const MultiplicativeRelations& relations = {},
                     unsigned max_precision = default_precision()) {
  const auto canonical = canonical_exponents(form, relations);
  if (canonical.empty()) return 0;

  // All keys are >= 2, so log K > 0 and a one-signed vector decides itself.
  bool has_pos = false, has_neg = false;
  for (const auto& [key, coeff] : canonical) {
    (coeff > 0 ? has_pos : has_neg) = true;
  }
  if (!has_neg) return 1;
  if (!has_pos) return -1;

  for (unsigned precision = 32;; precision *= 2) {
    if (precision > max_precision) precision = max_precision;
    const RatInterval iv = detail::eval_canonical(canonical, precision);
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
    if (precision == max_precision) break;
  }
  throw UndecidedComparison(
      "sign not separated at max precision; possible undeclared rational "
      "dependency between basis values");
}

enum class Ordering { Less, Equal, Greater };

inline Ordering compare(const LogLinearForm& a, const LogLinearForm& b,
                        const MultiplicativeRelations& relations = {},
                        unsigned max_precision = default_precision()) {
  switch (form_sign(a - b, relations, max_precision)) {
    case -1:
      return Ordering::Less;
    case 1:
      return Ordering::Greater;
    default:
      return Ordering::Equal;
  }
}

/// coeff * log(base) with a rational multiplier; used for the lacunarity
/// threshold where an integer coefficient would be too rigid.
struct ScaledLog {
  Rat coeff;
  Rat base;
};

inline int scaled_log_sign(const ScaledLog& s) {
  if (s.base <= 0) throw ValidationError("scaled log base must be > 0");
  if (s.coeff == 0 || s.base == 1) return 0;
  const int base_side = s.base > 1 ? 1 : -1;
  return s.coeff > 0 ? base_side : -base_side;
}

/// Certified sign of form - coeff*log(base), via denominator clearing.
inline int form_minus_scaled_sign(const LogLinearForm& form,
                                  const ScaledLog& scaled,
                                  const MultiplicativeRelations& relations = {},
                                  unsigned max_precision = default_precision()) {
  LogLinearForm g = form;
  g *= Int(scaled.coeff.get_den());
  g.accumulate(scaled.base, -Int(scaled.coeff.get_num()));
  return form_sign(g, relations, max_precision);
}

/// Canonical rendering such as "4*log(2) - 1*log(3)"; "0" for the zero form.
inline std::string form_to_string(const LogLinearForm& form,
                                  const MultiplicativeRelations& relations = {}) {
  const auto canonical = canonical_exponents(form, relations);
  if (canonical.empty()) return "0";
  std::string out;
  for (const auto& [key, coeff] : canonical) {
    if (!out.empty()) out += coeff > 0 ? " + " : " - ";
    else if (coeff < 0) out += "-";
    out += Int(abs(coeff)).get_str() + "*log(" + key.get_str() + ")";
  }
  return out;
}

}  // namespace ergoflow

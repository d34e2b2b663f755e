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

#include <cstddef>
#include <map>
#include <vector>

#include "ergoflow/errors.hpp"
#include "ergoflow/rational.hpp"

namespace ergoflow {

/// Exact sparse polynomial in a fixed number of variables, with rational
/// coefficients keyed by exponent tuples. Zero coefficients are never stored.
class SparsePoly {
 public:
  using Exponents = std::vector<unsigned long>;

  explicit SparsePoly(std::size_t arity) : arity_(arity) {}

  static SparsePoly constant(std::size_t arity, const Rat& value) {
    SparsePoly p(arity);
    p.add_term(Exponents(arity, 0), value);
    return p;
  }

  std::size_t arity() const { return arity_; }
  const std::map<Exponents, Rat>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(Exponents exponents, const Rat& coeff) {
    if (exponents.size() != arity_)
      throw ValidationError("exponent tuple arity mismatch");
    if (coeff == 0) return;
    auto [it, inserted] = terms_.emplace(std::move(exponents), coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rat coeff(const Exponents& exponents) const {
    auto it = terms_.find(exponents);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  SparsePoly operator+(const SparsePoly& o) const {
    if (arity_ != o.arity_) throw ValidationError("polynomial arity mismatch");
    SparsePoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, c);
    return out;
  }

  SparsePoly operator-(const SparsePoly& o) const {
    if (arity_ != o.arity_) throw ValidationError("polynomial arity mismatch");
    SparsePoly out = *this;
    for (const auto& [e, c] : o.terms_) out.add_term(e, -c);
    return out;
  }

  SparsePoly operator*(const SparsePoly& o) const {
    if (arity_ != o.arity_) throw ValidationError("polynomial arity mismatch");
    SparsePoly out(arity_);
    for (const auto& [ea, ca] : terms_) {
      for (const auto& [eb, cb] : o.terms_) {
        Exponents e(arity_);
        for (std::size_t i = 0; i < arity_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(std::move(e), ca * cb);
      }
    }
    return out;
  }

  /// The coefficient-sum norm ||P|| = sum |c|.
  Rat norm() const {
    Rat total = 0;
    for (const auto& [e, c] : terms_) total += rat_abs(c);
    return total;
  }

  Rat eval_at_one() const {
    Rat total = 0;
    for (const auto& [e, c] : terms_) total += c;
    return total;
  }

 private:
  std::size_t arity_;
  std::map<Exponents, Rat> terms_;
};

}  // namespace ergoflow

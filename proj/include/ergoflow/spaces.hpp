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
#include <functional>
#include <vector>

#include "ergoflow/errors.hpp"
#include "ergoflow/rational.hpp"
#include "ergoflow/sequence_spec.hpp"

namespace ergoflow {

/// Digits a_1..a_n of a cylinder on the quotient space; depth is the length.
using Digits = std::vector<unsigned long>;

constexpr std::size_t kDefaultEnumGuard = 1u << 20;

inline void check_digits(const SequenceSpec& spec, const Digits& digits) {
  if (digits.size() > spec.depth())
    throw ValidationError("cylinder depth exceeds spec blocks");
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] > spec.digit_bound(i + 1))
      throw ValidationError("cylinder digit out of range");
  }
}

/// Exact product measure of the cylinder C(a_1,...,a_n); depth 0 gives 1.
inline Rat cylinder_measure(const SequenceSpec& spec, const Digits& digits) {
  check_digits(spec, digits);
  Rat mass = 1;
  for (std::size_t i = 0; i < digits.size(); ++i)
    mass *= spec.coordinate_mass(i + 1, digits[i]);
  return mass;
}

namespace detail {

/// Visits every digit tuple for coordinates first..last (1-based, inclusive),
/// or throws EnumerationTooLarge when the product of ranges exceeds guard.
inline void for_each_digit_tuple(const SequenceSpec& spec, std::size_t first,
                                 std::size_t last, std::size_t guard,
                                 const std::function<void(const Digits&)>& fn) {
  if (first > last + 1) throw ValidationError("bad coordinate range");
  std::size_t total = 1;
  for (std::size_t n = first; n <= last; ++n) {
    const std::size_t range = spec.digit_bound(n) + 1;
    if (total > guard / range)
      throw EnumerationTooLarge("digit tuple enumeration exceeds guard");
    total *= range;
  }
  Digits tuple(last + 1 - first, 0);
  while (true) {
    fn(tuple);
    std::size_t pos = 0;
    while (pos < tuple.size()) {
      if (tuple[pos] < spec.digit_bound(first + pos)) {
        ++tuple[pos];
        break;
      }
      tuple[pos] = 0;
      ++pos;
    }
    if (pos == tuple.size()) break;
  }
}

}  // namespace detail

/// Checks, by exact enumeration of {0,1}^(2l_n), that the digit-sum
/// pushforward of the Bernoulli product equals the stated quotient masses and
/// that each digit-sum fiber is exactly one equal-measure class.
inline bool quotient_pushforward_check(const SequenceSpec& spec, std::size_t n,
                                       unsigned guard_bits = 24) {
  const auto& b = spec.block(n);
  if (2 * b.l > guard_bits)
    throw EnumerationTooLarge("pushforward enumeration exceeds bit guard");

  const unsigned long sites = 2 * b.l;
  const Rat site_denominator = 1 + b.lambda;
  std::vector<Rat> fiber_mass(sites + 1, Rat(0));
  for (unsigned long bits = 0; bits < (1ul << sites); ++bits) {
    unsigned long sum = 0;
    for (unsigned long i = 0; i < sites; ++i) sum += (bits >> i) & 1u;
    Rat mass = rat_pow(b.lambda, static_cast<long>(sum)) /
               rat_pow(site_denominator, static_cast<long>(sites));
    fiber_mass[sum] += mass;
  }
  for (unsigned long i = 0; i <= sites; ++i) {
    if (fiber_mass[i] != spec.coordinate_mass(n, i)) return false;
  }
  // One class per fiber: strings of equal digit sum share a measure by the
  // product formula; distinct sums must give distinct string measures.
  for (unsigned long a = 0; a <= sites; ++a) {
    for (unsigned long b2 = a + 1; b2 <= sites; ++b2) {
      if (rat_pow(b.lambda, static_cast<long>(a)) ==
          rat_pow(b.lambda, static_cast<long>(b2)))
        return false;
    }
  }
  return true;
}

}  // namespace ergoflow

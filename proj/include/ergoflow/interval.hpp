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

#include <map>
#include <mutex>
#include <utility>

#include "ergoflow/errors.hpp"
#include "ergoflow/rational.hpp"

namespace ergoflow {

/// Closed interval with exact rational endpoints, lo <= hi.
struct RatInterval {
  Rat lo;
  Rat hi;

  Rat width() const { return hi - lo; }
  Rat midpoint() const { return (lo + hi) / 2; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool contains(const RatInterval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  bool overlaps(const RatInterval& other) const {
    return lo <= other.hi && other.lo <= hi;
  }

  RatInterval operator+(const RatInterval& o) const {
    return {lo + o.lo, hi + o.hi};
  }
  RatInterval operator-() const { return {-hi, -lo}; }
};

/// Scales by an exact integer, swapping endpoints for negative factors.
inline RatInterval scale(const RatInterval& iv, const Int& c) {
  if (c >= 0) return {Rat(c) * iv.lo, Rat(c) * iv.hi};
  return {Rat(c) * iv.hi, Rat(c) * iv.lo};
}

/// Rounds endpoints outward onto the 2^-bits dyadic grid. Keeps interval
/// arithmetic from accumulating huge exact denominators; adds at most
/// 2^(1-bits) to the width.
inline RatInterval outward_round(const RatInterval& iv, unsigned bits) {
  const Int scale_pow = int_pow(Int(2), bits);
  Rat lo_scaled = iv.lo * Rat(scale_pow);
  Rat hi_scaled = iv.hi * Rat(scale_pow);
  return {make_rat(rat_floor(lo_scaled), scale_pow),
          make_rat(rat_ceil(hi_scaled), scale_pow)};
}

namespace detail {

inline Rat pow2_inverse(unsigned bits) { return make_rat(1, int_pow(Int(2), bits)); }

// 2*atanh(t) = log((1+t)/(1-t)) for |t| < 1, as a certified bracket.
// Truncation error after the last added exponent 2j+1 is bounded by
// |t|^(2j+3) / ((2j+3)(1 - t^2)).
inline RatInterval log_via_atanh(const Rat& t, unsigned precision) {
  const Rat tsq = t * t;
  if (tsq >= 1) throw ValidationError("atanh argument out of range");
  const Rat tail_target = pow2_inverse(precision + 4);
  const Rat one_minus_tsq = 1 - tsq;

  Rat sum = 0;
  Rat power = t;  // t^(2j+1)
  for (unsigned long j = 0;; ++j) {
    sum += power / Rat(2 * j + 1);
    power *= tsq;
    Rat tail = rat_abs(power) / (Rat(2 * j + 3) * one_minus_tsq);
    if (tail <= tail_target) {
      return {2 * (sum - tail), 2 * (sum + tail)};
    }
  }
}

}  // namespace detail

/// Certified bracket for log 2 of width <= 2^-precision. Cached per
/// precision; safe for concurrent callers.
inline RatInterval log2_interval(unsigned precision) {
  static std::mutex mutex;
  static std::map<unsigned, RatInterval> cache;
  {
    std::scoped_lock lock(mutex);
    if (auto it = cache.find(precision); it != cache.end()) return it->second;
  }
  // 2 = (1 + 1/3)/(1 - 1/3).
  RatInterval value =
      outward_round(detail::log_via_atanh(make_rat(1, 3), precision + 2),
                    precision + 2);
  std::scoped_lock lock(mutex);
  cache.emplace(precision, value);
  return value;
}

/// Certified bracket for log x, x > 0 rational, of width <= 2^-precision.
///
/// Reduces x = m * 2^k with m in [3/4, 3/2), then evaluates the atanh series
/// at (m-1)/(m+1) (|t| <= 1/5) and adds k certified copies of log 2. All
/// arithmetic is exact; the only slack is the stated truncation bound and the
/// final outward rounding.
inline RatInterval log_interval(const Rat& x, unsigned precision) {
  if (x <= 0) throw ValidationError("log of a nonpositive value");
  if (x == 1) return {Rat(0), Rat(0)};

  Rat m = x;
  long k = 0;
  const Rat upper = make_rat(3, 2);
  const Rat lower = make_rat(3, 4);
  while (m >= upper) {
    m /= 2;
    ++k;
  }
  while (m < lower) {
    m *= 2;
    --k;
  }

  RatInterval series = m == 1
                           ? RatInterval{Rat(0), Rat(0)}
                           : detail::log_via_atanh((m - 1) / (m + 1), precision + 2);
  if (k != 0) {
    const Int k_int(k);
    const unsigned k_bits =
        static_cast<unsigned>(mpz_sizeinbase(k_int.get_mpz_t(), 2));
    series = series + scale(log2_interval(precision + 2 + k_bits), k_int);
  }
  return outward_round(series, precision + 2);
}

}  // namespace ergoflow

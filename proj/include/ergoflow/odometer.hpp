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
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ergoflow/errors.hpp"
#include "ergoflow/rational.hpp"

namespace ergoflow {

/// Parameters (lambda, k) of the block construction, with the derived tower
/// radii r_n = lambda^((k+1)^n). Block sizes are kept symbolic as big
/// integers; the coordinate spaces are never enumerated.
class OdometerSpec {
 public:
  OdometerSpec(unsigned long lambda, unsigned long k) : lambda_(lambda), k_(k) {
    if (lambda < 2 || k < 2)
      throw ValidationError("odometer parameters need lambda, k >= 2");
  }

  unsigned long lambda() const { return lambda_; }
  unsigned long k() const { return k_; }

  /// r_n = lambda^((k+1)^n) for n >= 1.
  Int r(std::size_t n) const {
    if (n == 0) throw ValidationError("r_n is defined for n >= 1");
    unsigned long exponent = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (exponent > 100'000'000ul / (k_ + 1))
        throw EnumerationTooLarge("adic exponent too large");
      exponent *= k_ + 1;
    }
    return int_pow(Int(lambda_), exponent);
  }

  /// Size of block I_n^j: r_n^(k-j) for n >= 1 (so the last block is a single
  /// point); level 0 has k singleton blocks.
  Int block_size(std::size_t n, unsigned long j) const {
    if (j > block_count(n) - 1)
      throw ValidationError("block index out of range");
    if (n == 0) return Int(1);
    Int base = r(n);
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), k_ - j);
    return out;
  }

  unsigned long block_count(std::size_t n) const {
    return n == 0 ? k_ : k_ + 1;
  }

  /// Mass of one point inside block I_n^j.
  Rat point_mass(std::size_t n, unsigned long j) const {
    if (n == 0) return make_rat(1, Int(k_));
    return make_rat(1, Int(k_ + 1) * block_size(n, j));
  }

  /// nu_n(I_n^j): 1/k at level 0 and 1/(k+1) above, evaluated symbolically as
  /// size times point mass.
  Rat block_mass(std::size_t n, unsigned long j) const {
    return Rat(block_size(n, j)) * point_mass(n, j);
  }

 private:
  unsigned long lambda_;
  unsigned long k_;
};

/// Digits z_0..z_N of a cylinder on the quotient Z; z_0 < k, z_n <= k.
using AdicDigits = std::vector<unsigned long>;

inline void check_adic(const OdometerSpec& spec, const AdicDigits& z) {
  if (z.empty()) throw PrefixTooShort("empty adic prefix");
  if (z[0] >= spec.k()) throw ValidationError("leading digit out of range");
  for (std::size_t i = 1; i < z.size(); ++i)
    if (z[i] > spec.k()) throw ValidationError("adic digit out of range");
}

/// mu(C(z_0,...,z_N)) = (1/k) (1/(k+1))^N.
inline Rat adic_cylinder_measure(const OdometerSpec& spec,
                                 const AdicDigits& z) {
  check_adic(spec, z);
  return make_rat(1, Int(spec.k()) *
                         int_pow(Int(spec.k() + 1),
                                 static_cast<unsigned long>(z.size() - 1)));
}

/// The automorphism S on cylinders. With N = min{n >= 1 : z_n < k} inside the
/// prefix, the image zeroes coordinates below N, increments z_N and rotates
/// the head by z_0 + ... + z_{N-1} - 1 (mod k). An all-k tail follows the
/// special-point rule C(a,k,...,k) -> C(a-1,0,...,0).
inline AdicDigits odometer_step(const OdometerSpec& spec, const AdicDigits& z) {
  check_adic(spec, z);
  const unsigned long k = spec.k();
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < z.size(); ++i) {
    if (z[i] < k) {
      pivot = i;
      break;
    }
  }
  AdicDigits out(z.size(), 0);
  if (pivot == 0) {
    out[0] = (z[0] + k - 1) % k;
    return out;
  }
  unsigned long head = 0;
  for (std::size_t i = 0; i < pivot; ++i) head = (head + z[i]) % k;
  out[0] = (head + k - 1) % k;
  out[pivot] = z[pivot] + 1;
  for (std::size_t i = pivot + 1; i < z.size(); ++i) out[i] = z[i];
  return out;
}

/// Exact inverse of odometer_step, by inverting the case split.
inline AdicDigits odometer_step_inverse(const OdometerSpec& spec,
                                        const AdicDigits& w) {
  check_adic(spec, w);
  const unsigned long k = spec.k();
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] > 0) {
      pivot = i;
      break;
    }
  }
  AdicDigits out(w.size(), 0);
  if (pivot == 0) {
    out[0] = (w[0] + 1) % k;
    for (std::size_t i = 1; i < w.size(); ++i) out[i] = k;
    return out;
  }
  // The forward head satisfies z_0 + (pivot-1)k - 1 = w_0 (mod k).
  out[0] = (w[0] + 1) % k;
  for (std::size_t i = 1; i < pivot; ++i) out[i] = k;
  out[pivot] = w[pivot] - 1;
  for (std::size_t i = pivot + 1; i < w.size(); ++i) out[i] = w[i];
  return out;
}

/// The ordered level-n Kakutani tower: cells A_n^0 (all zeros), A_n^1 = S A_n^0,
/// ... closing cyclically after k (k+1)^n steps and exhausting every
/// length-(n+1) cylinder.
struct TowerLevel {
  std::size_t n;
  std::vector<AdicDigits> cells;
};

inline unsigned long tower_size(const OdometerSpec& spec, std::size_t n,
                                std::size_t guard) {
  unsigned long size = spec.k();
  for (std::size_t i = 0; i < n; ++i) {
    if (size > guard / (spec.k() + 1))
      throw EnumerationTooLarge("tower level exceeds guard");
    size *= spec.k() + 1;
  }
  return size;
}

inline TowerLevel tower(const OdometerSpec& spec, std::size_t n,
                        std::size_t guard = 1u << 22) {
  const unsigned long size = tower_size(spec, n, guard);
  TowerLevel level{n, {}};
  level.cells.reserve(size);
  std::set<AdicDigits> seen;
  AdicDigits cell(n + 1, 0);
  for (unsigned long i = 0; i < size; ++i) {
    if (!seen.insert(cell).second)
      throw ValidationError("tower orbit revisited a cell early");
    level.cells.push_back(cell);
    cell = odometer_step(spec, cell);
  }
  if (cell != level.cells.front())
    throw ValidationError("tower orbit does not close cyclically");
  return level;
}

/// Certifies that tower indices form consistent digits of the
/// (k, k+1, k+1, ...)-adic integers for every level up to n_max: each level is
/// a full cycle and the level-(n+1) index reduces to the parent's index modulo
/// the level size. That is exactly conjugacy of S to the adic successor at
/// finite depth.
inline bool adic_coding_check(const OdometerSpec& spec, std::size_t n_max,
                              std::size_t guard = 1u << 22) {
  std::map<AdicDigits, unsigned long> parent_index;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const TowerLevel level = tower(spec, n, guard);
    const unsigned long expected = tower_size(spec, n, guard);
    if (level.cells.size() != expected) return false;
    std::map<AdicDigits, unsigned long> index;
    for (unsigned long i = 0; i < level.cells.size(); ++i)
      index.emplace(level.cells[i], i);
    if (n > 0) {
      const unsigned long parent_size = expected / (spec.k() + 1);
      for (const auto& [cell, i] : index) {
        AdicDigits parent(cell.begin(), cell.end() - 1);
        auto it = parent_index.find(parent);
        if (it == parent_index.end()) return false;
        if (i % parent_size != it->second) return false;
      }
    }
    parent_index = std::move(index);
  }
  return true;
}

/// Coordinate of a point through the block structure: level n, block j and a
/// symbolic offset inside the block.
struct BlockCoordinate {
  std::size_t n;
  unsigned long block;
  Int offset;
};

/// pi(x)_n together with the exact block mass, computed from symbolic sizes.
inline std::pair<unsigned long, Rat> block_projection(const OdometerSpec& spec,
                                                      const BlockCoordinate& x) {
  if (x.block >= spec.block_count(x.n))
    throw ValidationError("block index out of range");
  if (x.offset < 0 || x.offset >= spec.block_size(x.n, x.block))
    throw ValidationError("offset outside block");
  return {x.block, spec.block_mass(x.n, x.block)};
}

/// Locates a raw coordinate value in {0,...,k_n} inside the block structure.
inline BlockCoordinate locate_block(const OdometerSpec& spec, std::size_t n,
                                    const Int& raw) {
  if (raw < 0) throw ValidationError("raw coordinate must be nonnegative");
  Int cursor = raw;
  for (unsigned long j = 0; j < spec.block_count(n); ++j) {
    const Int size = spec.block_size(n, j);
    if (cursor < size) return {n, j, cursor};
    cursor -= size;
  }
  throw ValidationError("raw coordinate exceeds the coordinate space");
}

struct RecurrenceReport {
  std::size_t samples;
  std::size_t horizon;
  std::uint64_t seed;
  std::map<unsigned long, std::size_t> histogram;  // total hits -> multiplicity
  unsigned long min_hits;
  Rat mean_hits;
  Rat first_coordinate_rate;  // fraction of pairs hitting at n = 1
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Unbiased draw from {0,...,bound-1}; rejection keeps the result independent
// of any library distribution implementation.
inline unsigned long uniform_below(std::mt19937_64& rng, unsigned long bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() / bound * bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<unsigned long>(draw % bound);
}

}  // namespace detail

/// Hits of the recurrence congruence for one explicit pair of digit strings:
/// the number of prefixes whose digit-sum difference vanishes mod k.
inline unsigned long count_recurrence_hits(const OdometerSpec& spec,
                                           const AdicDigits& z,
                                           const AdicDigits& w) {
  if (z.size() != w.size() || z.empty())
    throw ValidationError("recurrence pair needs equal nonzero lengths");
  const unsigned long k = spec.k();
  unsigned long acc = 0;
  unsigned long hits = 0;
  for (std::size_t n = 0; n < z.size(); ++n) {
    acc = (acc + z[n] % k + k - w[n] % k) % k;
    if (acc == 0) ++hits;
  }
  return hits;
}

/// Samples independent mu x mu pairs and counts, per pair, how many of the
/// first `horizon` partial digit sums agree mod k. Seeded per sample, so the
/// report is reproducible and order independent.
inline RecurrenceReport recurrence_stats(const OdometerSpec& spec,
                                         std::size_t samples,
                                         std::size_t horizon,
                                         std::uint64_t seed) {
  if (samples == 0 || horizon == 0)
    throw ValidationError("recurrence stats need samples, N >= 1");
  const unsigned long k = spec.k();
  RecurrenceReport report{samples, horizon, seed, {}, 0, Rat(0), Rat(0)};
  unsigned long min_hits = std::numeric_limits<unsigned long>::max();
  unsigned long long total_hits = 0;
  std::size_t first_hits = 0;
  AdicDigits z(horizon), w(horizon);
  for (std::size_t i = 0; i < samples; ++i) {
    std::mt19937_64 rng(detail::splitmix64(seed + 0x632be59bd9b4e019ull * i));
    for (std::size_t n = 0; n < horizon; ++n) {
      const unsigned long bound = n == 0 ? k : k + 1;
      z[n] = detail::uniform_below(rng, bound);
      w[n] = detail::uniform_below(rng, bound);
    }
    const unsigned long hits = count_recurrence_hits(spec, z, w);
    if (z[0] == w[0]) ++first_hits;
    ++report.histogram[hits];
    min_hits = std::min(min_hits, hits);
    total_hits += hits;
  }
  report.min_hits = min_hits;
  report.mean_hits = make_rat(Int(static_cast<unsigned long>(total_hits)),
                              Int(static_cast<unsigned long>(samples)));
  report.first_coordinate_rate =
      make_rat(Int(static_cast<unsigned long>(first_hits)),
               Int(static_cast<unsigned long>(samples)));
  return report;
}

/// The flow built under the constant ceiling log(lambda). Times are measured
/// in units of log(lambda); the base map S is applied once per full unit and
/// the move is measure preserving (RN = 1).
struct CeilingFlowResult {
  AdicDigits prefix;
  Rat time;  // in [0,1) units of log(lambda)
};

inline CeilingFlowResult constant_ceiling_flow(const OdometerSpec& spec,
                                               const AdicDigits& start,
                                               const Rat& t, const Rat& s,
                                               std::size_t guard = 1u << 20) {
  check_adic(spec, start);
  if (t < 0 || t >= 1)
    throw TimeOutOfRange("flow time must satisfy 0 <= t < log(lambda)");
  const Rat total = t + s;
  const Int steps = rat_floor(total);
  const Int magnitude = abs(steps);
  if (magnitude > static_cast<unsigned long>(guard))
    throw EnumerationTooLarge("constant ceiling flow exceeds step guard");
  AdicDigits prefix = start;
  for (Int i = 0; i < magnitude; ++i) {
    prefix = steps > 0 ? odometer_step(spec, prefix)
                       : odometer_step_inverse(spec, prefix);
  }
  return {std::move(prefix), total - Rat(steps)};
}

}  // namespace ergoflow

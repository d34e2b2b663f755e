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

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ergoflow/errors.hpp"
#include "ergoflow/rational.hpp"
#include "ergoflow/sequence_spec.hpp"

namespace ergoflow {

// The mod-3 residue machinery behind the approximation certificate. Per
// coordinate, the conjugate root pair multiplies out to the real polynomial
//
//   q(X) = (1 - lambda X + lambda^2 X^2) / (1 + lambda)^2,
//
// and the certificate quantities are residue-graded coefficient sums of
// prod_i q_i(X)^(l_i). Because a coefficient of q^l at degree p always has
// sign (-1)^p, absolute coefficient sums multiply across coordinates exactly,
// which collapses the exponential sums to a chain of Z_3 convolutions.

/// Coefficients of q(X)^l, exact, degree 2l. Index p holds the coefficient of
/// X^p, weight factor (1+lambda)^(-2l) included.
inline std::vector<Rat> conjugate_pair_power(unsigned long l,
                                             const Rat& lambda) {
  if (l == 0) throw ValidationError("conjugate pair power needs l >= 1");
  if (!(lambda > 0 && lambda < 1))
    throw ValidationError("lambda must lie in (0,1)");
  const Rat unit = rat_pow(1 + lambda, -2);
  const std::array<Rat, 3> base = {unit, -lambda * unit,
                                   lambda * lambda * unit};
  std::vector<Rat> coeffs = {Rat(1)};
  for (unsigned long step = 0; step < l; ++step) {
    std::vector<Rat> next(coeffs.size() + 2, Rat(0));
    for (std::size_t p = 0; p < coeffs.size(); ++p) {
      if (coeffs[p] == 0) continue;
      for (std::size_t d = 0; d < 3; ++d) next[p + d] += coeffs[p] * base[d];
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

/// Per-coordinate residue-graded coefficient sums of q^l: absolute sums drive
/// the defect quantities, signed sums tie back to the evaluation at X = 1.
struct GradedCoefficients {
  std::array<Rat, 3> abs_sums;
  std::array<Rat, 3> signed_sums;
};

inline GradedCoefficients graded_coefficients(unsigned long l,
                                              const Rat& lambda) {
  GradedCoefficients g{{Rat(0), Rat(0), Rat(0)}, {Rat(0), Rat(0), Rat(0)}};
  const auto coeffs = conjugate_pair_power(l, lambda);
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    g.abs_sums[p % 3] += rat_abs(coeffs[p]);
    g.signed_sums[p % 3] += coeffs[p];
  }
  return g;
}

/// ||q||^l = (1 - lambda/(1+lambda)^2)^l, the per-coordinate norm factor.
inline Rat pair_norm_factor(unsigned long l, const Rat& lambda) {
  return rat_pow(1 - lambda / rat_pow(1 + lambda, 2), static_cast<long>(l));
}

enum class DefectVariant {
  kSameClass0,  // I_0 x I_0 against P_0
  kSameClass1,  // I_1 x I_1 against P_2
  kSameClass2,  // I_2 x I_2 against P_1
  kMixed12,     // I_1 x I_2 against P_0
  kMixed02,     // I_0 x I_2 against P_2
  kMixed01,     // I_0 x I_1 against P_1
};

constexpr std::array<DefectVariant, 6> kAllDefectVariants = {
    DefectVariant::kSameClass0, DefectVariant::kSameClass1,
    DefectVariant::kSameClass2, DefectVariant::kMixed12,
    DefectVariant::kMixed02,    DefectVariant::kMixed01};

struct DefectClasses {
  int a;       // first index class
  int b;       // second index class
  int target;  // residue class of the summed exponents; always (a+b) mod 3
  bool same_class;
};

inline DefectClasses defect_classes(DefectVariant v) {
  switch (v) {
    case DefectVariant::kSameClass0:
      return {0, 0, 0, true};
    case DefectVariant::kSameClass1:
      return {1, 1, 2, true};
    case DefectVariant::kSameClass2:
      return {2, 2, 1, true};
    case DefectVariant::kMixed12:
      return {1, 2, 0, false};
    case DefectVariant::kMixed02:
      return {0, 2, 2, false};
    default:
      return {0, 1, 1, false};
  }
}

inline std::string defect_variant_name(DefectVariant v) {
  const auto c = defect_classes(v);
  return (c.same_class ? std::string("same_") : std::string("mixed_")) +
         std::to_string(c.a) + std::to_string(c.b);
}

/// Streaming Z_3 convolution over a coordinate range. Push blocks in order;
/// at any point the accumulator answers every defect variant and the norm
/// bound for the range pushed so far.
class DefectAccumulator {
 public:
  void push(unsigned long l, const Rat& lambda) {
    const auto g = graded_coefficients(l, lambda).abs_sums;
    std::array<Rat, 3> next = {Rat(0), Rat(0), Rat(0)};
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) next[(r + s) % 3] += sums_[r] * g[s];
    sums_ = std::move(next);
    norm_product_ *= g[0] + g[1] + g[2];
    ++size_;
  }
  void push(const SpecBlock& b) { push(b.l, b.lambda); }

  std::size_t size() const { return size_; }

  /// Graded absolute coefficient sums (G_0, G_1, G_2) of the range product.
  const std::array<Rat, 3>& sums() const { return sums_; }

  /// prod_i (1 - lambda_i/(1+lambda_i)^2)^(l_i); equals G_0 + G_1 + G_2.
  const Rat& norm_product() const { return norm_product_; }

  Rat bound() const { return 2 * norm_product_; }

  /// Empty ranges report 0 by convention.
  Rat value(DefectVariant v) const {
    if (size_ == 0) return Rat(0);
    const auto c = defect_classes(v);
    const Rat& graded = sums_[c.target];
    return c.same_class ? Rat(2 * graded) : graded;
  }

 private:
  std::array<Rat, 3> sums_ = {Rat(1), Rat(0), Rat(0)};
  Rat norm_product_ = 1;
  std::size_t size_ = 0;
};

struct DefectResult {
  Rat value;
  Rat bound;
};

/// Exact defect over an explicit coordinate range (the blocks n+1..m).
inline DefectResult defect(const std::vector<SpecBlock>& range,
                           DefectVariant variant) {
  DefectAccumulator acc;
  for (const auto& b : range) acc.push(b);
  return {acc.value(variant), acc.bound()};
}

inline std::vector<SpecBlock> spec_range(const SequenceSpec& spec,
                                         std::size_t n, std::size_t m) {
  if (m < n || m > spec.depth())
    throw ValidationError("coordinate range out of spec");
  std::vector<SpecBlock> range;
  range.reserve(m - n);
  for (std::size_t i = n + 1; i <= m; ++i) range.push_back(spec.block(i));
  return range;
}

inline DefectResult defect(const SequenceSpec& spec, std::size_t n,
                           std::size_t m, DefectVariant variant) {
  return defect(spec_range(spec, n, m), variant);
}

/// Brute-force pair sums A_{a,b}(pbar) over index tuples j in I_a, k in I_b
/// with j_i + k_i = p_i, plus the full Vandermonde product.
struct ResidueClassTable {
  std::array<std::array<Int, 3>, 3> counts;  // ordered-pair sums
  Int vandermonde;                           // prod C(2 l_i, p_i)

  Int total() const {
    Int t = 0;
    for (const auto& row : counts)
      for (const auto& cell : row) t += cell;
    return t;
  }
};

inline ResidueClassTable class_sums(const std::vector<unsigned long>& ls,
                                    const std::vector<unsigned long>& pbar,
                                    std::size_t guard = 10'000'000) {
  if (ls.size() != pbar.size())
    throw ValidationError("class sums need matching range lengths");
  std::size_t pair_count = 1;
  for (unsigned long l : ls) {
    if (l == 0) throw ValidationError("block sizes must be positive");
    const std::size_t square = (l + 1) * (l + 1);
    if (pair_count > guard / square)
      throw EnumerationTooLarge("class sum enumeration exceeds guard");
    pair_count *= square;
  }
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (pbar[i] > 2 * ls[i])
      throw ValidationError("target exponent exceeds coordinate bound");
  }

  ResidueClassTable table{};
  table.vandermonde = 1;
  for (std::size_t i = 0; i < ls.size(); ++i)
    table.vandermonde *= binomial(2 * ls[i], pbar[i]);

  // Iterate j tuples with j_i <= l_i; k is forced to pbar - j.
  std::vector<unsigned long> j(ls.size(), 0);
  while (true) {
    bool valid = true;
    unsigned long rj = 0, rk = 0;
    Int product = 1;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      if (pbar[i] < j[i] || pbar[i] - j[i] > ls[i]) {
        valid = false;
        break;
      }
      const unsigned long k = pbar[i] - j[i];
      rj = (rj + j[i]) % 3;
      rk = (rk + k) % 3;
      product *= binomial(ls[i], j[i]) * binomial(ls[i], k);
    }
    if (valid) table.counts[rj][rk] += product;

    std::size_t pos = 0;
    while (pos < j.size()) {
      if (j[pos] < ls[pos]) {
        ++j[pos];
        break;
      }
      j[pos] = 0;
      ++pos;
    }
    if (pos == j.size()) break;
  }
  return table;
}

/// The residue-split identity with the pairing read off the defect sums:
/// P_0 uses A_00 + 2 A_12, P_2 uses A_11 + 2 A_02, P_1 uses A_22 + 2 A_01.
inline bool vandermonde_split_check(const std::vector<unsigned long>& ls,
                                    const std::vector<unsigned long>& pbar,
                                    std::size_t guard = 10'000'000) {
  const auto table = class_sums(ls, pbar, guard);
  unsigned long target = 0;
  for (unsigned long p : pbar) target = (target + p) % 3;
  Int lhs;
  switch (target) {
    case 0:
      lhs = table.counts[0][0] + 2 * table.counts[1][2];
      break;
    case 2:
      lhs = table.counts[1][1] + 2 * table.counts[0][2];
      break;
    default:
      lhs = table.counts[2][2] + 2 * table.counts[0][1];
      break;
  }
  return lhs == table.vandermonde;
}

}  // namespace ergoflow

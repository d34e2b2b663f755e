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

#include "ergoflow/residue.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "ergoflow/sparse_poly.hpp"
#include "test_specs.hpp"

namespace ergoflow {
namespace {

using testing::defect_brute_force;

const std::vector<Rat> kTestLambdas = {make_rat(1, 2), make_rat(1, 3),
                                       make_rat(2, 5)};

TEST(ConjugatePair, HandExpansion) {
  const auto coeffs = conjugate_pair_power(1, make_rat(1, 2));
  ASSERT_EQ(coeffs.size(), 3u);
  EXPECT_EQ(coeffs[0], make_rat(4, 9));
  EXPECT_EQ(coeffs[1], make_rat(-2, 9));
  EXPECT_EQ(coeffs[2], make_rat(1, 9));
}

TEST(ConjugatePair, NormAndValueAtOne) {
  for (const Rat& lambda : kTestLambdas) {
    for (unsigned long l = 1; l <= 4; ++l) {
      const auto coeffs = conjugate_pair_power(l, lambda);
      EXPECT_EQ(coeffs.size(), 2 * l + 1);
      Rat norm = 0, at_one = 0;
      for (const Rat& c : coeffs) {
        norm += rat_abs(c);
        at_one += c;
      }
      // Sum of |c| hits the norm bound factor exactly; the signed value at 1
      // is the smaller (1 - 3 lambda/(1+lambda)^2)^l.
      EXPECT_EQ(norm, pair_norm_factor(l, lambda));
      EXPECT_EQ(at_one,
                rat_pow(1 - 3 * lambda / rat_pow(1 + lambda, 2),
                        static_cast<long>(l)));
    }
  }
}

TEST(ConjugatePair, PowerIsConvolutionSquare) {
  const Rat lambda = make_rat(1, 3);
  const auto base = conjugate_pair_power(1, lambda);
  const auto square = conjugate_pair_power(2, lambda);
  for (std::size_t p = 0; p < square.size(); ++p) {
    Rat expect = 0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (p >= i && p - i < base.size()) expect += base[i] * base[p - i];
    }
    EXPECT_EQ(square[p], expect);
  }
}

TEST(GradedCoefficients, HandTriple) {
  const GradedCoefficients g = graded_coefficients(1, make_rat(1, 2));
  EXPECT_EQ(g.abs_sums[0], make_rat(4, 9));
  EXPECT_EQ(g.abs_sums[1], make_rat(2, 9));
  EXPECT_EQ(g.abs_sums[2], make_rat(1, 9));
  EXPECT_EQ(g.signed_sums[0] + g.signed_sums[1] + g.signed_sums[2],
            make_rat(1, 3));
}

TEST(ClassSums, SingleCoordinateTables) {
  {
    const auto t = class_sums({2}, {2});
    EXPECT_EQ(t.counts[0][2], 1);
    EXPECT_EQ(t.counts[1][1], 4);
    EXPECT_EQ(t.counts[2][0], 1);
    EXPECT_EQ(t.total(), 6);
    EXPECT_EQ(t.vandermonde, 6);
  }
  {
    const auto t = class_sums({1}, {0});
    EXPECT_EQ(t.counts[0][0], 1);
    EXPECT_EQ(t.total(), 1);
    EXPECT_EQ(t.vandermonde, 1);
  }
}

TEST(ClassSums, TwoCoordinateTable) {
  const auto t = class_sums({1, 1}, {1, 1});
  EXPECT_EQ(t.total(), 4);
  EXPECT_EQ(t.vandermonde, 4);
  EXPECT_EQ(t.counts[0][2], 1);
  EXPECT_EQ(t.counts[2][0], 1);
  EXPECT_EQ(t.counts[1][1], 2);
}

TEST(ClassSums, SymmetryAndGuard) {
  const auto t = class_sums({2, 3}, {3, 2});
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) EXPECT_EQ(t.counts[a][b], t.counts[b][a]);
  EXPECT_THROW(class_sums({100, 100, 100}, {0, 0, 0}), EnumerationTooLarge);
}

TEST(VandermondeSplit, SpecExamples) {
  EXPECT_TRUE(vandermonde_split_check({1}, {1}));
  EXPECT_TRUE(vandermonde_split_check({2}, {2}));
  EXPECT_TRUE(vandermonde_split_check({1}, {0}));
}

TEST(VandermondeSplit, FullSmallGrid) {
  for (unsigned long l1 = 1; l1 <= 3; ++l1) {
    for (unsigned long l2 = 1; l2 <= 3; ++l2) {
      for (unsigned long p1 = 0; p1 <= 2 * l1; ++p1) {
        for (unsigned long p2 = 0; p2 <= 2 * l2; ++p2) {
          EXPECT_TRUE(vandermonde_split_check({l1, l2}, {p1, p2}))
              << l1 << " " << l2 << " " << p1 << " " << p2;
        }
      }
    }
  }
}

// Identity (3) in full: the conjugate-pair product expands to the signed
// combination of ordered class sums, coefficient by coefficient.
TEST(PairFactorization, MatchesClassSums) {
  const std::vector<SpecBlock> range = {{1, make_rat(1, 2)},
                                        {2, make_rat(1, 3)}};
  SparsePoly product = SparsePoly::constant(range.size(), Rat(1));
  for (std::size_t i = 0; i < range.size(); ++i) {
    const auto coeffs = conjugate_pair_power(range[i].l, range[i].lambda);
    SparsePoly factor(range.size());
    for (std::size_t p = 0; p < coeffs.size(); ++p) {
      std::vector<unsigned long> exps(range.size(), 0);
      exps[i] = p;
      factor.add_term(std::move(exps), coeffs[p]);
    }
    product = product * factor;
  }

  std::vector<unsigned long> ls;
  for (const auto& b : range) ls.push_back(b.l);
  std::vector<unsigned long> pbar(range.size(), 0);
  while (true) {
    const auto t = class_sums(ls, pbar);
    const Int signed_count = t.counts[0][0] + t.counts[1][1] +
                             t.counts[2][2] - t.counts[0][1] -
                             t.counts[0][2] - t.counts[1][2];
    Rat weight = 1;
    for (std::size_t i = 0; i < range.size(); ++i) {
      weight *= rat_pow(range[i].lambda, static_cast<long>(pbar[i])) /
                rat_pow(1 + range[i].lambda,
                        static_cast<long>(2 * range[i].l));
    }
    EXPECT_EQ(product.coeff(pbar), Rat(signed_count) * weight);
    std::size_t pos = 0;
    while (pos < pbar.size() && pbar[pos] == 2 * ls[pos]) pbar[pos++] = 0;
    if (pos == pbar.size()) break;
    ++pbar[pos];
  }
}

TEST(Defect, SingleCoordinateHandValues) {
  const std::vector<SpecBlock> range = {{1, make_rat(1, 2)}};
  EXPECT_EQ(defect(range, DefectVariant::kSameClass0).value, make_rat(8, 9));
  EXPECT_EQ(defect(range, DefectVariant::kMixed01).value, make_rat(2, 9));
  EXPECT_EQ(defect(range, DefectVariant::kSameClass2).value, make_rat(4, 9));
  EXPECT_EQ(defect(range, DefectVariant::kMixed12).value, make_rat(4, 9));
  EXPECT_EQ(defect(range, DefectVariant::kSameClass1).value, make_rat(2, 9));
  EXPECT_EQ(defect(range, DefectVariant::kMixed02).value, make_rat(1, 9));
}

TEST(Defect, EmptyRangeConvention) {
  const DefectResult r = defect({}, DefectVariant::kSameClass0);
  EXPECT_EQ(r.value, Rat(0));
  EXPECT_EQ(r.bound, Rat(2));
}

TEST(Defect, GradedEqualsBruteForceOnGrid) {
  std::vector<std::vector<unsigned long>> shapes;
  for (unsigned long l1 = 1; l1 <= 3; ++l1) {
    shapes.push_back({l1});
    for (unsigned long l2 = 1; l2 <= 3; ++l2) shapes.push_back({l1, l2});
  }
  shapes.push_back({2, 1, 3});
  shapes.push_back({3, 3, 3});

  std::size_t lambda_cursor = 0;
  for (const auto& shape : shapes) {
    std::vector<SpecBlock> range;
    for (unsigned long l : shape)
      range.push_back({l, kTestLambdas[lambda_cursor++ % kTestLambdas.size()]});
    for (DefectVariant variant : kAllDefectVariants) {
      const DefectResult fast = defect(range, variant);
      EXPECT_EQ(fast.value, defect_brute_force(range, variant));
      EXPECT_LE(fast.value, fast.bound);
    }
  }
}

TEST(Defect, BoundIsMonotoneAndRespected) {
  DefectAccumulator acc;
  Rat previous_bound = acc.bound();
  EXPECT_EQ(previous_bound, Rat(2));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 12; ++i) {
    acc.push(1 + rng() % 3, kTestLambdas[rng() % kTestLambdas.size()]);
    EXPECT_LE(acc.bound(), previous_bound);
    previous_bound = acc.bound();
    for (DefectVariant variant : kAllDefectVariants)
      EXPECT_LE(acc.value(variant), acc.bound());
    // The graded sums exhaust the norm product exactly.
    EXPECT_EQ(acc.sums()[0] + acc.sums()[1] + acc.sums()[2],
              acc.norm_product());
  }
}

TEST(Defect, ConstantSpecDecay) {
  DefectAccumulator acc;
  for (int i = 0; i < 22; ++i) acc.push(1, make_rat(1, 2));
  const Rat cap = 2 * rat_pow(make_rat(7, 9), 22);
  EXPECT_EQ(acc.bound(), cap);
  for (DefectVariant variant : kAllDefectVariants)
    EXPECT_LE(acc.value(variant), cap);
  EXPECT_LT(cap, make_rat(1, 100));
}

TEST(SparsePoly, NormSubmultiplicative) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 40; ++round) {
    SparsePoly p(2), q(2);
    for (int t = 0; t < 4; ++t) {
      p.add_term({rng() % 3, rng() % 3},
                 make_rat(static_cast<long>(rng() % 11) - 5,
                          1 + static_cast<long>(rng() % 6)));
      q.add_term({rng() % 3, rng() % 3},
                 make_rat(static_cast<long>(rng() % 11) - 5,
                          1 + static_cast<long>(rng() % 6)));
    }
    EXPECT_LE((p * q).norm(), p.norm() * q.norm());
  }
}

}  // namespace
}  // namespace ergoflow

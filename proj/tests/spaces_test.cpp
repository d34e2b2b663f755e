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

#include "ergoflow/spaces.hpp"

#include <gtest/gtest.h>

#include "ergoflow/sequence_spec.hpp"
#include "test_specs.hpp"

namespace ergoflow {
namespace {

using testing::power_spec;
using testing::toy2;

TEST(SequenceSpec, StructuralInvariants) {
  EXPECT_THROW(SequenceSpec({{2, make_rat(1, 2)}}, ScaledLog{Rat(1), Rat(2)}),
               ValidationError);  // l_1 != 1
  EXPECT_THROW(SequenceSpec({{1, make_rat(1, 2)}, {0, make_rat(1, 4)}},
                            ScaledLog{Rat(1), Rat(2)}),
               ValidationError);
  EXPECT_THROW(SequenceSpec({{1, Rat(1)}}, ScaledLog{Rat(1), Rat(2)}),
               ValidationError);  // lambda = 1
  EXPECT_THROW(SequenceSpec({{1, make_rat(1, 2)}, {2, make_rat(1, 4)}},
                            ScaledLog{Rat(0), Rat(2)}),
               ValidationError);  // eps_0 = 0
  EXPECT_THROW(SequenceSpec({{1, make_rat(1, 2)}, {1, make_rat(1, 4)},
                             {1, make_rat(1, 8)}},
                            ScaledLog{Rat(1), Rat(2)})
                   .block(4),
               ValidationError);
}

TEST(ValidateSpec, Toy2LacunarityAndPartialSums) {
  const SequenceSpec spec = toy2();
  const ValidationReport report = validate_spec(spec, 2);
  ASSERT_EQ(report.rows.size(), 2u);

  // n = 1: log 2 > eps_0 = log 2 fails strictly.
  EXPECT_FALSE(report.rows[0].lacunary);
  EXPECT_EQ(report.rows[0].partial_sum, make_rat(1, 2));

  // n = 2: 5 log 2 - 2 log 2 = 3 log 2 > log 2.
  EXPECT_TRUE(report.rows[1].lacunary);
  EXPECT_EQ(report.rows[1].partial_sum, make_rat(9, 16));
}

TEST(ValidateSpec, RejectsNonDecreasingLambda) {
  const SequenceSpec flat({{1, make_rat(1, 2)}, {1, make_rat(1, 2)}},
                          ScaledLog{Rat(1), Rat(2)});
  EXPECT_THROW(validate_spec(flat, 2), ValidationError);
}

TEST(ValidateSpec, PowerSpecIsFullyLacunary) {
  const SequenceSpec spec = power_spec({1, 2, 2, 3});
  EXPECT_TRUE(validate_spec(spec, 4).all_lacunary());
}

TEST(QuotientMeasure, CoordinateMasses) {
  const SequenceSpec spec = toy2();
  EXPECT_EQ(spec.coordinate_mass(1, 0), make_rat(4, 9));
  EXPECT_EQ(spec.coordinate_mass(1, 1), make_rat(4, 9));
  EXPECT_EQ(spec.coordinate_mass(1, 2), make_rat(1, 9));
  EXPECT_EQ(spec.coordinate_mass(2, 1), make_rat(131072, 1185921));
  EXPECT_THROW(spec.coordinate_mass(2, 5), ValidationError);
}

TEST(QuotientMeasure, MassesSumToOne) {
  for (const SequenceSpec& spec : {toy2(), power_spec({1, 1, 3})}) {
    for (std::size_t n = 1; n <= spec.depth(); ++n) {
      Rat total = 0;
      for (unsigned long i = 0; i <= spec.digit_bound(n); ++i)
        total += spec.coordinate_mass(n, i);
      EXPECT_EQ(total, Rat(1));
    }
  }
}

TEST(CylinderMeasure, Toy2Values) {
  const SequenceSpec spec = toy2();
  EXPECT_EQ(cylinder_measure(spec, {}), Rat(1));
  EXPECT_EQ(cylinder_measure(spec, {1}), make_rat(4, 9));
  EXPECT_EQ(cylinder_measure(spec, {0, 1}),
            make_rat(4, 9) * make_rat(131072, 1185921));
  EXPECT_THROW(cylinder_measure(spec, {3}), ValidationError);
  EXPECT_THROW(cylinder_measure(spec, {0, 0, 0}), ValidationError);
}

TEST(CylinderMeasure, EnumerationOracleForSecondCoordinate) {
  // nu_2(1) over {0,1}^4 with site weights (1, lambda)/(1+lambda).
  const SequenceSpec spec = toy2();
  const Rat lambda = make_rat(1, 32);
  Rat total = 0;
  for (unsigned bits = 0; bits < 16; ++bits) {
    unsigned sum = 0;
    for (unsigned i = 0; i < 4; ++i) sum += (bits >> i) & 1u;
    if (sum == 1) total += rat_pow(lambda, 1) / rat_pow(1 + lambda, 4);
  }
  EXPECT_EQ(total, spec.coordinate_mass(2, 1));
}

TEST(CylinderMeasure, MultiplicativeUnderConcatenation) {
  const SequenceSpec spec = power_spec({1, 2, 2});
  const Digits prefix = {1};
  const Digits full = {1, 3, 0};
  const Rat tail_mass = spec.coordinate_mass(2, 3) * spec.coordinate_mass(3, 0);
  EXPECT_EQ(cylinder_measure(spec, full),
            cylinder_measure(spec, prefix) * tail_mass);
}

TEST(PushforwardCheck, Toy2BothCoordinates) {
  const SequenceSpec spec = toy2();
  EXPECT_TRUE(quotient_pushforward_check(spec, 1));
  EXPECT_TRUE(quotient_pushforward_check(spec, 2));
}

TEST(PushforwardCheck, TwelveSiteCoordinate) {
  const SequenceSpec spec = power_spec({1, 2, 6});
  for (std::size_t n = 1; n <= 3; ++n)
    EXPECT_TRUE(quotient_pushforward_check(spec, n));
}

TEST(PushforwardCheck, GuardRejectsWideCoordinates) {
  std::vector<SpecBlock> blocks = {{1, make_rat(1, 2)}, {20, make_rat(1, 4)}};
  const SequenceSpec spec(std::move(blocks), ScaledLog{Rat(1), Rat(2)});
  EXPECT_THROW(quotient_pushforward_check(spec, 2, 24), EnumerationTooLarge);
}

}  // namespace
}  // namespace ergoflow

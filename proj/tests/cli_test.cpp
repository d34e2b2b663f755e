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

#include "ergoflow/config.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "ergoflow/runner.hpp"

namespace ergoflow {
namespace {

const char* kToy2Config = R"({
  "command": "defects",
  "spec": {
    "kind": "sequence",
    "blocks": [{"l": 1, "lambda": "1/2"}, {"l": 2, "lambda": "1/32"}],
    "epsilon0": {"coeff": "1", "base": "2"},
    "relations": [{"index": 2, "base": "1/2", "exponent": 5}]
  },
  "params": {"n": 0, "m": 2},
  "output": {"dir": "out", "format": "csv"},
  "seed": 7
})";

TEST(ParseConfig, Toy2RoundTrip) {
  const RunConfig config = parse_config(kToy2Config);
  EXPECT_EQ(config.command, "defects");
  ASSERT_TRUE(config.sequence.has_value());
  EXPECT_EQ(config.sequence->depth(), 2u);
  EXPECT_EQ(config.sequence->block(2).lambda, make_rat(1, 32));
  EXPECT_EQ(config.seed, 7u);
  EXPECT_EQ(config.output.format, "csv");
  EXPECT_EQ(config.config_hash.size(), 16u);
}

TEST(ParseConfig, DecimalLambdaIsExact) {
  const RunConfig config = parse_config(R"({
    "spec": {"kind": "sequence", "blocks": [{"l": 1, "lambda": "0.5"}]}
  })");
  EXPECT_EQ(config.sequence->block(1).lambda, make_rat(1, 2));
}

TEST(ParseConfig, RejectsBadInputs) {
  EXPECT_THROW(parse_config("not json"), ParseError);
  EXPECT_THROW(parse_config(R"({"command": "dance"})"), ValidationError);
  // l_1 != 1 violates the spec invariant.
  EXPECT_THROW(parse_config(R"({
    "spec": {"kind": "sequence", "blocks": [{"l": 2, "lambda": "1/2"}]}
  })"),
               ValidationError);
  EXPECT_THROW(parse_config(R"({
    "spec": {"kind": "sequence", "blocks": [{"l": 1, "lambda": "1/2"}]},
    "output": {"format": "xml"}
  })"),
               ValidationError);
  EXPECT_THROW(parse_config(R"({"spec": {"kind": "fancy"}})"), ParseError);
}

TEST(ParseConfig, ConstantFamilyExpansion) {
  const RunConfig config = parse_config(R"({
    "spec": {"kind": "sequence",
             "constant": {"l": 1, "lambda": "1/2", "count": 40}}
  })");
  EXPECT_EQ(config.sequence->depth(), 40u);
}

TEST(RunSuite, IdentitiesDefaultGridPasses) {
  RunConfig config = parse_config(R"({"command": "identities",
                                      "params": {"max_len": 2, "max_l": 2}})");
  const RunResult result = run_suite(config);
  EXPECT_EQ(result.exit_code, 0);
  ASSERT_EQ(result.files.size(), 1u);
  EXPECT_EQ(result.files[0].first, "identities.csv");
  EXPECT_NE(result.files[0].second.find("split_ok"), std::string::npos);
}

TEST(RunSuite, DefectsOnToy2) {
  const RunConfig config = parse_config(kToy2Config);
  const RunResult result = run_suite(config);
  EXPECT_EQ(result.exit_code, 0);
  ASSERT_EQ(result.files.size(), 1u);
  // 2 depths x 6 variants plus header.
  const std::string& csv = result.files[0].second;
  EXPECT_EQ(static_cast<int>(std::count(csv.begin(), csv.end(), '\n')), 13);
}

TEST(RunSuite, ImpossibleRangeExitsTwo) {
  RunConfig config = parse_config(kToy2Config);
  config.params["n"] = 2;
  config.params["m"] = 1;
  const RunResult result = run_suite(config);
  EXPECT_EQ(result.exit_code, 2);
}

TEST(RunSuite, MissingSpecExitsTwo) {
  RunConfig config = parse_config(R"({"command": "defects"})");
  EXPECT_EQ(run_suite(config).exit_code, 2);
}

TEST(RunSuite, FaultInjectedConfigsExitTwo) {
  RunConfig certify = parse_config(kToy2Config);
  certify.command = "certify";
  certify.params = Json::object();  // neither a nor epsilon given
  EXPECT_EQ(run_suite(certify).exit_code, 2);

  RunConfig negative = parse_config(kToy2Config);
  negative.params["m"] = -3;
  EXPECT_EQ(run_suite(negative).exit_code, 2);

  RunConfig bad_depth = parse_config(kToy2Config);
  bad_depth.command = "flow";
  bad_depth.params = Json::object();
  bad_depth.params["depth"] = 9;  // beyond the two provided blocks
  EXPECT_EQ(run_suite(bad_depth).exit_code, 2);

  RunConfig bad_type = parse_config(kToy2Config);
  bad_type.params["m"] = "soon";
  EXPECT_EQ(run_suite(bad_type).exit_code, 2);
}

TEST(RunSuite, DefectsDecayTableOnConstantSpec) {
  RunConfig config = parse_config(R"({
    "command": "defects",
    "spec": {"kind": "sequence",
             "constant": {"l": 1, "lambda": "1/2", "count": 30}},
    "params": {"n": 0, "m": 30}
  })");
  const RunResult result = run_suite(config);
  EXPECT_EQ(result.exit_code, 0);
  const std::string& csv = result.files[0].second;
  // Spot-check the exact range-1 rows.
  EXPECT_NE(csv.find("1,same_00,8/9,"), std::string::npos);
  EXPECT_NE(csv.find("1,mixed_01,2/9,"), std::string::npos);
  // No bound violations anywhere in the table.
  EXPECT_EQ(csv.find(",0\n"), std::string::npos);
}

TEST(RunSuite, CertificateCarriesHashAndPasses) {
  RunConfig config = parse_config(kToy2Config);
  config.command = "certify";
  config.params = Json::object();
  config.params["a"] = Json::array({2});
  config.params["m"] = 2;
  const RunResult result = run_suite(config);
  EXPECT_EQ(result.exit_code, 0);
  ASSERT_EQ(result.files.size(), 1u);
  EXPECT_EQ(result.files[0].first, "certificate.json");
  const Json cert = Json::parse(result.files[0].second);
  EXPECT_EQ(cert["config_hash"], config.config_hash);
  EXPECT_EQ(cert["error"]["num"], "1120321");
  EXPECT_EQ(cert["error"]["den"], "10673289");
  EXPECT_TRUE(cert["pass"].get<bool>());
}

TEST(RunSuite, FlowOrbitMatchesFirstReturnTable) {
  RunConfig config = parse_config(kToy2Config);
  config.command = "flow";
  config.params = Json::object();
  config.params["depth"] = 2;
  config.params["residue"] = 0;
  const RunResult result = run_suite(config);
  EXPECT_EQ(result.exit_code, 0);
  const std::string& csv = result.files[0].second;
  EXPECT_NE(csv.find("0,0-0,0,"), std::string::npos);
  EXPECT_NE(csv.find("1,2-1,"), std::string::npos);
  // xi((2,1)) = 7 log 2 with RN 32 back to (0,0).
  EXPECT_NE(csv.find("7*log(2)"), std::string::npos);
  EXPECT_NE(csv.find(",32,1"), std::string::npos);
}

TEST(RunSuite, DeterministicBytes) {
  for (const char* command : {"defects", "flow"}) {
    RunConfig config = parse_config(kToy2Config);
    config.command = command;
    const RunResult first = run_suite(config);
    const RunResult second = run_suite(config);
    EXPECT_EQ(first.files, second.files);
    EXPECT_EQ(first.summary, second.summary);
  }
}

TEST(RunSuite, RecurrenceAndOdometer) {
  RunConfig config = parse_config(R"({
    "spec": {"kind": "odometer", "lambda": 2, "k": 2},
    "params": {"samples": 100, "N": 20, "depth": 2, "nmax": 2},
    "seed": 11
  })");
  config.command = "odometer";
  EXPECT_EQ(run_suite(config).exit_code, 0);
  config.command = "recurrence";
  const RunResult rec = run_suite(config);
  EXPECT_EQ(rec.exit_code, 0);
  ASSERT_EQ(rec.files.size(), 2u);
  const Json summary = Json::parse(rec.files[1].second);
  EXPECT_EQ(summary["samples"].get<int>(), 100);
}

}  // namespace
}  // namespace ergoflow

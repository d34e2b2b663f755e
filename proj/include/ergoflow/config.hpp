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

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "ergoflow/errors.hpp"
#include "ergoflow/odometer.hpp"
#include "ergoflow/rational.hpp"
#include "ergoflow/report.hpp"
#include "ergoflow/sequence_spec.hpp"

namespace ergoflow {

inline const std::set<std::string>& known_commands() {
  static const std::set<std::string> commands = {
      "identities", "defects", "certify", "flow", "odometer", "recurrence"};
  return commands;
}

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";
};

/// One parsed run: a command, at most one spec section, free-form parameters
/// and output settings. The hash of the raw config text rides along so every
/// emitted certificate can name its inputs.
struct RunConfig {
  std::string command;
  std::optional<SequenceSpec> sequence;
  std::optional<OdometerSpec> odometer;
  Json params = Json::object();
  OutputConfig output;
  std::uint64_t seed = 0;
  std::string config_hash;
};

namespace detail {

inline Rat json_rat(const Json& value, const char* what) {
  try {
    if (value.is_string()) return rat_from_string(value.get<std::string>());
    if (value.is_number_integer()) return Rat(value.get<long>());
  } catch (const ParseError& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
  throw ParseError(std::string(what) + ": expected a rational literal");
}

inline SequenceSpec parse_sequence_spec(const Json& spec) {
  std::vector<SpecBlock> blocks;
  if (spec.contains("blocks")) {
    if (!spec["blocks"].is_array())
      throw ParseError("spec.blocks must be an array");
    for (const auto& b : spec["blocks"]) {
      if (!b.contains("l") || !b.contains("lambda"))
        throw ParseError("each block needs fields l and lambda");
      blocks.push_back({b["l"].get<unsigned long>(),
                        json_rat(b["lambda"], "block lambda")});
    }
  }
  if (spec.contains("constant")) {
    const auto& c = spec["constant"];
    if (!c.contains("l") || !c.contains("lambda") || !c.contains("count"))
      throw ParseError("spec.constant needs l, lambda and count");
    const unsigned long l = c["l"].get<unsigned long>();
    const Rat lambda = json_rat(c["lambda"], "constant lambda");
    const std::size_t count = c["count"].get<std::size_t>();
    for (std::size_t i = 0; i < count; ++i) blocks.push_back({l, lambda});
  }

  ScaledLog epsilon0{Rat(1), Rat(2)};
  if (spec.contains("epsilon0")) {
    const auto& e = spec["epsilon0"];
    if (!e.contains("coeff") || !e.contains("base"))
      throw ParseError("spec.epsilon0 needs coeff and base");
    epsilon0 = {json_rat(e["coeff"], "epsilon0 coeff"),
                json_rat(e["base"], "epsilon0 base")};
  }

  MultiplicativeRelations relations;
  if (spec.contains("relations")) {
    for (const auto& r : spec["relations"]) {
      if (!r.contains("index") || !r.contains("base") ||
          !r.contains("exponent"))
        throw ParseError("each relation needs index, base and exponent");
      const std::size_t index = r["index"].get<std::size_t>();
      if (index == 0 || index > blocks.size())
        throw ValidationError("relation index out of range");
      relations.declare(blocks[index - 1].lambda,
                        json_rat(r["base"], "relation base"),
                        r["exponent"].get<unsigned long>());
    }
  }
  return SequenceSpec(std::move(blocks), std::move(epsilon0),
                      std::move(relations));
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config root must be an object");

  RunConfig config;
  config.config_hash = fnv1a64_hex(text);

  try {
    if (doc.contains("command")) {
      config.command = doc["command"].get<std::string>();
      if (!known_commands().count(config.command))
        throw ValidationError("unknown command: " + config.command);
    }

    if (doc.contains("spec")) {
      const auto& spec = doc["spec"];
      if (!spec.contains("kind")) throw ParseError("spec.kind is required");
      const std::string kind = spec["kind"].get<std::string>();
      if (kind == "sequence") {
        config.sequence = detail::parse_sequence_spec(spec);
      } else if (kind == "odometer") {
        if (!spec.contains("lambda") || !spec.contains("k"))
          throw ParseError("odometer spec needs lambda and k");
        config.odometer = OdometerSpec(spec["lambda"].get<unsigned long>(),
                                       spec["k"].get<unsigned long>());
      } else {
        throw ParseError("spec.kind must be sequence or odometer");
      }
    }

    if (doc.contains("params")) {
      if (!doc["params"].is_object())
        throw ParseError("params must be an object");
      config.params = doc["params"];
    }
    if (doc.contains("output")) {
      const auto& out = doc["output"];
      if (out.contains("dir")) config.output.dir = out["dir"].get<std::string>();
      if (out.contains("format")) {
        config.output.format = out["format"].get<std::string>();
        if (config.output.format != "csv" && config.output.format != "json")
          throw ValidationError("output.format must be csv or json");
      }
    }
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed config field: ") + e.what());
  }
  return config;
}

}  // namespace ergoflow

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

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ergoflow/config.hpp"
#include "ergoflow/runner.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long long max_depth = 0;
};

int run_command(const std::string& command, const CliOptions& options) {
  std::ifstream in(options.config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file " << options.config_path
              << "\n";
    return 2;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();

  ergoflow::RunConfig config;
  try {
    config = ergoflow::parse_config(buffer.str());
  } catch (const ergoflow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!config.command.empty() && config.command != command) {
    std::cerr << "error: config names command '" << config.command
              << "' but '" << command << "' was invoked\n";
    return 2;
  }
  config.command = command;
  if (!options.out_dir.empty()) config.output.dir = options.out_dir;
  if (!options.format.empty()) config.output.format = options.format;
  if (options.seed_set) config.seed = options.seed;
  if (options.max_depth > 0) config.params["max_depth"] = options.max_depth;

  const ergoflow::RunResult result = ergoflow::run_suite(config);
  if (result.exit_code == 2) {
    std::cerr << result.summary;
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(config.output.dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << config.output.dir
              << "\n";
    return 2;
  }
  for (const auto& [name, contents] : result.files) {
    const auto path = std::filesystem::path(config.output.dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << path.string() << "\n";
      return 2;
    }
    out << contents;
  }
  std::cout << result.summary;
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact verification lab for lacunary product flows and adic odometers"};
  app.require_subcommand(1);

  CliOptions options;
  std::string command;
  for (const std::string name : {"identities", "defects", "certify", "flow",
                                 "odometer", "recurrence"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", options.config_path, "configuration file")
        ->required();
    sub->add_option("--out", options.out_dir, "output directory override");
    sub->add_option("--format", options.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&options](const std::uint64_t& v) {
          options.seed = v;
          options.seed_set = true;
        },
        "random seed override");
    sub->add_option("--max-depth", options.max_depth,
                    "depth cap for certification");
    sub->callback([&command, name] { command = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run_command(command, options);
}

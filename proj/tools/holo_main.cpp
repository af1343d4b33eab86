// Copyright 2026 The holonomy Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <iostream>

#include "holo/error.hpp"
#include "holo/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Holonomy experiments from scenario files"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool parallel = false;

  CLI::App* run = app.add_subcommand("run", "Run a scenario");
  run->add_option("config", config_path, "Scenario file (JSON)")->required();
  CLI::Option* out_opt = run->add_option("--out", out_dir, "Output directory (overrides the scenario)");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Seed for generated loops (overrides the scenario)");
  run->add_flag("--parallel", parallel, "Run sweep cells and compiler expansion concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : holo::kExitConfig;
  }

  try {
    const holo::ScenarioConfig config = holo::load_scenario(config_path);
    holo::RunOptions options;
    if (*out_opt) options.out_dir = out_dir;
    if (*seed_opt) options.seed = seed;
    options.parallel = parallel;
    const holo::RunResult result = holo::run_scenario(config, options, std::cerr);
    std::cout << result.summary;
    return result.exit_code;
  } catch (const holo::Error& e) {
    std::cerr << "holo: " << e.what() << "\n";
    switch (e.kind()) {
      case holo::ErrorKind::config: return holo::kExitConfig;
      case holo::ErrorKind::budget: return holo::kExitBudget;
      default: return holo::kExitModel;
    }
  }
}

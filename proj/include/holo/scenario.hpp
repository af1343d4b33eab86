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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "holo/linalg.hpp"
#include "holo/models.hpp"

namespace holo {

enum class ModelKind { spin, cp, bosonic };

struct ModelConfig {
  ModelKind kind = ModelKind::cp;
  double field = 1.0;  // spin
  CPModel cp;
  BosonicModel bosonic;
};

struct LoopConfig {
  enum class Kind { nodes, generic, trigonometric, equator };
  std::string id;
  Kind kind = Kind::nodes;
  std::optional<ControlPoint> base;
  std::vector<ControlPoint> nodes;
  int generic_index = 1;   // which of the two generic loops
  std::uint64_t seed = 0;  // trigonometric
  double amplitude = 0.6;
  int harmonics = 3;
};

struct ExperimentConfig {
  std::string id;  // group_laws | curvature_span | holonomy | adiabatic_sweep | compile | truncation
  std::vector<std::string> loops;
  std::optional<int> level;
  int steps = 4096;  // K
  double h = 0.0;    // 0 = default step
  std::vector<double> times;
  std::string ramp = "identity";
  std::string integrator = "magnus4";
  int integrator_steps = 0;  // 0 = default
  Matrix target;
  double epsilon = 1e-9;
  int max_length = 8;
  double net_radius = 0.05;
  std::size_t max_nodes = 4'000'000;
  std::vector<int> truncations;
  std::string quantity = "curvature_origin";
  std::map<std::string, double> expect;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ModelConfig model;
  std::uint64_t seed = 42;
  std::vector<LoopConfig> loops;
  std::vector<ExperimentConfig> experiments;
  std::filesystem::path out_dir = "out";
};

/// Parses and validates a scenario. Every problem is reported as a config
/// error naming the line (syntax) or the field path (content).
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  bool parallel = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitModel = 4;

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> failures;  // failed expectations
  std::string summary;
};

/// Runs every experiment in order and writes summary.txt, matrices.json and,
/// when applicable, sweep.csv and compile.json into the output directory.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options, std::ostream& log);

}  // namespace holo

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

#include <filesystem>
#include <string>
#include <vector>

#include "holo/connection.hpp"
#include "holo/holonomy.hpp"
#include "holo/linalg.hpp"

namespace holo {

/// %.17g; round-trips every double.
std::string format_double(double value);

/// Row-major [[[re, im], ...], ...]; non-finite entries become null.
std::string matrix_json(const Matrix& m);

std::string holonomy_json(const Holonomy& holonomy);
std::string curvature_json(const CurvatureTensor& curvature);

struct SweepRow {
  std::string model;
  std::string loop_id;
  double total_time = 0.0;
  int integrator_steps = 0;
  int holonomy_steps = 0;
  double residual = 0.0;
  double leakage = 0.0;
  double ratio = 0.0;
};

inline constexpr const char* kSweepHeader = "model,loop_id,T,M,K,residual,leakage,ratio";

/// Header plus one LF-terminated row per cell. Throws invalid-input when empty.
std::string convergence_csv(const std::vector<SweepRow>& rows);

/// Writes convergence_csv to `path`; throws config when the file cannot be written.
void emit_convergence_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Writes `content` to `path` in binary mode; throws config on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace holo

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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "holo/error.hpp"
#include "holo/holonomy.hpp"
#include "holo/loops.hpp"
#include "holo/spectral.hpp"

namespace holo {

/// Frobenius distance, or its minimum over a global phase,
/// sqrt(2n - 2 |tr U†V|). Throws non-unitary when either defect exceeds 1e-6.
double gate_distance(const Matrix& u, const Matrix& v, bool phase_invariant = true);

struct GateTarget {
  Matrix unitary;
  double tolerance = 1e-9;
  bool phase_invariant = true;
};

struct CompileOptions {
  int max_length = 8;
  double net_radius = 0.05;       // phase-invariant pruning radius
  std::size_t max_nodes = 4'000'000;
  bool parallel = false;          // expand frontier chunks on worker threads
};

struct TracePoint {
  int length = 0;
  double distance = 0.0;  // best over all words up to `length`
};

struct CompilerResult {
  LoopWord word;
  Matrix unitary;
  double distance = 0.0;
  std::size_t explored = 0;
  std::vector<TracePoint> trace;
  bool converged = false;  // distance <= tolerance
};

/// Budget error carrying the best word found before the cap.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string message, CompilerResult best)
      : Error(ErrorKind::budget, std::move(message)), best_(std::move(best)) {}
  const CompilerResult& best() const { return best_; }

 private:
  CompilerResult best_;
};

/// Breadth-first search over words in {U1, U1^-1, U2, U2^-1} with an
/// epsilon-net prune. Deterministic for fixed inputs, with or without
/// `parallel`.
CompilerResult compile(const GateTarget& target, const Matrix& first, const Matrix& second,
                       const CompileOptions& options = {});

struct GenericLoops {
  Loop first;
  Loop second;
  Matrix first_holonomy;
  Matrix second_holonomy;
  double commutator_norm = 0.0;
  int attempts = 0;
};

struct GenericLoopOptions {
  double amplitude = 0.6;
  int harmonics = 3;
  int steps = 4096;
  double min_commutator = 0.01;
  int max_attempts = 10;
};

/// Two seeded trigonometric-polynomial loops at `base` whose code holonomies
/// fail to commute by more than min_commutator (spectral norm). Throws
/// genericity-failure for one-dimensional codes or after max_attempts.
GenericLoops generate_generic_loops(const HamiltonianFamily& family, int level, const ControlPoint& base,
                                    std::uint64_t seed, const GenericLoopOptions& options = {});

/// Loop of the above shape for a given seed; exposed for reproduction.
Loop random_trigonometric_loop(const ControlPoint& base, std::uint64_t seed, double amplitude, int harmonics);

}  // namespace holo

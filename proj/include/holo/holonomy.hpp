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

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "holo/connection.hpp"
#include "holo/loops.hpp"
#include "holo/spectral.hpp"

namespace holo {

inline constexpr int kDefaultSteps = 1024;

enum class HolonomyMethod {
  frame_transport,
  projector_product,
  connection_exponential,
};

std::string_view to_string(HolonomyMethod method);

/// Unitary acquired by the level-l eigenspace around a loop, written in the
/// coordinates of `start` (a frame at the base point). Later path segments act
/// on the left, so hol(compose(g1, g2)) = hol(g2) * hol(g1).
struct Holonomy {
  Matrix unitary;
  int level = 0;
  std::string loop_id;
  int steps = 0;
  HolonomyMethod method = HolonomyMethod::frame_transport;
  double defect = 0.0;  // unitarity defect before the polar correction
  Frame start;

  /// start U start†: the holonomy as an operator on the full space.
  Matrix embedded() const { return start.columns * unitary * start.columns.adjoint(); }
};

/// Sequential discrete parallel transport of the starting frame through the
/// K + 1 samples; the holonomy is the closing overlap start† F_K.
Holonomy holonomy_frame(const HamiltonianFamily& family, const Loop& loop, int level, int steps = kDefaultSteps,
                        const std::optional<Frame>& start = std::nullopt);

/// Polar factor of start† Pi(lambda_K) ... Pi(lambda_1) start.
Holonomy holonomy_projector(const HamiltonianFamily& family, const Loop& loop, int level,
                            int steps = kDefaultSteps, const std::optional<Frame>& start = std::nullopt);

/// Ordered product of midpoint propagators exp(-sum_mu A_mu dlambda^mu) in the
/// family's gauge chart. Requires a chart.
Holonomy holonomy_connection(const HamiltonianFamily& family, const Loop& loop, int level,
                             int steps = kDefaultSteps, const std::optional<Frame>& start = std::nullopt);

Holonomy compute_holonomy(const HamiltonianFamily& family, const Loop& loop, int level, int steps,
                          HolonomyMethod method, const std::optional<Frame>& start = std::nullopt);

/// lambda -> (A_1, ..., A_d) in some fixed gauge.
using ConnectionField = std::function<std::vector<Matrix>(const ControlPoint&)>;

/// Path-ordered exponential of a connection field along a loop, midpoint rule,
/// later segments on the left.
Matrix path_ordered_exponential(const ConnectionField& connection, const Loop& loop, int steps);

/// Ordered product of letter unitaries, later letters on the left.
Matrix word_product(const LoopWord& word, const Matrix& first, const Matrix& second);

enum class WordRoute {
  composite_loop,  // word_to_loop, then one holonomy with steps * |word| samples
  letter_product,  // one holonomy per generator, multiplied in word order
};

/// Holonomy of a loop word; `steps` is the resolution per letter on both routes.
Holonomy holonomy_of_word(const LoopWord& word, const Loop& first, const Loop& second,
                          const HamiltonianFamily& family, int level, int steps,
                          WordRoute route = WordRoute::letter_product,
                          HolonomyMethod method = HolonomyMethod::frame_transport);

}  // namespace holo

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

#include <optional>
#include <vector>

#include "holo/linalg.hpp"
#include "holo/spectral.hpp"

namespace holo {

/// Orthonormal basis of the level-l eigenspace at a control point. Unique only
/// up to a right U(n_l) action (the gauge freedom).
struct Frame {
  ControlPoint point;
  int level = 0;
  Matrix columns;  // N x n_l
};

/// Components A_mu = Psi† d_mu Psi, one anti-Hermitian n_l x n_l matrix per
/// control direction.
struct ConnectionSample {
  ControlPoint point;
  int level = 0;
  std::vector<Matrix> components;
};

/// F_{mu nu} = d_nu A_mu - d_mu A_nu - [A_mu, A_nu], stored densely and
/// antisymmetric by construction.
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  CurvatureTensor(ControlPoint point, int level, int block_size, int directions);

  const Matrix& operator()(int mu, int nu) const { return components_[index(mu, nu)]; }
  /// Sets F_{mu nu} and F_{nu mu} = -F_{mu nu}. Requires mu != nu.
  void set(int mu, int nu, const Matrix& value);

  const ControlPoint& point() const { return point_; }
  int level() const { return level_; }
  int block_size() const { return block_size_; }
  int directions() const { return directions_; }
  /// The d(d-1)/2 components with mu < nu.
  std::vector<Matrix> independent_components() const;

 private:
  std::size_t index(int mu, int nu) const {
    return static_cast<std::size_t>(mu) * static_cast<std::size_t>(directions_) + static_cast<std::size_t>(nu);
  }

  ControlPoint point_;
  int level_ = 0;
  int block_size_ = 0;
  int directions_ = 0;
  std::vector<Matrix> components_;
};

enum class Evaluation {
  automatic,  // analytic when the family carries a gauge chart
  numerical,
  analytic,
};

/// 1e-4 * (1 + |lambda|).
double default_step(const ControlPoint& point);

Frame frame_at(const HamiltonianFamily& family, const ControlPoint& point, int level);

/// Projects the frame onto the level-l eigenspace at `next` and restores
/// orthonormality with the polar factor. Throws transport-breakdown when the
/// projection loses rank.
Frame transport_frame(const HamiltonianFamily& family, const Frame& frame, const ControlPoint& next);

/// Connection at a point. The numerical route differentiates the frame field
/// lambda' -> transport(reference, lambda') by central differences; the
/// analytic route uses the family's gauge chart. A reference frame, if given,
/// rotates the result into its gauge by a constant g.
ConnectionSample connection_at(const HamiltonianFamily& family, const ControlPoint& point, int level,
                               double step = 0.0, Evaluation route = Evaluation::automatic,
                               const std::optional<Frame>& reference = std::nullopt);

CurvatureTensor curvature_at(const HamiltonianFamily& family, const ControlPoint& point, int level,
                             double step = 0.0, Evaluation route = Evaluation::automatic,
                             const std::optional<Frame>& reference = std::nullopt);

struct SpanResult {
  int dimension = 0;
  bool irreducible = false;  // dimension == n^2
};

/// Real-linear span of anti-Hermitian n x n matrices inside u(n).
SpanResult span_dimension(const std::vector<Matrix>& generators, int block_size, double threshold = 1e-8);

SpanResult irreducibility_dimension(const CurvatureTensor& curvature, double threshold = 1e-8);

}  // namespace holo

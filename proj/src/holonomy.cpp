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

#include "holo/holonomy.hpp"

#include "holo/error.hpp"

namespace holo {
namespace {

constexpr double kResolutionFloor = 1e-6;

Frame starting_frame(const HamiltonianFamily& family, const Loop& loop, int level,
                     const std::optional<Frame>& start) {
  if (loop.dimension() != family.control_dimension())
    throw Error(ErrorKind::invalid_input, "loop and family control dimensions differ");
  if (!start) return frame_at(family, loop.base(), level);
  if (start->level != level) throw Error(ErrorKind::invalid_input, "starting frame belongs to another level");
  return *start;
}

Holonomy finish(Matrix raw, const Frame& start, const Loop& loop, int steps, HolonomyMethod method) {
  Holonomy out;
  out.defect = unitarity_defect(raw);
  out.unitary = polar_unitary(raw);
  out.level = start.level;
  out.loop_id = loop.name();
  out.steps = steps;
  out.method = method;
  out.start = start;
  return out;
}

}  // namespace

std::string_view to_string(HolonomyMethod method) {
  switch (method) {
    case HolonomyMethod::frame_transport: return "frame-transport";
    case HolonomyMethod::projector_product: return "projector-product";
    case HolonomyMethod::connection_exponential: return "connection-exponential";
  }
  return "unknown";
}

Holonomy holonomy_frame(const HamiltonianFamily& family, const Loop& loop, int level, int steps,
                        const std::optional<Frame>& start) {
  const Frame origin = starting_frame(family, loop, level, start);
  const std::vector<ControlPoint> points = sample(loop, steps);
  Frame frame = origin;
  for (std::size_t k = 1; k < points.size(); ++k) frame = transport_frame(family, frame, points[k]);
  return finish(origin.columns.adjoint() * frame.columns, origin, loop, steps, HolonomyMethod::frame_transport);
}

Holonomy holonomy_projector(const HamiltonianFamily& family, const Loop& loop, int level, int steps,
                            const std::optional<Frame>& start) {
  const Frame origin = starting_frame(family, loop, level, start);
  const std::vector<ControlPoint> points = sample(loop, steps);
  Matrix carried = origin.columns;
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k] == points[k - 1]) continue;  // Pi is idempotent
    carried = family.decompose_at(points[k]).projectors[static_cast<std::size_t>(level)] * carried;
  }
  const Matrix overlap = origin.columns.adjoint() * carried;
  double smallest = 0.0;
  polar_unitary(overlap, &smallest);
  if (smallest < kResolutionFloor)
    throw Error(ErrorKind::resolution, "projector product is singular; increase the number of steps");
  return finish(overlap, origin, loop, steps, HolonomyMethod::projector_product);
}

Matrix path_ordered_exponential(const ConnectionField& connection, const Loop& loop, int steps) {
  if (!connection) throw Error(ErrorKind::invalid_input, "no connection field");
  const std::vector<ControlPoint> points = sample(loop, steps);
  Matrix product;
  for (int k = 0; k < steps; ++k) {
    const ControlPoint delta = points[static_cast<std::size_t>(k) + 1] - points[static_cast<std::size_t>(k)];
    const std::vector<Matrix> a = connection(loop((k + 0.5) / steps));
    if (static_cast<Eigen::Index>(a.size()) != delta.size())
      throw Error(ErrorKind::invalid_input, "connection field has the wrong number of components");
    Matrix generator = Matrix::Zero(a.front().rows(), a.front().cols());
    for (std::size_t mu = 0; mu < a.size(); ++mu) generator -= a[mu] * delta(static_cast<Eigen::Index>(mu));
    const Matrix step = expm_skew(antihermitian_part(generator));
    product = k == 0 ? step : Matrix(step * product);
  }
  return product;
}

Holonomy holonomy_connection(const HamiltonianFamily& family, const Loop& loop, int level, int steps,
                             const std::optional<Frame>& start) {
  if (!family.has_gauge() || !family.gauge().frame_derivatives)
    throw Error(ErrorKind::invalid_input, "connection-exponential holonomy needs a gauge chart");
  const Frame origin = starting_frame(family, loop, level, start);
  ConnectionField field = [&family, level](const ControlPoint& point) {
    return connection_at(family, point, level, 0.0, Evaluation::analytic).components;
  };
  Matrix chart_holonomy = path_ordered_exponential(field, loop, steps);
  // Rotate from the chart frame at the base point into the starting frame.
  const Matrix g = family.gauge().frame(loop.base(), level).adjoint() * origin.columns;
  return finish(g.adjoint() * chart_holonomy * g, origin, loop, steps, HolonomyMethod::connection_exponential);
}

Holonomy compute_holonomy(const HamiltonianFamily& family, const Loop& loop, int level, int steps,
                          HolonomyMethod method, const std::optional<Frame>& start) {
  switch (method) {
    case HolonomyMethod::frame_transport: return holonomy_frame(family, loop, level, steps, start);
    case HolonomyMethod::projector_product: return holonomy_projector(family, loop, level, steps, start);
    case HolonomyMethod::connection_exponential: return holonomy_connection(family, loop, level, steps, start);
  }
  throw Error(ErrorKind::invalid_input, "unknown holonomy method");
}

Matrix word_product(const LoopWord& word, const Matrix& first, const Matrix& second) {
  if (first.rows() != second.rows() || first.rows() != first.cols() || second.rows() != second.cols())
    throw Error(ErrorKind::invalid_input, "letter unitaries must be square and of equal size");
  Matrix product = Matrix::Identity(first.rows(), first.cols());
  for (const Letter& letter : word) {
    if (letter.loop != 1 && letter.loop != 2) throw Error(ErrorKind::invalid_input, "letter loop must be 1 or 2");
    const Matrix& u = letter.loop == 1 ? first : second;
    if (letter.exponent == 1) {
      product = u * product;
    } else if (letter.exponent == -1) {
      product = u.adjoint() * product;
    } else {
      throw Error(ErrorKind::invalid_input, "letter exponent must be +1 or -1");
    }
  }
  return product;
}

Holonomy holonomy_of_word(const LoopWord& word, const Loop& first, const Loop& second,
                          const HamiltonianFamily& family, int level, int steps, WordRoute route,
                          HolonomyMethod method) {
  const double tol = std::max(first.closure_tolerance(), second.closure_tolerance());
  if (first.dimension() != second.dimension() || (first.base() - second.base()).norm() > tol)
    throw Error(ErrorKind::invalid_composition, "generator loops do not share a base point");
  const Frame origin = starting_frame(family, first, level, std::nullopt);
  if (route == WordRoute::composite_loop) {
    const Loop composite = word_to_loop(word, first, second).named(to_string(word));
    const int total = word.empty() ? steps : steps * static_cast<int>(word.size());
    return compute_holonomy(family, composite, level, total, method, origin);
  }
  // Letters whose generator never occurs are not integrated.
  Matrix u1 = Matrix::Identity(origin.columns.cols(), origin.columns.cols());
  Matrix u2 = u1;
  double defect = 0.0;
  bool uses_first = false;
  bool uses_second = false;
  for (const Letter& l : word) (l.loop == 1 ? uses_first : uses_second) = true;
  if (uses_first) {
    const Holonomy h = compute_holonomy(family, first, level, steps, method, origin);
    u1 = h.unitary;
    defect = std::max(defect, h.defect);
  }
  if (uses_second) {
    const Holonomy h = compute_holonomy(family, second, level, steps, method, origin);
    u2 = h.unitary;
    defect = std::max(defect, h.defect);
  }
  Holonomy out;
  out.unitary = word_product(word, u1, u2);
  out.level = level;
  out.loop_id = to_string(word);
  out.steps = steps;
  out.method = method;
  out.defect = defect;
  out.start = origin;
  return out;
}

}  // namespace holo

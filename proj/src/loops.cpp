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

#include "holo/loops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

void require_finite(const ControlPoint& point, const char* what) {
  if (point.size() < 1) throw Error(ErrorKind::invalid_input, std::string(what) + " has no coordinates");
  if (!point.allFinite()) throw Error(ErrorKind::invalid_input, std::string(what) + " has non-finite coordinates");
}

Loop::Loop(ControlPoint base, std::shared_ptr<const Path> path, double closure_tol,
           std::vector<ControlPoint> nodes)
    : base_(std::move(base)), path_(std::move(path)), closure_tol_(closure_tol), nodes_(std::move(nodes)) {}

Loop Loop::analytic(ControlPoint base, Path path, double closure_tol) {
  require_finite(base, "loop base");
  if (!path) throw Error(ErrorKind::invalid_input, "empty path callable");
  if (!(closure_tol >= 0.0)) throw Error(ErrorKind::invalid_input, "closure tolerance must be non-negative");
  Loop loop(std::move(base), std::make_shared<const Path>(std::move(path)), closure_tol, {});
  loop.check_closure();
  return loop;
}

Loop Loop::from_nodes(std::vector<ControlPoint> nodes, double closure_tol) {
  if (nodes.empty()) throw Error(ErrorKind::invalid_input, "node list is empty");
  ControlPoint base = nodes.front();
  return from_nodes(std::move(base), std::move(nodes), closure_tol);
}

Loop Loop::from_nodes(ControlPoint base, std::vector<ControlPoint> nodes, double closure_tol) {
  require_finite(base, "loop base");
  if (nodes.size() < 2) throw Error(ErrorKind::invalid_input, "node list needs at least 2 nodes");
  for (const auto& node : nodes) {
    require_finite(node, "loop node");
    if (node.size() != base.size()) throw Error(ErrorKind::invalid_input, "node dimension differs from base");
  }
  auto shared = std::make_shared<const std::vector<ControlPoint>>(nodes);
  Path path = [shared](double t) -> ControlPoint {
    const auto& pts = *shared;
    const double s = t * static_cast<double>(pts.size() - 1);
    const auto last = static_cast<double>(pts.size() - 2);
    const double segment = std::clamp(std::floor(s), 0.0, last);
    const double frac = s - segment;
    const auto i = static_cast<std::size_t>(segment);
    return (1.0 - frac) * pts[i] + frac * pts[i + 1];
  };
  Loop loop(std::move(base), std::make_shared<const Path>(std::move(path)), closure_tol, std::move(nodes));
  loop.check_closure();
  return loop;
}

void Loop::check_closure() const {
  for (double t : {0.0, 1.0}) {
    const ControlPoint p = (*this)(t);
    if (p.size() != base_.size())
      throw Error(ErrorKind::invalid_input, "path dimension differs from base dimension");
    if ((p - base_).norm() > closure_tol_) {
      std::ostringstream msg;
      msg << "path(" << t << ") is " << (p - base_).norm() << " away from the base point";
      throw Error(ErrorKind::invalid_input, msg.str());
    }
  }
}

ControlPoint Loop::operator()(double t) const {
  if (!std::isfinite(t)) throw Error(ErrorKind::invalid_input, "non-finite loop parameter");
  ControlPoint p = (*path_)(std::clamp(t, 0.0, 1.0));
  if (!p.allFinite()) throw Error(ErrorKind::invalid_input, "path produced non-finite coordinates");
  return p;
}

Loop Loop::named(std::string name) const {
  Loop copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

LoopWord inverse_word(const LoopWord& word) {
  LoopWord out(word.rbegin(), word.rend());
  for (auto& letter : out) letter.exponent = -letter.exponent;
  return out;
}

std::string to_string(const LoopWord& word) {
  if (word.empty()) return "()";
  std::ostringstream out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i > 0) out << ' ';
    out << (word[i].exponent < 0 ? "-" : "+") << word[i].loop;
  }
  return out.str();
}

Loop constant_loop(const ControlPoint& base) {
  require_finite(base, "constant loop base");
  return Loop::analytic(base, [base](double) { return base; });
}

Loop compose(const Loop& first, const Loop& second) {
  if (first.dimension() != second.dimension())
    throw Error(ErrorKind::invalid_composition, "loops live in control spaces of different dimension");
  const double tol = std::max(first.closure_tolerance(), second.closure_tolerance());
  if ((first.base() - second.base()).norm() > tol)
    throw Error(ErrorKind::invalid_composition, "loops do not share a base point");
  // 2t - 1 at t = 1/2 is exactly 0, so both halves meet at the base point.
  return Loop::analytic(
      first.base(),
      [first, second](double t) { return t <= 0.5 ? first(2.0 * t) : second(2.0 * t - 1.0); },
      2.0 * tol);
}

Loop invert(const Loop& loop) {
  return Loop::analytic(
      loop.base(), [loop](double t) { return loop(1.0 - t); }, loop.closure_tolerance());
}

Loop reparametrize(const Loop& loop, std::function<double(double)> phi) {
  if (!phi) throw Error(ErrorKind::invalid_reparametrization, "empty reparametrization");
  constexpr int kProbes = 1024;
  constexpr double kEndpointTol = 1e-12;
  if (std::abs(phi(0.0)) > kEndpointTol || std::abs(phi(1.0) - 1.0) > kEndpointTol)
    throw Error(ErrorKind::invalid_reparametrization, "reparametrization must fix 0 and 1");
  double previous = phi(0.0);
  for (int i = 1; i <= kProbes; ++i) {
    const double value = phi(static_cast<double>(i) / kProbes);
    if (!std::isfinite(value) || !(value > previous))
      throw Error(ErrorKind::invalid_reparametrization, "reparametrization is not strictly increasing");
    previous = value;
  }
  return Loop::analytic(
      loop.base(), [loop, phi = std::move(phi)](double t) { return loop(phi(t)); },
      loop.closure_tolerance());
}

Loop word_to_loop(const LoopWord& word, const Loop& first, const Loop& second) {
  if (first.dimension() != second.dimension())
    throw Error(ErrorKind::invalid_composition, "generator loops differ in dimension");
  const double tol = std::max(first.closure_tolerance(), second.closure_tolerance());
  if ((first.base() - second.base()).norm() > tol)
    throw Error(ErrorKind::invalid_composition, "generator loops do not share a base point");
  if (word.empty()) return constant_loop(first.base());

  std::vector<Loop> pieces;
  pieces.reserve(word.size());
  for (const auto& letter : word) {
    if (letter.loop != 1 && letter.loop != 2)
      throw Error(ErrorKind::invalid_input, "letter refers to a loop other than 1 or 2");
    if (letter.exponent != 1 && letter.exponent != -1)
      throw Error(ErrorKind::invalid_input, "letter exponent must be +1 or -1");
    const Loop& g = letter.loop == 1 ? first : second;
    pieces.push_back(letter.exponent == 1 ? g : invert(g));
  }
  const auto count = static_cast<double>(pieces.size());
  return Loop::analytic(
      first.base(),
      [pieces = std::move(pieces), count](double t) {
        const double s = t * count;
        const double index = std::clamp(std::floor(s), 0.0, count - 1.0);
        return pieces[static_cast<std::size_t>(index)](s - index);
      },
      2.0 * tol);
}

std::vector<ControlPoint> sample(const Loop& loop, int resolution) {
  if (resolution < 2) throw Error(ErrorKind::invalid_resolution, "sampling needs K >= 2");
  std::vector<ControlPoint> points;
  points.reserve(static_cast<std::size_t>(resolution) + 1);
  for (int j = 0; j <= resolution; ++j) points.push_back(loop(static_cast<double>(j) / resolution));
  return points;
}

}  // namespace holo

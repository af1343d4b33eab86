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
#include <memory>
#include <string>
#include <vector>

#include "holo/linalg.hpp"

namespace holo {

inline constexpr double kAnalyticClosureTol = 1e-12;
inline constexpr double kNodeClosureTol = 1e-9;

/// Throws invalid-input unless every coordinate is finite and d >= 1.
void require_finite(const ControlPoint& point, const char* what = "control point");

/// A closed path t in [0, 1] -> control space with fixed base point. The path
/// is either an analytic callable or a piecewise-linear node list. Loops are
/// immutable and cheap to copy; derived loops share their parents.
class Loop {
 public:
  using Path = std::function<ControlPoint(double)>;

  static Loop analytic(ControlPoint base, Path path, double closure_tol = kAnalyticClosureTol);
  /// Node list with base point taken from the first node.
  static Loop from_nodes(std::vector<ControlPoint> nodes, double closure_tol = kNodeClosureTol);
  static Loop from_nodes(ControlPoint base, std::vector<ControlPoint> nodes,
                         double closure_tol = kNodeClosureTol);

  ControlPoint operator()(double t) const;

  int dimension() const { return static_cast<int>(base_.size()); }
  const ControlPoint& base() const { return base_; }
  double closure_tolerance() const { return closure_tol_; }
  bool is_node_list() const { return !nodes_.empty(); }
  const std::vector<ControlPoint>& nodes() const { return nodes_; }

  const std::string& name() const { return name_; }
  Loop named(std::string name) const;

 private:
  Loop(ControlPoint base, std::shared_ptr<const Path> path, double closure_tol,
       std::vector<ControlPoint> nodes);
  void check_closure() const;

  ControlPoint base_;
  std::shared_ptr<const Path> path_;
  double closure_tol_;
  std::vector<ControlPoint> nodes_;
  std::string name_;
};

/// One letter of a loop word: generator index (1 or 2) raised to +1 or -1.
struct Letter {
  int loop = 1;
  int exponent = 1;

  friend bool operator==(const Letter&, const Letter&) = default;
};

using LoopWord = std::vector<Letter>;

/// Word read backwards with every exponent flipped; its holonomy is the
/// inverse of the original word's holonomy.
LoopWord inverse_word(const LoopWord& word);
std::string to_string(const LoopWord& word);

Loop constant_loop(const ControlPoint& base);

/// gamma1 on [0, 1/2] at doubled rate, then gamma2 on [1/2, 1]. The holonomy of
/// the result factorises as hol(gamma2) * hol(gamma1).
Loop compose(const Loop& first, const Loop& second);

Loop invert(const Loop& loop);

/// loop o phi; phi must fix the endpoints and be strictly increasing.
Loop reparametrize(const Loop& loop, std::function<double(double)> phi);

/// Letters traversed in order, each on an equal parameter sub-interval.
Loop word_to_loop(const LoopWord& word, const Loop& first, const Loop& second);

/// K + 1 points at t = j / K.
std::vector<ControlPoint> sample(const Loop& loop, int resolution);

}  // namespace holo

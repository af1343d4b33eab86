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
#include <string_view>
#include <vector>

#include "holo/holonomy.hpp"
#include "holo/loops.hpp"
#include "holo/spectral.hpp"

namespace holo {

enum class Integrator {
  magnus4,               // two-point Gauss-Legendre Magnus, O(M^-4)
  exponential_midpoint,  // exp(-i H(t_mid) dt), O(M^-2)
};

std::string_view to_string(Integrator integrator);

using Ramp = std::function<double(double)>;

inline double identity_ramp(double s) { return s; }
/// s^2 (3 - 2 s): zero velocity at both ends of the schedule.
inline double smoothstep_ramp(double s) { return s * s * (3.0 - 2.0 * s); }

/// Drives a loop in physical time t in [0, T] (hbar = 1) as
/// lambda(t) = loop(ramp(t / T)).
struct AdiabaticSchedule {
  Loop loop;
  double total_time = 1.0;
  Ramp ramp = identity_ramp;
  int steps = 100;
  Integrator integrator = Integrator::magnus4;

  ControlPoint at(double time) const { return loop(ramp(time / total_time)); }
};

/// max(100, ceil(50 T max ||H||)), the norm sampled along the loop.
int default_integrator_steps(const HamiltonianFamily& family, const Loop& loop, double total_time);

/// Validated schedule; steps = 0 selects default_integrator_steps.
AdiabaticSchedule make_schedule(const HamiltonianFamily& family, Loop loop, double total_time,
                                Ramp ramp = identity_ramp, int steps = 0,
                                Integrator integrator = Integrator::magnus4);

struct EvolutionResult {
  Matrix propagator;  // U(T)
  Integrator integrator = Integrator::magnus4;
  int steps = 0;
  double unitarity_defect = 0.0;
  std::vector<Matrix> projectors;       // Pi_l at the base point
  std::vector<double> dynamical_phases; // phi_l = int_0^T eps_l
  std::vector<Matrix> blocks;           // Pi_l U Pi_l
  std::vector<double> leakage;          // ||(1 - Pi_l) U Pi_l||_2
};

/// Integrates i dU/dt = H(lambda(t)) U from U(0) = 1.
EvolutionResult evolve(const HamiltonianFamily& family, const AdiabaticSchedule& schedule);

enum class Quadrature { simpson, midpoint };

/// phi_l(T) = int_0^T eps_l(lambda(t)) dt on `nodes` intervals (schedule.steps
/// when 0; rounded up to even for Simpson).
double dynamical_phase(const HamiltonianFamily& family, const AdiabaticSchedule& schedule, int level,
                       Quadrature rule = Quadrature::simpson, int nodes = 0);

/// || e^{i phi} start† U(T) start - hol ||_F. The propagator carries
/// e^{-i phi} on an adiabatic level, so multiplying by e^{i phi} strips it.
double compare_holonomy(const EvolutionResult& evolution, const Holonomy& holonomy, double phase);

/// max_t ||dH/dt|| / (min_t gap)^2, sampled on `samples` midpoints.
double adiabaticity_ratio(const HamiltonianFamily& family, const AdiabaticSchedule& schedule, int samples = 0);

}  // namespace holo

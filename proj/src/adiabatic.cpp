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

#include "holo/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "holo/error.hpp"

namespace holo {
namespace {

constexpr double kIntegratorTol = 1e-6;
constexpr double kFrameTol = 1e-8;
constexpr int kNormSamples = 64;

void check_ramp(const Ramp& ramp) {
  if (!ramp) throw Error(ErrorKind::invalid_input, "empty ramp");
  if (std::abs(ramp(0.0)) > 1e-12 || std::abs(ramp(1.0) - 1.0) > 1e-12)
    throw Error(ErrorKind::invalid_input, "ramp must fix 0 and 1");
  double previous = ramp(0.0);
  for (int i = 1; i <= 256; ++i) {
    const double value = ramp(i / 256.0);
    if (!(value >= previous)) throw Error(ErrorKind::invalid_input, "ramp must be monotone");
    previous = value;
  }
}

}  // namespace

std::string_view to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::magnus4: return "magnus4";
    case Integrator::exponential_midpoint: return "exponential-midpoint";
  }
  return "unknown";
}

int default_integrator_steps(const HamiltonianFamily& family, const Loop& loop, double total_time) {
  double norm = 0.0;
  for (int j = 0; j <= kNormSamples; ++j) {
    norm = std::max(norm, spectral_norm(family(loop(static_cast<double>(j) / kNormSamples))));
  }
  // The relative shave keeps a norm of 1 + eps from adding a step.
  return std::max(100, static_cast<int>(std::ceil(50.0 * total_time * norm * (1.0 - 1e-12))));
}

AdiabaticSchedule make_schedule(const HamiltonianFamily& family, Loop loop, double total_time, Ramp ramp,
                                int steps, Integrator integrator) {
  if (!(total_time > 0.0) || !std::isfinite(total_time))
    throw Error(ErrorKind::invalid_input, "total time must be positive");
  if (loop.dimension() != family.control_dimension())
    throw Error(ErrorKind::invalid_input, "loop and family control dimensions differ");
  if (!ramp) ramp = identity_ramp;
  check_ramp(ramp);
  if (steps == 0) steps = default_integrator_steps(family, loop, total_time);
  if (steps < 100) throw Error(ErrorKind::invalid_resolution, "integrator needs at least 100 steps");
  return AdiabaticSchedule{std::move(loop), total_time, std::move(ramp), steps, integrator};
}

EvolutionResult evolve(const HamiltonianFamily& family, const AdiabaticSchedule& schedule) {
  const double dt = schedule.total_time / schedule.steps;
  const auto n = family.dimension();
  Matrix u = Matrix::Identity(n, n);
  const Complex minus_i(0.0, -1.0);
  // Gauss-Legendre nodes on [0, 1].
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  for (int k = 0; k < schedule.steps; ++k) {
    const double t0 = k * dt;
    Matrix omega;
    if (schedule.integrator == Integrator::magnus4) {
      const Matrix h1 = family(schedule.at(t0 + c1 * dt));
      const Matrix h2 = family(schedule.at(t0 + c2 * dt));
      omega = minus_i * (dt / 2.0) * (h1 + h2) - (std::sqrt(3.0) / 12.0) * dt * dt * commutator(h2, h1);
    } else {
      omega = minus_i * dt * family(schedule.at(t0 + 0.5 * dt));
    }
    u = expm_skew(antihermitian_part(omega)) * u;
  }

  EvolutionResult out;
  out.propagator = u;
  out.integrator = schedule.integrator;
  out.steps = schedule.steps;
  out.unitarity_defect = unitarity_defect(u);
  if (out.unitarity_defect > kIntegratorTol)
    throw Error(ErrorKind::integrator_resolution, "propagator drifted from unitarity");

  const SpectralDecomposition base = family.decompose_at(schedule.loop.base());
  const Matrix identity = Matrix::Identity(n, n);
  for (int l = 0; l < family.signature().levels(); ++l) {
    const Matrix& p = base.projectors[static_cast<std::size_t>(l)];
    out.projectors.push_back(p);
    out.blocks.push_back(p * u * p);
    out.leakage.push_back(spectral_norm(((identity - p) * u * p).eval()));
    out.dynamical_phases.push_back(dynamical_phase(family, schedule, l));
  }
  return out;
}

double dynamical_phase(const HamiltonianFamily& family, const AdiabaticSchedule& schedule, int level,
                       Quadrature rule, int nodes) {
  if (level < 0 || level >= family.signature().levels())
    throw Error(ErrorKind::invalid_input, "level index out of range");
  int intervals = nodes > 0 ? nodes : schedule.steps;
  const auto energy = [&](double t) {
    return family.decompose_at(schedule.at(t)).eigenvalues(level);
  };
  if (rule == Quadrature::midpoint) {
    const double dt = schedule.total_time / intervals;
    double sum = 0.0;
    for (int j = 0; j < intervals; ++j) sum += energy((j + 0.5) * dt);
    return sum * dt;
  }
  if (intervals % 2 != 0) ++intervals;
  const double dt = schedule.total_time / intervals;
  double sum = energy(0.0) + energy(schedule.total_time);
  for (int j = 1; j < intervals; ++j) sum += (j % 2 == 1 ? 4.0 : 2.0) * energy(j * dt);
  return sum * dt / 3.0;
}

double compare_holonomy(const EvolutionResult& evolution, const Holonomy& holonomy, double phase) {
  const auto level = static_cast<std::size_t>(holonomy.level);
  if (level >= evolution.projectors.size())
    throw Error(ErrorKind::invalid_comparison, "holonomy level not present in the evolution");
  const Matrix& frame = holonomy.start.columns;
  const Matrix& p = evolution.projectors[level];
  if (frame.rows() != p.rows() || frame.cols() != holonomy.unitary.rows())
    throw Error(ErrorKind::invalid_comparison, "frame does not match the evolution's dimensions");
  if ((p * frame - frame).cwiseAbs().maxCoeff() > kFrameTol)
    throw Error(ErrorKind::invalid_comparison, "holonomy frame is not in the level at the base point");
  const Matrix block = frame.adjoint() * evolution.propagator * frame;
  return (std::polar(1.0, phase) * block - holonomy.unitary).norm();
}

double adiabaticity_ratio(const HamiltonianFamily& family, const AdiabaticSchedule& schedule, int samples) {
  if (samples <= 0) samples = std::min(schedule.steps, 2048);
  const double T = schedule.total_time;
  const double ds = 1e-6;
  double max_rate = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  std::vector<Matrix> previous;
  for (int j = 0; j < samples; ++j) {
    const double s = (j + 0.5) / samples;
    const ControlPoint here = schedule.at(s * T);
    SpectralDecomposition d;
    try {
      d = family.decompose_at(here);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::degeneracy_mismatch || e.kind() == ErrorKind::degeneracy_ambiguity)
        throw Error(ErrorKind::crossing, e.what());
      throw;
    }
    min_gap = std::min(min_gap, d.min_gap());
    // A crossing between samples shows up as levels swapping eigenspaces.
    if (!previous.empty()) {
      for (std::size_t l = 0; l < previous.size(); ++l) {
        const double overlap = (previous[l] * d.projectors[l]).trace().real();
        if (overlap < 0.5 * d.projectors[l].trace().real())
          throw Error(ErrorKind::crossing, "level " + std::to_string(l) + " exchanges eigenspace near s = " +
                                               std::to_string(s));
      }
    }
    previous = d.projectors;
    const double lo = std::max(0.0, s - ds);
    const double hi = std::min(1.0, s + ds);
    const Matrix rate = (family(schedule.at(hi * T)) - family(schedule.at(lo * T))) / ((hi - lo) * T);
    max_rate = std::max(max_rate, spectral_norm(rate));
  }
  if (!std::isfinite(min_gap)) return 0.0;  // a single level has no gap to protect
  if (!(min_gap > 0.0)) throw Error(ErrorKind::crossing, "vanishing gap along the schedule");
  return max_rate / (min_gap * min_gap);
}

}  // namespace holo

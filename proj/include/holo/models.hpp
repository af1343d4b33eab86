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

#include <string>
#include <vector>

#include "holo/connection.hpp"
#include "holo/holonomy.hpp"
#include "holo/loops.hpp"
#include "holo/spectral.hpp"

namespace holo {

// ---------------------------------------------------------------- spin-1/2

inline constexpr double kSpinGapFloor = 1e-6;

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

/// H(B) = B . sigma over control space R^3 \ {0}; eigenvalues -|B|, +|B|.
/// Evaluating at |B| < 1e-6 throws gap-collapse.
HamiltonianFamily spin_family();

/// B(t) = field (cos 2 pi t, sin 2 pi t, 0).
Loop spin_equator_loop(double field = 1.0);

// ---------------------------------------------------------------- CP^{N-1}

/// N-level system with the first N - 1 states degenerate (the code) and
/// state N split off. Control coordinates are ordered
/// (z_1^0, z_1^1, z_2^0, z_2^1, ...), z_a = z_a^0 + i z_a^1.
struct CPModel {
  int n = 3;
  double code_energy = 0.0;
  double single_energy = 1.0;
};

void validate(const CPModel& model);
int control_dimension(const CPModel& model);
/// Level index of the code in ascending order.
int code_level(const CPModel& model);

/// d U_a / d z_a^k at the origin: i^k (|a><N| - (-1)^k |N><a|), a 1-based.
Matrix cp_generator(int n, int alpha, int k);

/// U(z) = U_{N-1}(z_{N-1}) ... U_1(z_1).
Matrix cp_unitary(const CPModel& model, const ControlPoint& z);
std::vector<Matrix> cp_jacobian(const CPModel& model, const ControlPoint& z);

/// H(z) = U(z) diag(e_code, ..., e_code, e_single) U(z)†, with a gauge chart.
OrbitFamily cp_orbit(const CPModel& model);
HamiltonianFamily cp_family(const CPModel& model);

/// Closed-form curvature of the code at z = 0 over the 2(N-1) real directions.
CurvatureTensor cp_curvature_origin(int n);

// ---------------------------------------------------------------- bosonic

/// Fock space truncated to levels 0..M, H0 = omega n (n - 1), controls
/// (Re lambda, Im lambda, Re mu, Im mu).
struct BosonicModel {
  int truncation = 40;
  double omega = 1.0;
};

void validate(const BosonicModel& model);

Matrix annihilation(int truncation);
Matrix bosonic_h0(const BosonicModel& model);

/// exp(lambda a† - conj(lambda) a) exp(mu a†^2 - conj(mu) a^2).
Matrix bosonic_unitary(const BosonicModel& model, const ControlPoint& point);
std::vector<Matrix> bosonic_jacobian(const BosonicModel& model, const ControlPoint& point);

OrbitFamily bosonic_orbit(const BosonicModel& model);
HamiltonianFamily bosonic_family(const BosonicModel& model);

/// |lambda|^2 + |mu| > 0.9 M: the displaced/squeezed state reaches the top
/// tenth of the truncated space.
bool truncation_risk(const BosonicModel& model, const ControlPoint& point);

/// Complex components A_lambda = (A_x - i A_y) / 2 and A_mu = (A_u - i A_v) / 2
/// from a real-coordinate connection sample.
struct HolomorphicConnection {
  Matrix lambda;
  Matrix mu;
};
HolomorphicConnection holomorphic_components(const ConnectionSample& sample);

enum class TruncationQuantity {
  curvature_origin,  // independent curvature components of the code at 0
  span_dimension,    // curvature span dimension at 0
  holonomy,          // code holonomy of a supplied loop
};

struct TruncationReport {
  TruncationQuantity quantity = TruncationQuantity::curvature_origin;
  std::vector<int> truncations;
  std::vector<Eigen::VectorXcd> values;  // flattened quantity per truncation
  std::vector<double> differences;       // max |value_{i+1} - value_i|
  bool converged = true;
  std::vector<std::string> warnings;
};

/// Evaluates a quantity at each truncation of an increasing list. Successive
/// differences that grow (above 1e-12) mark the report as not converged.
TruncationReport truncation_convergence(const BosonicModel& model, TruncationQuantity quantity,
                                        const std::vector<int>& truncations, const Loop* loop = nullptr,
                                        int steps = kDefaultSteps);

}  // namespace holo

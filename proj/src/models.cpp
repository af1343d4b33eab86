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

#include "holo/models.hpp"

#include <cmath>
#include <numbers>

#include "holo/error.hpp"

namespace holo {
namespace {

const Complex kI(0.0, 1.0);

// exp(c0 g0 + c1 g1) and its derivatives along g0, g1.
struct ExpPair {
  Matrix value;
  Matrix d0;
  Matrix d1;
};

ExpPair exp_pair(double c0, double c1, const Matrix& g0, const Matrix& g1) {
  const SkewExponential<Complex> e((c0 * g0 + c1 * g1).eval());
  return {e.value(), e.derivative(g0), e.derivative(g1)};
}

Eigen::VectorXcd flatten(const std::vector<Matrix>& blocks) {
  Eigen::Index size = 0;
  for (const Matrix& b : blocks) size += b.size();
  Eigen::VectorXcd out(size);
  Eigen::Index at = 0;
  for (const Matrix& b : blocks) {
    out.segment(at, b.size()) = b.reshaped();
    at += b.size();
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- spin-1/2

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

HamiltonianFamily spin_family() {
  const Matrix sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  return HamiltonianFamily(2, 3, DegeneracySignature({1, 1}), [sx, sy, sz](const ControlPoint& b) -> Matrix {
    if (b.norm() < kSpinGapFloor) throw Error(ErrorKind::gap_collapse, "field magnitude below 1e-6");
    return b(0) * sx + b(1) * sy + b(2) * sz;
  });
}

Loop spin_equator_loop(double field) {
  if (!(field >= kSpinGapFloor) || !std::isfinite(field))
    throw Error(ErrorKind::gap_collapse, "equator loop needs a nonvanishing field");
  ControlPoint base(3);
  base << field, 0.0, 0.0;
  return Loop::analytic(base, [field](double t) {
           const double angle = 2.0 * std::numbers::pi * t;
           ControlPoint b(3);
           b << field * std::cos(angle), field * std::sin(angle), 0.0;
           return b;
         }).named("equator");
}

// ---------------------------------------------------------------- CP^{N-1}

void validate(const CPModel& model) {
  if (model.n < 2) throw Error(ErrorKind::invalid_input, "CP model needs N >= 2");
  if (!std::isfinite(model.code_energy) || !std::isfinite(model.single_energy))
    throw Error(ErrorKind::invalid_input, "CP energies must be finite");
  if (model.code_energy == model.single_energy)
    throw Error(ErrorKind::invalid_input, "CP code and single energies must differ");
}

int control_dimension(const CPModel& model) { return 2 * (model.n - 1); }

int code_level(const CPModel& model) { return model.code_energy < model.single_energy ? 0 : 1; }

Matrix cp_generator(int n, int alpha, int k) {
  if (alpha < 1 || alpha >= n || (k != 0 && k != 1))
    throw Error(ErrorKind::invalid_input, "CP generator index out of range");
  Matrix g = Matrix::Zero(n, n);
  const Complex phase = k == 0 ? Complex(1.0) : kI;
  const double sign = k == 0 ? 1.0 : -1.0;  // (-1)^k
  g(alpha - 1, n - 1) = phase;
  g(n - 1, alpha - 1) = -sign * phase;
  return g;
}

Matrix cp_unitary(const CPModel& model, const ControlPoint& z) {
  validate(model);
  if (z.size() != control_dimension(model)) throw Error(ErrorKind::invalid_input, "CP coordinate count mismatch");
  Matrix u = Matrix::Identity(model.n, model.n);
  for (int a = 1; a < model.n; ++a) {
    const Matrix g = z(2 * (a - 1)) * cp_generator(model.n, a, 0) + z(2 * (a - 1) + 1) * cp_generator(model.n, a, 1);
    u = expm_skew(g) * u;
  }
  return u;
}

std::vector<Matrix> cp_jacobian(const CPModel& model, const ControlPoint& z) {
  validate(model);
  if (z.size() != control_dimension(model)) throw Error(ErrorKind::invalid_input, "CP coordinate count mismatch");
  const int n = model.n;
  std::vector<ExpPair> factors;
  for (int a = 1; a < n; ++a)
    factors.push_back(exp_pair(z(2 * (a - 1)), z(2 * (a - 1) + 1), cp_generator(n, a, 0), cp_generator(n, a, 1)));

  // prefix[a] = U_a ... U_1 (0-based a), suffix[a] = U_{N-1} ... U_{a+1}.
  const auto m = factors.size();
  std::vector<Matrix> prefix(m + 1, Matrix::Identity(n, n));
  std::vector<Matrix> suffix(m + 1, Matrix::Identity(n, n));
  for (std::size_t a = 0; a < m; ++a) prefix[a + 1] = factors[a].value * prefix[a];
  for (std::size_t a = m; a-- > 0;) suffix[a] = suffix[a + 1] * factors[a].value;

  std::vector<Matrix> out;
  for (std::size_t a = 0; a < m; ++a) {
    out.push_back(suffix[a + 1] * factors[a].d0 * prefix[a]);
    out.push_back(suffix[a + 1] * factors[a].d1 * prefix[a]);
  }
  return out;
}

OrbitFamily cp_orbit(const CPModel& model) {
  validate(model);
  Eigen::VectorXd diagonal = Eigen::VectorXd::Constant(model.n, model.code_energy);
  diagonal(model.n - 1) = model.single_energy;
  const Matrix h0 = diagonal.cast<Complex>().asDiagonal();
  return make_orbit_family(
      h0, [model](const ControlPoint& z) { return cp_unitary(model, z); },
      ControlPoint::Zero(control_dimension(model)),
      [model](const ControlPoint& z) { return cp_jacobian(model, z); });
}

HamiltonianFamily cp_family(const CPModel& model) { return cp_orbit(model).family; }

CurvatureTensor cp_curvature_origin(int n) {
  if (n < 2) throw Error(ErrorKind::invalid_input, "CP model needs N >= 2");
  const int code = n - 1;
  const int directions = 2 * code;
  CurvatureTensor f(ControlPoint::Zero(directions), 0, code, directions);
  const auto ket_bra = [code](int row, int col) {
    Matrix m = Matrix::Zero(code, code);
    m(row - 1, col - 1) = 1.0;
    return m;
  };
  for (int alpha = 1; alpha <= code; ++alpha) {
    for (int kn = 0; kn < 2; ++kn) {
      for (int beta = 1; beta <= code; ++beta) {
        for (int km = 0; km < 2; ++km) {
          const int mu = 2 * (alpha - 1) + kn;
          const int nu = 2 * (beta - 1) + km;
          if (mu >= nu) continue;
          const Complex phase = std::pow(kI, kn + km);
          const double sn = kn == 0 ? 1.0 : -1.0;
          const double sm = km == 0 ? 1.0 : -1.0;
          f.set(mu, nu, phase * (sn * ket_bra(beta, alpha) - sm * ket_bra(alpha, beta)));
        }
      }
    }
  }
  return f;
}

// ---------------------------------------------------------------- bosonic

void validate(const BosonicModel& model) {
  if (model.truncation < 10) throw Error(ErrorKind::invalid_input, "bosonic truncation must be at least 10");
  if (!(model.omega > 0.0) || !std::isfinite(model.omega))
    throw Error(ErrorKind::invalid_input, "bosonic frequency must be positive");
}

Matrix annihilation(int truncation) {
  if (truncation < 1) throw Error(ErrorKind::invalid_input, "truncation must be positive");
  Matrix a = Matrix::Zero(truncation + 1, truncation + 1);
  for (int k = 1; k <= truncation; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Matrix bosonic_h0(const BosonicModel& model) {
  validate(model);
  Matrix h = Matrix::Zero(model.truncation + 1, model.truncation + 1);
  for (int k = 0; k <= model.truncation; ++k) h(k, k) = model.omega * k * (k - 1.0);
  return h;
}

namespace {

struct BosonicGenerators {
  Matrix dx, dy, du, dv;  // generators along Re lambda, Im lambda, Re mu, Im mu
};

BosonicGenerators bosonic_generators(int truncation) {
  const Matrix a = annihilation(truncation);
  const Matrix ad = a.adjoint();
  const Matrix a2 = a * a;
  const Matrix ad2 = ad * ad;
  return {ad - a, kI * (ad + a), ad2 - a2, kI * (ad2 + a2)};
}

}  // namespace

Matrix bosonic_unitary(const BosonicModel& model, const ControlPoint& point) {
  validate(model);
  if (point.size() != 4) throw Error(ErrorKind::invalid_input, "bosonic control point needs 4 coordinates");
  const BosonicGenerators g = bosonic_generators(model.truncation);
  return expm_skew((point(0) * g.dx + point(1) * g.dy).eval()) * expm_skew((point(2) * g.du + point(3) * g.dv).eval());
}

std::vector<Matrix> bosonic_jacobian(const BosonicModel& model, const ControlPoint& point) {
  validate(model);
  if (point.size() != 4) throw Error(ErrorKind::invalid_input, "bosonic control point needs 4 coordinates");
  const BosonicGenerators g = bosonic_generators(model.truncation);
  const ExpPair d = exp_pair(point(0), point(1), g.dx, g.dy);
  const ExpPair s = exp_pair(point(2), point(3), g.du, g.dv);
  return {d.d0 * s.value, d.d1 * s.value, d.value * s.d0, d.value * s.d1};
}

OrbitFamily bosonic_orbit(const BosonicModel& model) {
  validate(model);
  return make_orbit_family(
      bosonic_h0(model), [model](const ControlPoint& p) { return bosonic_unitary(model, p); },
      ControlPoint::Zero(4), [model](const ControlPoint& p) { return bosonic_jacobian(model, p); });
}

HamiltonianFamily bosonic_family(const BosonicModel& model) { return bosonic_orbit(model).family; }

bool truncation_risk(const BosonicModel& model, const ControlPoint& point) {
  if (point.size() != 4) throw Error(ErrorKind::invalid_input, "bosonic control point needs 4 coordinates");
  const double occupation = point.head<2>().squaredNorm() + point.tail<2>().norm();
  return occupation > 0.9 * model.truncation;
}

HolomorphicConnection holomorphic_components(const ConnectionSample& sample) {
  if (sample.components.size() != 4)
    throw Error(ErrorKind::invalid_input, "holomorphic split needs four real components");
  const auto& c = sample.components;
  return {(c[0] - kI * c[1]) / 2.0, (c[2] - kI * c[3]) / 2.0};
}

TruncationReport truncation_convergence(const BosonicModel& model, TruncationQuantity quantity,
                                        const std::vector<int>& truncations, const Loop* loop, int steps) {
  if (truncations.empty()) throw Error(ErrorKind::invalid_input, "empty truncation list");
  for (std::size_t i = 1; i < truncations.size(); ++i)
    if (truncations[i] <= truncations[i - 1])
      throw Error(ErrorKind::invalid_input, "truncation list must be increasing");
  if (quantity == TruncationQuantity::holonomy && loop == nullptr)
    throw Error(ErrorKind::invalid_input, "holonomy convergence needs a loop");

  TruncationReport report;
  report.quantity = quantity;
  report.truncations = truncations;
  const ControlPoint origin = ControlPoint::Zero(4);
  for (int m : truncations) {
    BosonicModel at = model;
    at.truncation = m;
    const HamiltonianFamily family = bosonic_family(at);
    switch (quantity) {
      case TruncationQuantity::curvature_origin:
        report.values.push_back(flatten(curvature_at(family, origin, 0).independent_components()));
        break;
      case TruncationQuantity::span_dimension: {
        const SpanResult span = irreducibility_dimension(curvature_at(family, origin, 0));
        report.values.push_back(Eigen::VectorXcd::Constant(1, static_cast<double>(span.dimension)));
        break;
      }
      case TruncationQuantity::holonomy: {
        for (const ControlPoint& p : sample(*loop, 64)) {
          if (truncation_risk(at, p)) {
            report.warnings.push_back("loop reaches the top Fock levels at M = " + std::to_string(m));
            break;
          }
        }
        report.values.push_back(flatten({holonomy_frame(family, *loop, 0, steps).unitary}));
        break;
      }
    }
  }
  for (std::size_t i = 1; i < report.values.size(); ++i)
    report.differences.push_back((report.values[i] - report.values[i - 1]).cwiseAbs().maxCoeff());
  for (std::size_t i = 1; i < report.differences.size(); ++i)
    if (report.differences[i] > report.differences[i - 1] && report.differences[i] > 1e-12) report.converged = false;
  return report;
}

}  // namespace holo

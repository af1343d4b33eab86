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

#include <gtest/gtest.h>

#include <numbers>

#include "holo/compiler.hpp"
#include "holo/error.hpp"
#include "holo/models.hpp"
#include "oracles.hpp"

namespace holo {
namespace {

const Complex I(0, 1);

double max_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix ket_bra(int n, int row, int col) {
  Matrix m = Matrix::Zero(n, n);
  m(row, col) = 1.0;
  return m;
}

TEST(Spin, FieldAlongZ) {
  ControlPoint b(3);
  b << 0, 0, 1;
  EXPECT_EQ(spin_family()(b), pauli_z());
}

TEST(Spin, GapCollapse) {
  try {
    spin_family()(ControlPoint::Constant(3, 1e-7));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::gap_collapse);
  }
  EXPECT_THROW(spin_equator_loop(0.0), Error);
}

TEST(Spin, EquatorIsIsoDegenerate) {
  const IsoDegeneracyReport r = check_iso_degenerate(spin_family(), sample(spin_equator_loop(2.0), 256));
  EXPECT_TRUE(r.iso_degenerate);
  EXPECT_NEAR(r.min_gap, 4.0, 1e-12);
}

TEST(CP, UnitaryAtOriginIsIdentity) {
  EXPECT_EQ(cp_unitary(CPModel{4}, ControlPoint::Zero(6)), Matrix(Matrix::Identity(4, 4)));
}

TEST(CP, RealCoordinateRotatesFirstPlane) {
  const double theta = 0.7;
  ControlPoint z(2);
  z << theta, 0.0;
  Matrix expected(2, 2);
  expected << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  EXPECT_LE(max_entry(cp_unitary(CPModel{2}, z) - expected), 1e-14);
}

TEST(CP, GeneratorsAtOrigin) {
  // i^k (|a><N| - (-1)^k |N><a|) for N = 3.
  EXPECT_EQ(cp_generator(3, 1, 0), Matrix(ket_bra(3, 0, 2) - ket_bra(3, 2, 0)));
  EXPECT_EQ(cp_generator(3, 2, 1), Matrix(I * (ket_bra(3, 1, 2) + ket_bra(3, 2, 1))));
  const std::vector<Matrix> j = cp_jacobian(CPModel{3}, ControlPoint::Zero(4));
  for (int a = 1; a <= 2; ++a)
    for (int k = 0; k < 2; ++k) EXPECT_LE(max_entry(j[static_cast<std::size_t>(2 * (a - 1) + k)] - cp_generator(3, a, k)), 1e-14);
}

TEST(CP, JacobianMatchesFiniteDifferences) {
  const CPModel model{4};
  ControlPoint z(6);
  z << 0.3, -0.2, 0.5, 0.1, -0.4, 0.25;
  const std::vector<Matrix> j = cp_jacobian(model, z);
  const double h = 1e-5;
  for (int mu = 0; mu < 6; ++mu) {
    ControlPoint plus = z, minus = z;
    plus(mu) += h;
    minus(mu) -= h;
    const Matrix fd = (cp_unitary(model, plus) - cp_unitary(model, minus)) / (2 * h);
    EXPECT_LE(max_entry(fd - j[static_cast<std::size_t>(mu)]), 1e-9);
  }
}

TEST(CP, OrderingIsAscending) {
  // U = U_2 U_1: the alpha = 1 factor acts first.
  const CPModel model{3};
  ControlPoint z(4);
  z << 0.4, 0.0, 0.9, 0.0;
  ControlPoint z1 = ControlPoint::Zero(4), z2 = ControlPoint::Zero(4);
  z1(0) = 0.4;
  z2(2) = 0.9;
  EXPECT_LE(max_entry(cp_unitary(model, z) - cp_unitary(model, z2) * cp_unitary(model, z1)), 1e-14);
}

TEST(CP, FamilyAndProjector) {
  const CPModel model{3};
  const HamiltonianFamily family = cp_family(model);
  EXPECT_EQ(family(ControlPoint::Zero(4)), Matrix(Eigen::Vector3cd(0, 0, 1).asDiagonal()));
  EXPECT_EQ(family.signature(), DegeneracySignature({2, 1}));
  ControlPoint z(4);
  z << 0.8, -0.3, 0.2, 1.1;
  const Matrix u = cp_unitary(model, z);
  EXPECT_LE(unitarity_defect(u), 1e-12);
  const Matrix p = family.decompose_at(z).projectors[0];
  EXPECT_LE(max_entry(p * p - p), 1e-12);
  const Matrix pi0 = Eigen::Vector3cd(1, 1, 0).asDiagonal();
  EXPECT_LE(max_entry(u * pi0 * u.adjoint() - p), 1e-12);
}

TEST(CP, CodeLevelFollowsEnergies) {
  EXPECT_EQ(code_level(CPModel{3, 0.0, 1.0}), 0);
  EXPECT_EQ(code_level(CPModel{3, 2.0, 1.0}), 1);
  const HamiltonianFamily flipped = cp_family(CPModel{3, 2.0, 1.0});
  EXPECT_EQ(flipped.signature(), DegeneracySignature({1, 2}));
  EXPECT_THROW(validate(CPModel{3, 1.0, 1.0}), Error);
  EXPECT_THROW(validate(CPModel{1}), Error);
}

TEST(CP, ClosedFormCurvatureEntries) {
  const CurvatureTensor f = cp_curvature_origin(4);
  // m = n = 0, alpha = 1, beta = 3: |3><1| - |1><3|.
  EXPECT_EQ(f(0, 4), Matrix(ket_bra(3, 2, 0) - ket_bra(3, 0, 2)));
  // m = 1, n = 0, alpha = beta = 2: 2i |2><2|.
  EXPECT_EQ(f(2, 3), Matrix(2.0 * I * ket_bra(3, 1, 1)));
  EXPECT_EQ(irreducibility_dimension(f).dimension, 9);
}

TEST(CP, CurvatureMatchesClosedForm) {
  for (int n = 2; n <= 5; ++n) {
    const CurvatureTensor exact = cp_curvature_origin(n);
    const HamiltonianFamily family = cp_family(CPModel{n});
    for (Evaluation route : {Evaluation::numerical, Evaluation::analytic}) {
      const CurvatureTensor f = curvature_at(family, ControlPoint::Zero(2 * (n - 1)), 0, 1e-4, route);
      for (int mu = 0; mu < f.directions(); ++mu)
        for (int nu = 0; nu < f.directions(); ++nu) EXPECT_LE(max_entry(f(mu, nu) - exact(mu, nu)), 1e-6);
    }
  }
}

TEST(Bosonic, CanonicalCommutatorBelowTheTop) {
  const int m = 25;
  const Matrix a = annihilation(m);
  const Matrix c = a * a.adjoint() - a.adjoint() * a;
  EXPECT_LE(max_entry(c.topLeftCorner(m - 1, m - 1) - Matrix::Identity(m - 1, m - 1)), 1e-12);
  EXPECT_GT(std::abs(c(m, m) - 1.0), 1.0);
}

TEST(Bosonic, CodeIsZeroEigenspace) {
  const BosonicModel model{30};
  const HamiltonianFamily family = bosonic_family(model);
  const SpectralDecomposition d = family.decompose_at(ControlPoint::Zero(4));
  EXPECT_EQ(d.signature().multiplicity(0), 2);
  EXPECT_NEAR(d.eigenvalues(0), 0.0, 1e-12);
  EXPECT_LE(max_entry(bosonic_h0(model).leftCols(2)), 0.0);
  EXPECT_THROW(validate(BosonicModel{5}), Error);
}

TEST(Bosonic, ConnectionAtOrigin) {
  // A_x = P(a† - a)P, A_y = P i(a† + a)P on the code, so the holomorphic
  // lambda component has a single unit entry at (1, 0) and A_mu vanishes.
  for (int m : {20, 40}) {
    const HamiltonianFamily family = bosonic_family(BosonicModel{m});
    const ConnectionSample a = connection_at(family, ControlPoint::Zero(4), 0);
    EXPECT_LE(max_entry(a.components[0] - (ket_bra(2, 1, 0) - ket_bra(2, 0, 1))), 1e-10);
    EXPECT_LE(max_entry(a.components[1] - I * (ket_bra(2, 1, 0) + ket_bra(2, 0, 1))), 1e-10);
    const HolomorphicConnection h = holomorphic_components(a);
    EXPECT_NEAR(std::abs(h.lambda(1, 0)), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(h.lambda(0, 0)) + std::abs(h.lambda(0, 1)) + std::abs(h.lambda(1, 1)), 0.0, 1e-10);
    EXPECT_LE(max_entry(h.mu), 1e-10);
    // Sign under the convention A = psi† d psi; regression lock.
    EXPECT_NEAR(h.lambda(1, 0).real(), 1.0, 1e-10);
  }
}

TEST(Bosonic, CurvatureAtOriginMatchesHandComputation) {
  const HamiltonianFamily family = bosonic_family(BosonicModel{40});
  const ControlPoint origin = ControlPoint::Zero(4);
  const CurvatureTensor analytic = curvature_at(family, origin, 0, 0.0, Evaluation::analytic);
  const CurvatureTensor numerical = curvature_at(family, origin, 0, 1e-4, Evaluation::numerical);
  const Matrix p00 = ket_bra(2, 0, 0), p11 = ket_bra(2, 1, 1), up = ket_bra(2, 0, 1), down = ket_bra(2, 1, 0);
  const Matrix expected[4][4] = {
      {Matrix::Zero(2, 2), -4.0 * I * p11, 2.0 * up - 2.0 * down, -2.0 * I * (down + up)},
      {},
      {},
      {},
  };
  EXPECT_LE(max_entry(analytic(0, 1) - expected[0][1]), 1e-10);
  EXPECT_LE(max_entry(analytic(0, 2) - expected[0][2]), 1e-10);
  EXPECT_LE(max_entry(analytic(0, 3) - expected[0][3]), 1e-10);
  EXPECT_LE(max_entry(analytic(1, 2) - 2.0 * I * (down + up)), 1e-10);
  EXPECT_LE(max_entry(analytic(1, 3) - (2.0 * up - 2.0 * down)), 1e-10);
  EXPECT_LE(max_entry(analytic(2, 3) - (-4.0 * I * p00 - 12.0 * I * p11)), 1e-10);
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) EXPECT_LE(max_entry(analytic(mu, nu) - numerical(mu, nu)), 1e-5);
  EXPECT_EQ(irreducibility_dimension(analytic).dimension, 4);
  EXPECT_EQ(irreducibility_dimension(numerical).dimension, 4);
}

TEST(Bosonic, JacobianMatchesFiniteDifferences) {
  const BosonicModel model{20};
  ControlPoint p(4);
  p << 0.2, -0.1, 0.15, 0.05;
  const std::vector<Matrix> j = bosonic_jacobian(model, p);
  const double h = 1e-4;
  for (int mu = 0; mu < 4; ++mu) {
    // Five-point stencil: the truncated generators have norms of order M, so
    // the central difference error h^2 |G|^3 is too large at any useful h.
    const auto at = [&](double s) {
      ControlPoint q = p;
      q(mu) += s;
      return bosonic_unitary(model, q);
    };
    const Matrix fd = (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12 * h);
    EXPECT_LE(max_entry(fd - j[static_cast<std::size_t>(mu)]), 1e-8);
  }
}

TEST(Bosonic, TruncationRisk) {
  const BosonicModel model{20};
  ControlPoint p(4);
  p << 4.0, 0.0, 0.0, 0.0;
  EXPECT_FALSE(truncation_risk(model, p));
  p << 4.0, 1.0, 1.5, 0.0;
  EXPECT_TRUE(truncation_risk(model, p));
}

TEST(Truncation, CurvatureIsInsensitive) {
  const TruncationReport r = truncation_convergence(BosonicModel{}, TruncationQuantity::curvature_origin, {20, 40});
  ASSERT_EQ(r.differences.size(), 1u);
  EXPECT_LE(r.differences[0], 1e-10);
  const TruncationReport s = truncation_convergence(BosonicModel{}, TruncationQuantity::span_dimension, {20, 30, 40});
  EXPECT_EQ(s.values[0](0), Complex(4.0));
  EXPECT_TRUE(s.converged);
}

TEST(Truncation, SmallLoopHolonomy) {
  const Loop g = random_trigonometric_loop(ControlPoint::Zero(4), 8, 0.06, 2);
  for (double t = 0; t <= 1.0; t += 1.0 / 64) {
    const ControlPoint p = g(t);
    ASSERT_LE(std::hypot(p(0), p(1)), 0.2);
    ASSERT_LE(std::hypot(p(2), p(3)), 0.2);
  }
  const TruncationReport r = truncation_convergence(BosonicModel{}, TruncationQuantity::holonomy, {30, 60}, &g, 1024);
  EXPECT_LE(r.differences[0], 1e-8);
  EXPECT_TRUE(r.warnings.empty());
  const Loop g0 = constant_loop(ControlPoint::Zero(4));
  const TruncationReport c = truncation_convergence(BosonicModel{}, TruncationQuantity::holonomy, {20, 30}, &g0, 16);
  for (const auto& v : c.values) EXPECT_LE((v - Eigen::Vector4cd(1, 0, 0, 1)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Truncation, RejectsBadLists) {
  EXPECT_THROW(truncation_convergence(BosonicModel{}, TruncationQuantity::curvature_origin, {30, 20}), Error);
  EXPECT_THROW(truncation_convergence(BosonicModel{}, TruncationQuantity::holonomy, {20, 30}), Error);
}

TEST(Models, TestLoopsAreIsoDegenerate) {
  const HamiltonianFamily cp = cp_family(CPModel{3});
  const Loop gc = random_trigonometric_loop(ControlPoint::Zero(4), 42, 0.6, 3);
  EXPECT_TRUE(check_iso_degenerate(cp, sample(gc, 512)).iso_degenerate);
  const HamiltonianFamily bos = bosonic_family(BosonicModel{40});
  const Loop gb = random_trigonometric_loop(ControlPoint::Zero(4), 8, 0.06, 2);
  EXPECT_TRUE(check_iso_degenerate(bos, sample(gb, 128)).iso_degenerate);
}

}  // namespace
}  // namespace holo

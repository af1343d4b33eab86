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
#include <optional>

#include "holo/compiler.hpp"
#include "holo/error.hpp"
#include "holo/models.hpp"
#include "oracles.hpp"

namespace holo {
namespace {

const Complex I(0, 1);

Matrix diag_phases(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, a);
  m(1, 1) = std::polar(1.0, b);
  return m;
}

Matrix rotation(double theta) {
  Matrix m(2, 2);
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return m;
}

TEST(GateDistance, Examples) {
  const Matrix id = Matrix::Identity(2, 2);
  EXPECT_NEAR(gate_distance(id, I * id), 0.0, 1e-7);
  EXPECT_NEAR(gate_distance(id, I * id, false), 2.0, 1e-14);
  EXPECT_NEAR(gate_distance(id, diag_phases(0, std::numbers::pi)), 2.0, 1e-7);
  const Matrix bad = 2.0 * id;
  try {
    gate_distance(id, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_unitary);
  }
}

TEST(GateDistance, MatchesScanOracle) {
  const Matrix a = rotation(0.3) * diag_phases(0.2, -1.1);
  const Matrix b = diag_phases(0.9, 0.4) * rotation(-0.8);
  EXPECT_NEAR(gate_distance(a, b), oracle::phase_invariant_distance(a, b), 1e-7);
  EXPECT_NEAR(gate_distance(a, b), gate_distance(b, a), 1e-12);
  EXPECT_NEAR(gate_distance(a, b), gate_distance(std::polar(1.0, 0.77) * a, b), 1e-7);
}

TEST(Compile, IdentityTargetGivesEmptyWord) {
  const CompilerResult r = compile({Matrix::Identity(2, 2)}, rotation(0.4), diag_phases(0, 1));
  EXPECT_TRUE(r.word.empty());
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.explored, 0u);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].length, 0);
}

TEST(Compile, ExactProductIsFound) {
  const Matrix u1 = rotation(0.4), u2 = diag_phases(0.3, 1.2);
  const CompilerResult r = compile({u1 * u2, 1e-9}, u1, u2, {.max_length = 2});
  EXPECT_LE(r.distance, 1e-9);
  EXPECT_TRUE(r.converged);
  // The word is read left to right; later letters act on the left.
  EXPECT_EQ(r.word, (LoopWord{{2, 1}, {1, 1}}));
  EXPECT_LE(gate_distance(word_product(r.word, u1, u2), u1 * u2), 1e-9);
}

TEST(Compile, RejectsBadInput) {
  const Matrix u = rotation(0.1);
  try {
    compile({2.0 * u}, u, u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::non_unitary);
  }
  EXPECT_THROW(compile({Matrix::Identity(3, 3)}, u, u), Error);
  EXPECT_THROW(compile({u}, u, u, {.max_length = 0}), Error);
}

TEST(Compile, UnprunedSearchMatchesBruteForce) {
  const Matrix u1 = rotation(0.9) * diag_phases(0.0, 0.5);
  const Matrix u2 = diag_phases(0.7, -0.2) * rotation(-0.35);
  const Matrix target = diag_phases(0.0, std::numbers::pi / 4);
  const std::vector<double> brute = oracle::brute_force_words(target, u1, u2, 6);
  for (int length = 1; length <= 6; ++length) {
    const CompilerResult exact = compile({target}, u1, u2, {.max_length = length, .net_radius = 0.0});
    EXPECT_NEAR(exact.distance, brute[static_cast<std::size_t>(length)], 1e-7) << length;
    const CompilerResult pruned = compile({target}, u1, u2, {.max_length = length});
    EXPECT_GE(pruned.distance, exact.distance - 1e-12);
    EXPECT_LE(pruned.distance, brute[static_cast<std::size_t>(length)] + length * 0.05) << length;
  }
}

TEST(Compile, ReportedWordReproducesDistance) {
  const Matrix u1 = rotation(0.9) * diag_phases(0.0, 0.5);
  const Matrix u2 = diag_phases(0.7, -0.2) * rotation(-0.35);
  const Matrix target = rotation(0.2) * diag_phases(1.0, 0.0);
  const CompilerResult r = compile({target}, u1, u2, {.max_length = 7});
  EXPECT_NEAR(gate_distance(word_product(r.word, u1, u2), target), r.distance, 1e-10);
  EXPECT_LE((r.unitary - word_product(r.word, u1, u2)).norm(), 1e-10);
  for (std::size_t i = 1; i < r.word.size(); ++i)
    EXPECT_FALSE(r.word[i].loop == r.word[i - 1].loop && r.word[i].exponent == -r.word[i - 1].exponent);
}

TEST(Compile, TraceIsNonIncreasing) {
  const Matrix u1 = rotation(0.9) * diag_phases(0.0, 0.5);
  const Matrix u2 = diag_phases(0.7, -0.2) * rotation(-0.35);
  const CompilerResult r = compile({diag_phases(0.0, 2.0)}, u1, u2, {.max_length = 9});
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_EQ(r.trace[i].length, r.trace[i - 1].length + 1);
    EXPECT_LE(r.trace[i].distance, r.trace[i - 1].distance);
  }
  EXPECT_EQ(r.trace.back().distance, r.distance);
}

TEST(Compile, BudgetCarriesBestResult) {
  const Matrix u1 = rotation(0.9) * diag_phases(0.0, 0.5);
  const Matrix u2 = diag_phases(0.7, -0.2) * rotation(-0.35);
  const Matrix target = diag_phases(0.0, 2.0);
  try {
    compile({target}, u1, u2, {.max_length = 12, .max_nodes = 200});
    FAIL();
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget);
    EXPECT_FALSE(e.best().word.empty());
    EXPECT_NEAR(gate_distance(word_product(e.best().word, u1, u2), target), e.best().distance, 1e-10);
    EXPECT_GT(e.best().explored, 0u);
  }
}

TEST(Compile, ParallelEqualsSerial) {
  const Matrix u1 = rotation(0.9) * diag_phases(0.0, 0.5);
  const Matrix u2 = diag_phases(0.7, -0.2) * rotation(-0.35);
  const Matrix target = rotation(1.1);
  const CompilerResult serial = compile({target}, u1, u2, {.max_length = 9});
  const CompilerResult parallel = compile({target}, u1, u2, {.max_length = 9, .parallel = true});
  EXPECT_EQ(serial.word, parallel.word);
  EXPECT_EQ(serial.distance, parallel.distance);
  EXPECT_EQ(serial.explored, parallel.explored);
}

TEST(Compile, InverseTargetCompilesToInverseWord) {
  // Property: the closure under inverses means U^-1 is as reachable as U.
  const Matrix u1 = rotation(0.9) * diag_phases(0.0, 0.5);
  const Matrix u2 = diag_phases(0.7, -0.2) * rotation(-0.35);
  const Matrix target = word_product(LoopWord{{1, 1}, {2, -1}, {2, -1}, {1, 1}}, u1, u2);
  const CompilerResult forward = compile({target}, u1, u2, {.max_length = 4});
  const CompilerResult backward = compile({target.adjoint()}, u1, u2, {.max_length = 4});
  EXPECT_LE(forward.distance, 1e-9);
  EXPECT_LE(backward.distance, 1e-9);
  EXPECT_EQ(forward.word.size(), backward.word.size());
  EXPECT_LE(gate_distance(word_product(inverse_word(forward.word), u1, u2), target.adjoint()), 1e-9);
}

TEST(GenericLoops, SpinHasNoGenericPair) {
  try {
    generate_generic_loops(spin_family(), 0, (ControlPoint(3) << 0, 0, 1).finished(), 42);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::genericity_failure);
  }
}

TEST(GenericLoops, RandomLoopIsClosedAndDeterministic) {
  const ControlPoint base = ControlPoint::Zero(4);
  const Loop a = random_trigonometric_loop(base, 7, 0.6, 3);
  const Loop b = random_trigonometric_loop(base, 7, 0.6, 3);
  const Loop c = random_trigonometric_loop(base, 8, 0.6, 3);
  EXPECT_EQ(a(0.0), base);
  EXPECT_LE((a(1.0) - base).norm(), 1e-12);
  for (double t : {0.1, 0.37, 0.8}) {
    EXPECT_EQ(a(t), b(t));
    EXPECT_GT((a(t) - c(t)).norm(), 1e-6);
  }
}

class CPCompile : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    family_.emplace(cp_family(CPModel{3}));
    loops_.emplace(generate_generic_loops(*family_, 0, ControlPoint::Zero(4), 42));
  }
  static inline std::optional<HamiltonianFamily> family_;
  static inline std::optional<GenericLoops> loops_;
};

TEST_F(CPCompile, GenericPairIsReproducible) {
  EXPECT_EQ(loops_->attempts, 1);
  EXPECT_GT(loops_->commutator_norm, 0.01);
  const GenericLoops again = generate_generic_loops(*family_, 0, ControlPoint::Zero(4), 42);
  EXPECT_EQ(again.first_holonomy, loops_->first_holonomy);
  EXPECT_EQ(again.second_holonomy, loops_->second_holonomy);
  EXPECT_EQ(loops_->first.name(), "generic-1");
  EXPECT_LE(spectral_norm(commutator(loops_->first_holonomy, loops_->second_holonomy)) - loops_->commutator_norm, 1e-15);
}

TEST_F(CPCompile, FrozenPhaseGateSearch) {
  const Matrix target = diag_phases(0.0, std::numbers::pi / 4);
  const CompilerResult r4 = compile({target}, loops_->first_holonomy, loops_->second_holonomy, {.max_length = 4});
  EXPECT_NEAR(r4.distance, 0.386013, 1e-6);
  EXPECT_EQ(r4.explored, 160u);
  EXPECT_EQ(to_string(r4.word), "+2 +1 -2 -1");
  const CompilerResult r8 = compile({target}, loops_->first_holonomy, loops_->second_holonomy, {.max_length = 8});
  EXPECT_NEAR(r8.distance, 0.041311, 1e-6);
  EXPECT_EQ(r8.explored, 8119u);
  EXPECT_LT(r8.distance, r4.distance);
}

TEST_F(CPCompile, CompiledWordHolonomyAgreesWithProduct) {
  const Matrix target = diag_phases(0.0, std::numbers::pi / 4);
  const CompilerResult r = compile({target}, loops_->first_holonomy, loops_->second_holonomy, {.max_length = 6});
  const Holonomy direct =
      holonomy_of_word(r.word, loops_->first, loops_->second, *family_, 0, 4096, WordRoute::composite_loop);
  EXPECT_LE((direct.unitary - r.unitary).norm(), 1e-5);
}

}  // namespace
}  // namespace holo

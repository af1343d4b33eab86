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

#include <cmath>
#include <numbers>

#include "holo/error.hpp"
#include "holo/loops.hpp"

namespace holo {
namespace {

ControlPoint point(std::initializer_list<double> values) {
  ControlPoint p(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) p(i++) = v;
  return p;
}

Loop circle(double radius = 1.0) {
  return Loop::analytic(point({radius, 0.0}), [radius](double t) {
    return point({radius * std::cos(2 * std::numbers::pi * t), radius * std::sin(2 * std::numbers::pi * t)});
  });
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::config;
}

TEST(ConstantLoop, StaysAtBase) {
  const Loop g = constant_loop(point({0.0, 0.0}));
  EXPECT_EQ(g(0.37), point({0.0, 0.0}));
  const Loop h = constant_loop(point({1.0, 2.0, 3.0}));
  EXPECT_EQ(h(0.0), h(1.0));
  EXPECT_EQ(h(1.0), point({1.0, 2.0, 3.0}));
}

TEST(ConstantLoop, SampleGivesIdenticalPoints) {
  const auto pts = sample(constant_loop(point({0.5, -1.0})), 8);
  ASSERT_EQ(pts.size(), 9u);
  for (const auto& p : pts) EXPECT_EQ(p, point({0.5, -1.0}));
  EXPECT_EQ(sample(constant_loop(point({2.0})), 4).size(), 5u);
}

TEST(ConstantLoop, RejectsNonFinite) {
  EXPECT_EQ(kind_of([] { constant_loop(point({0.0, NAN})); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { constant_loop(ControlPoint()); }), ErrorKind::invalid_input);
}

TEST(Loop, ClosureIsChecked) {
  EXPECT_EQ(kind_of([] { Loop::analytic(point({0.0}), [](double t) { return point({t}); }); }),
            ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { Loop::from_nodes({point({0.0}), point({1.0})}); }), ErrorKind::invalid_input);
  const Loop ok = Loop::from_nodes({point({0.0}), point({1.0}), point({1e-10})});
  EXPECT_LE((ok(0.0) - ok(1.0)).norm(), 2 * ok.closure_tolerance());
}

TEST(Loop, NodeListInterpolatesLinearly) {
  const Loop g = Loop::from_nodes({point({0.0, 0.0}), point({1.0, 0.0}), point({1.0, 1.0}), point({0.0, 0.0})});
  EXPECT_NEAR((g(1.0 / 6.0) - point({0.5, 0.0})).norm(), 0.0, 1e-15);
  EXPECT_NEAR((g(0.5) - point({1.0, 0.5})).norm(), 0.0, 1e-15);
}

TEST(Compose, UnitWithUnit) {
  const Loop g0 = constant_loop(point({0.3, 0.4}));
  const Loop c = compose(g0, g0);
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) EXPECT_EQ(c(t), g0(t));
}

TEST(Compose, TimeScaling) {
  const Loop g = circle();
  const Loop c = compose(g, invert(g));
  EXPECT_NEAR((c(0.25) - g(0.5)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((c(0.75) - g(0.5)).norm(), 0.0, 1e-15);
  EXPECT_EQ(c.base(), g.base());
}

TEST(Compose, SamplesReindex) {
  const Loop g1 = circle();
  const Loop g2 = Loop::analytic(point({1.0, 0.0}), [](double t) {
    return point({1.0 + 0.5 * std::sin(2 * std::numbers::pi * t), 0.2 * std::sin(4 * std::numbers::pi * t)});
  });
  const int k = 16;
  const auto a = sample(g1, k);
  const auto c = sample(compose(g1, g2), 2 * k);
  for (int j = 0; j <= k; ++j) EXPECT_NEAR((a[j] - c[j]).norm(), 0.0, 1e-15);
}

TEST(Compose, RejectsMismatch) {
  EXPECT_EQ(kind_of([] { compose(circle(), circle(2.0)); }), ErrorKind::invalid_composition);
  EXPECT_EQ(kind_of([] { compose(circle(), constant_loop(point({1.0, 0.0, 0.0}))); }), ErrorKind::invalid_composition);
}

TEST(Compose, WithConstantIsReparametrization) {
  const Loop g = circle();
  const Loop c = compose(g, constant_loop(g.base()));
  // c(t) = g(min(1, 2t)), the reparametrization t -> 2t clamped.
  for (double t : {0.0, 0.1, 0.3, 0.45, 0.5}) EXPECT_NEAR((c(t) - g(2 * t)).norm(), 0.0, 1e-15);
  for (double t : {0.6, 0.8, 1.0}) EXPECT_NEAR((c(t) - g.base()).norm(), 0.0, 1e-12);
}

TEST(Invert, Involution) {
  const Loop g = circle();
  const Loop ii = invert(invert(g));
  for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) EXPECT_EQ(ii(t), g(t));
  EXPECT_NEAR((invert(g)(0.25) - g(0.75)).norm(), 0.0, 1e-15);
  const Loop g0 = constant_loop(point({1.0}));
  EXPECT_EQ(invert(g0)(0.4), g0(0.4));
}

TEST(Reparametrize, IdentityAndConstant) {
  const Loop g = circle();
  const Loop same = reparametrize(g, [](double t) { return t; });
  for (double t : {0.0, 0.31, 1.0}) EXPECT_EQ(same(t), g(t));
  const Loop g0 = constant_loop(point({2.0, 2.0}));
  const Loop sq = reparametrize(g0, [](double t) { return t * t; });
  EXPECT_EQ(sq(0.7), g0(0.7));
}

TEST(Reparametrize, RejectsBadMaps) {
  EXPECT_EQ(kind_of([] { reparametrize(circle(), [](double t) { return 1.0 - t; }); }),
            ErrorKind::invalid_reparametrization);
  EXPECT_EQ(kind_of([] { reparametrize(circle(), [](double t) { return 0.5 * t; }); }),
            ErrorKind::invalid_reparametrization);
  EXPECT_EQ(kind_of([] { reparametrize(circle(), [](double t) { return t < 0.5 ? t : (t < 0.75 ? 0.5 : 2 * t - 1); }); }),
            ErrorKind::invalid_reparametrization);
}

TEST(WordToLoop, Basics) {
  const Loop g1 = circle();
  const Loop g2 = Loop::analytic(point({1.0, 0.0}), [](double t) {
    return point({1.0, 0.3 * std::sin(2 * std::numbers::pi * t)});
  });
  const Loop empty = word_to_loop({}, g1, g2);
  EXPECT_EQ(empty(0.6), g1.base());
  const Loop single = word_to_loop({{1, 1}}, g1, g2);
  for (double t : {0.0, 0.2, 0.7}) EXPECT_NEAR((single(t) - g1(t)).norm(), 0.0, 1e-15);
  const Loop w = word_to_loop({{1, 1}, {2, -1}}, g1, g2);
  EXPECT_NEAR((w(0.25) - g1(0.5)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((w(0.625) - g2(0.75)).norm(), 0.0, 1e-15);
  EXPECT_EQ(kind_of([&] { word_to_loop({{1, 1}}, g1, circle(3.0)); }), ErrorKind::invalid_composition);
  EXPECT_EQ(kind_of([&] { word_to_loop({{3, 1}}, g1, g2); }), ErrorKind::invalid_input);
}

TEST(Word, InverseAndFormat) {
  const LoopWord w = {{1, 1}, {2, -1}, {2, -1}};
  const LoopWord expected = {{2, 1}, {2, 1}, {1, -1}};
  EXPECT_EQ(inverse_word(w), expected);
  EXPECT_EQ(to_string(w), "+1 -2 -2");
  EXPECT_EQ(inverse_word(inverse_word(w)), w);
}

TEST(Sample, CircleQuarterPoints) {
  const auto pts = sample(circle(), 4);
  ASSERT_EQ(pts.size(), 5u);
  for (int j = 0; j <= 4; ++j) {
    const double angle = std::numbers::pi / 2 * j;
    EXPECT_NEAR(pts[j](0), std::cos(angle), 1e-15);
    EXPECT_NEAR(pts[j](1), std::sin(angle), 1e-15);
  }
  EXPECT_EQ(kind_of([] { sample(circle(), 1); }), ErrorKind::invalid_resolution);
}

TEST(Sample, ConsistentUnderRefinement) {
  const Loop g = circle();
  const auto coarse = sample(g, 10);
  const auto fine = sample(g, 20);
  for (int j = 0; j <= 10; ++j) EXPECT_NEAR((coarse[j] - fine[2 * j]).norm(), 0.0, 1e-15);
}

}  // namespace
}  // namespace holo

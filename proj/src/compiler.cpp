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

#include "holo/compiler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <thread>

namespace holo {
namespace {

constexpr double kUnitaryTol = 1e-6;
constexpr double kTargetTol = 1e-10;

double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Net of visited unitaries modulo global phase. Entries are normalised into
// SU(n) and stored with all n root-of-unity copies, bucketed on the first
// column.
class PhaseNet {
 public:
  PhaseNet(int n, double radius) : n_(n), radius_(radius), cell_(2.6 * std::max(radius, 1e-12)) {}

  bool near(const Matrix& u) const {
    if (radius_ <= 0.0) return false;
    const Key key = cell(normalised(u));
    for (int d0 = -1; d0 <= 1; ++d0)
      for (int d1 = -1; d1 <= 1; ++d1)
        for (int d2 = -1; d2 <= 1; ++d2)
          for (int d3 = -1; d3 <= 1; ++d3) {
            const auto it = cells_.find({key[0] + d0, key[1] + d1, key[2] + d2, key[3] + d3});
            if (it == cells_.end()) continue;
            for (std::size_t index : it->second)
              if (unitary_distance(u, stored_[index], true) <= radius_) return true;
          }
    return false;
  }

  void insert(const Matrix& u) {
    const std::size_t index = stored_.size();
    stored_.push_back(u);
    const Matrix base = normalised(u);
    for (int k = 0; k < n_; ++k) {
      const Matrix copy = std::polar(1.0, 2.0 * std::numbers::pi * k / n_) * base;
      cells_[cell(copy)].push_back(index);
    }
  }

  std::size_t size() const { return stored_.size(); }

 private:
  using Key = std::array<long long, 4>;

  Matrix normalised(const Matrix& u) const {
    const Complex det = u.determinant();
    return std::polar(1.0, -std::arg(det) / n_) * u;
  }

  Key cell(const Matrix& u) const {
    const Complex a = u(0, 0);
    const Complex b = n_ > 1 ? u(1, 0) : Complex(0.0);
    return {static_cast<long long>(std::floor(a.real() / cell_)), static_cast<long long>(std::floor(a.imag() / cell_)),
            static_cast<long long>(std::floor(b.real() / cell_)), static_cast<long long>(std::floor(b.imag() / cell_))};
  }

  int n_;
  double radius_;
  double cell_;
  std::vector<Matrix> stored_;
  std::map<Key, std::vector<std::size_t>> cells_;
};

struct Node {
  LoopWord word;
  Matrix unitary;
};

struct Candidate {
  Node node;
  double distance = 0.0;
};

constexpr std::array<Letter, 4> kLetters = {Letter{1, 1}, Letter{1, -1}, Letter{2, 1}, Letter{2, -1}};

double target_distance(const GateTarget& target, const Matrix& u) {
  return unitary_distance(u, target.unitary, target.phase_invariant);
}

void expand(const std::vector<Node>& frontier, std::size_t begin, std::size_t end, const std::array<Matrix, 4>& letters,
            const GateTarget& target, std::vector<Candidate>& out) {
  for (std::size_t i = begin; i < end; ++i) {
    const Node& node = frontier[i];
    for (std::size_t l = 0; l < kLetters.size(); ++l) {
      const Letter letter = kLetters[l];
      if (!node.word.empty() && node.word.back().loop == letter.loop && node.word.back().exponent == -letter.exponent)
        continue;
      Candidate c;
      c.node.word = node.word;
      c.node.word.push_back(letter);
      c.node.unitary = letters[l] * node.unitary;
      c.distance = target_distance(target, c.node.unitary);
      out.push_back(std::move(c));
    }
  }
}

}  // namespace

double gate_distance(const Matrix& u, const Matrix& v, bool phase_invariant) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    throw Error(ErrorKind::invalid_input, "gate dimensions differ");
  if (unitarity_defect(u) > kUnitaryTol || unitarity_defect(v) > kUnitaryTol)
    throw Error(ErrorKind::non_unitary, "gate distance needs unitary arguments");
  return unitary_distance(u, v, phase_invariant);
}

CompilerResult compile(const GateTarget& target, const Matrix& first, const Matrix& second,
                       const CompileOptions& options) {
  const auto n = target.unitary.rows();
  if (n == 0 || target.unitary.cols() != n) throw Error(ErrorKind::invalid_input, "target must be square");
  if (unitarity_defect(target.unitary) > kTargetTol) throw Error(ErrorKind::non_unitary, "target is not unitary");
  if (first.rows() != n || first.cols() != n || second.rows() != n || second.cols() != n)
    throw Error(ErrorKind::invalid_input, "letters and target act on different codes");
  if (unitarity_defect(first) > kUnitaryTol || unitarity_defect(second) > kUnitaryTol)
    throw Error(ErrorKind::non_unitary, "letter holonomies are not unitary");
  if (options.max_length < 1) throw Error(ErrorKind::invalid_input, "max_length must be at least 1");
  if (!(target.tolerance > 0.0)) throw Error(ErrorKind::invalid_input, "tolerance must be positive");

  const std::array<Matrix, 4> letters = {first, first.adjoint(), second, second.adjoint()};

  CompilerResult best;
  best.unitary = Matrix::Identity(n, n);
  best.distance = target_distance(target, best.unitary);
  best.trace.push_back({0, best.distance});
  best.converged = best.distance <= target.tolerance;
  if (best.converged) return best;

  PhaseNet net(static_cast<int>(n), options.net_radius);
  net.insert(best.unitary);
  std::vector<Node> frontier = {Node{{}, best.unitary}};

  const unsigned workers = options.parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  for (int length = 1; length <= options.max_length && !frontier.empty(); ++length) {
    std::vector<Candidate> candidates;
    if (workers == 1 || frontier.size() < 64) {
      expand(frontier, 0, frontier.size(), letters, target, candidates);
    } else {
      std::vector<std::vector<Candidate>> parts(workers);
      std::vector<std::thread> pool;
      const std::size_t chunk = (frontier.size() + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = std::min(frontier.size(), w * chunk);
        const std::size_t end = std::min(frontier.size(), begin + chunk);
        pool.emplace_back([&, begin, end, w] { expand(frontier, begin, end, letters, target, parts[w]); });
      }
      for (auto& t : pool) t.join();
      for (auto& part : parts)
        for (auto& c : part) candidates.push_back(std::move(c));
    }

    std::vector<Node> next;
    for (Candidate& c : candidates) {
      ++best.explored;
      if (c.distance < best.distance) {
        best.distance = c.distance;
        best.word = c.node.word;
        best.unitary = c.node.unitary;
      }
      if (net.near(c.node.unitary)) continue;
      net.insert(c.node.unitary);
      next.push_back(std::move(c.node));
      if (net.size() > options.max_nodes) {
        best.trace.push_back({length, best.distance});
        best.converged = best.distance <= target.tolerance;
        throw BudgetExceeded("compiler node cap reached at length " + std::to_string(length), best);
      }
    }
    best.trace.push_back({length, best.distance});
    if (best.distance <= target.tolerance) {
      best.converged = true;
      break;
    }
    frontier = std::move(next);
  }
  return best;
}

Loop random_trigonometric_loop(const ControlPoint& base, std::uint64_t seed, double amplitude, int harmonics) {
  require_finite(base, "loop base point");
  if (harmonics < 1) throw Error(ErrorKind::invalid_input, "need at least one harmonic");
  std::mt19937_64 rng(seed);
  const auto d = base.size();
  Eigen::MatrixXd a(d, harmonics), b(d, harmonics);
  for (Eigen::Index mu = 0; mu < d; ++mu)
    for (int k = 0; k < harmonics; ++k) {
      a(mu, k) = 2.0 * uniform(rng) - 1.0;
      b(mu, k) = 2.0 * uniform(rng) - 1.0;
    }
  return Loop::analytic(base, [base, a, b, amplitude, harmonics](double t) {
    ControlPoint p = base;
    for (int k = 1; k <= harmonics; ++k) {
      const double angle = 2.0 * std::numbers::pi * k * t;
      p += (a.col(k - 1) * (std::cos(angle) - 1.0) + b.col(k - 1) * std::sin(angle)) * (amplitude / k);
    }
    return p;
  });
}

GenericLoops generate_generic_loops(const HamiltonianFamily& family, int level, const ControlPoint& base,
                                    std::uint64_t seed, const GenericLoopOptions& options) {
  if (level < 0 || level >= family.signature().levels()) throw Error(ErrorKind::invalid_input, "level out of range");
  if (base.size() != family.control_dimension())
    throw Error(ErrorKind::invalid_input, "base point dimension differs from the family's");
  if (family.signature().multiplicity(level) < 2)
    throw Error(ErrorKind::genericity_failure, "one-dimensional code: holonomies always commute");

  double best_norm = 0.0;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::seed_seq sequence{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(attempt)};
    std::array<std::uint64_t, 2> seeds{};
    std::mt19937_64 rng(sequence);
    seeds[0] = rng();
    seeds[1] = rng();
    const Loop g1 = random_trigonometric_loop(base, seeds[0], options.amplitude, options.harmonics).named("generic-1");
    const Loop g2 = random_trigonometric_loop(base, seeds[1], options.amplitude, options.harmonics).named("generic-2");
    const Matrix h1 = holonomy_frame(family, g1, level, options.steps).unitary;
    const Matrix h2 = holonomy_frame(family, g2, level, options.steps).unitary;
    const double norm = spectral_norm(commutator(h1, h2));
    best_norm = std::max(best_norm, norm);
    if (norm > options.min_commutator) return GenericLoops{g1, g2, h1, h2, norm, attempt + 1};
  }
  throw Error(ErrorKind::genericity_failure,
              "holonomies nearly commute after " + std::to_string(options.max_attempts) +
                  " attempts (best commutator norm " + std::to_string(best_norm) + ")");
}

}  // namespace holo

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
#include <optional>
#include <string>
#include <vector>

#include "holo/linalg.hpp"

namespace holo {

inline constexpr double kDefaultGapTol = 1e-6;

/// Multiplicities (n_1, ..., n_R) of the distinct eigenvalues, in ascending
/// eigenvalue order.
class DegeneracySignature {
 public:
  DegeneracySignature() = default;
  explicit DegeneracySignature(std::vector<int> multiplicities);

  int levels() const { return static_cast<int>(multiplicities_.size()); }
  int dimension() const;
  int multiplicity(int level) const { return multiplicities_.at(static_cast<std::size_t>(level)); }
  const std::vector<int>& multiplicities() const { return multiplicities_; }

  friend bool operator==(const DegeneracySignature&, const DegeneracySignature&) = default;

 private:
  std::vector<int> multiplicities_;
};

std::string to_string(const DegeneracySignature& signature);

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;     // one per level, ascending
  Eigen::VectorXd spectrum;        // all N eigenvalues, ascending
  std::vector<Matrix> projectors;  // Pi_l
  std::vector<Matrix> frames;      // N x n_l orthonormal columns spanning level l

  DegeneracySignature signature() const;
  /// Smallest distance between consecutive level eigenvalues (infinity for R = 1).
  double min_gap() const;
};

/// Clusters the spectrum of a Hermitian matrix into degenerate levels.
/// Eigenvalues closer than gap_tol * max(1, spectral radius) merge; a gap that
/// falls between one tenth of that threshold and the threshold is ambiguous.
SpectralDecomposition decompose(const Matrix& hamiltonian, double gap_tol = kDefaultGapTol);

/// Smooth frame field Psi_l(lambda) together with its coordinate derivatives.
/// Families built from an explicit unitary chart supply one; it fixes the
/// gauge that analytic connection and curvature evaluations use.
struct GaugeChart {
  std::function<Matrix(const ControlPoint&, int level)> frame;
  std::function<std::vector<Matrix>(const ControlPoint&, int level)> frame_derivatives;
};

/// lambda -> H(lambda) with a fixed degeneracy signature.
class HamiltonianFamily {
 public:
  using Evaluator = std::function<Matrix(const ControlPoint&)>;

  HamiltonianFamily(int dimension, int control_dimension, DegeneracySignature signature,
                    Evaluator evaluator, double gap_tol = kDefaultGapTol);

  /// Evaluates and validates H(lambda): dimension, finiteness, Hermiticity.
  Matrix operator()(const ControlPoint& point) const;

  /// Decomposition at a point; throws degeneracy-mismatch when the signature
  /// found differs from the family's.
  SpectralDecomposition decompose_at(const ControlPoint& point) const;

  int dimension() const { return dimension_; }
  int control_dimension() const { return control_dimension_; }
  const DegeneracySignature& signature() const { return signature_; }
  double gap_tolerance() const { return gap_tol_; }

  HamiltonianFamily with_gauge(GaugeChart chart) const;
  bool has_gauge() const { return chart_.has_value(); }
  const GaugeChart& gauge() const { return *chart_; }

 private:
  int dimension_;
  int control_dimension_;
  DegeneracySignature signature_;
  Evaluator evaluator_;
  double gap_tol_;
  std::optional<GaugeChart> chart_;
};

struct IsoDegeneracyReport {
  bool iso_degenerate = true;
  double min_gap = 0.0;
  std::optional<std::size_t> first_failure;  // index into the queried points
  std::string message;
};

IsoDegeneracyReport check_iso_degenerate(const HamiltonianFamily& family,
                                         const std::vector<ControlPoint>& points);

/// N^2 - sum n_i^2, plus R when the free eigenvalues are counted too.
int orbit_dimension(const DegeneracySignature& signature, bool include_eigenvalues);

using UnitaryMap = std::function<Matrix(const ControlPoint&)>;
using UnitaryJacobian = std::function<std::vector<Matrix>(const ControlPoint&)>;

/// Isospectral family lambda -> X(lambda) H0 X(lambda)†.
struct OrbitFamily {
  Matrix base_hamiltonian;
  SpectralDecomposition base_spectrum;
  UnitaryMap generator;
  HamiltonianFamily family;
};

/// Builds the orbit family of h0. When a Jacobian of the generator is given the
/// family carries the gauge chart Psi_l = X(lambda) E_l, with E_l the level
/// frames of h0.
OrbitFamily make_orbit_family(const Matrix& h0, UnitaryMap generator, const ControlPoint& base,
                              UnitaryJacobian jacobian = {}, double gap_tol = kDefaultGapTol);

/// f(H) by spectral calculus, merging the chosen levels into one eigenvalue E.
Matrix degenerate_function_lift(const Matrix& hamiltonian, const std::function<double(double)>& f,
                                double target, const std::vector<int>& levels,
                                double gap_tol = kDefaultGapTol);

}  // namespace holo

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

#include "holo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "holo/error.hpp"
#include "holo/loops.hpp"

namespace holo {
namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kGeneratorTol = 1e-10;

std::string describe(const ControlPoint& point) {
  std::ostringstream out;
  out << '(';
  for (Eigen::Index i = 0; i < point.size(); ++i) out << (i ? ", " : "") << point(i);
  out << ')';
  return out.str();
}

double entry_scale(const Matrix& m) { return m.size() ? std::max(1.0, m.cwiseAbs().maxCoeff()) : 1.0; }

}  // namespace

DegeneracySignature::DegeneracySignature(std::vector<int> multiplicities)
    : multiplicities_(std::move(multiplicities)) {
  if (multiplicities_.empty()) throw Error(ErrorKind::invalid_input, "signature needs at least one level");
  for (int n : multiplicities_)
    if (n < 1) throw Error(ErrorKind::invalid_input, "signature multiplicities must be >= 1");
}

int DegeneracySignature::dimension() const {
  return std::accumulate(multiplicities_.begin(), multiplicities_.end(), 0);
}

std::string to_string(const DegeneracySignature& signature) {
  std::ostringstream out;
  out << '(';
  for (int l = 0; l < signature.levels(); ++l) out << (l ? "," : "") << signature.multiplicity(l);
  out << ')';
  return out.str();
}

DegeneracySignature SpectralDecomposition::signature() const {
  std::vector<int> n;
  n.reserve(frames.size());
  for (const auto& f : frames) n.push_back(static_cast<int>(f.cols()));
  return DegeneracySignature(std::move(n));
}

double SpectralDecomposition::min_gap() const {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index l = 1; l < eigenvalues.size(); ++l) gap = std::min(gap, eigenvalues(l) - eigenvalues(l - 1));
  return gap;
}

SpectralDecomposition decompose(const Matrix& hamiltonian, double gap_tol) {
  if (!(gap_tol > 0.0)) throw Error(ErrorKind::invalid_input, "gap tolerance must be positive");
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0)
    throw Error(ErrorKind::invalid_input, "Hamiltonian must be a non-empty square matrix");
  if (!hamiltonian.allFinite()) throw Error(ErrorKind::invalid_input, "Hamiltonian has non-finite entries");
  if (hermiticity_defect(hamiltonian) > kHermitianTol * entry_scale(hamiltonian))
    throw Error(ErrorKind::invalid_input, "Hamiltonian is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(hamiltonian));
  const Eigen::VectorXd& values = eig.eigenvalues();
  const Matrix& vectors = eig.eigenvectors();
  const Eigen::Index n = values.size();
  const double threshold = gap_tol * std::max(1.0, values.cwiseAbs().maxCoeff());

  std::vector<Eigen::Index> starts{0};
  for (Eigen::Index i = 1; i < n; ++i) {
    const double gap = values(i) - values(i - 1);
    if (gap >= threshold) {
      starts.push_back(i);
    } else if (gap > 0.1 * threshold) {
      std::ostringstream msg;
      msg << "eigenvalue gap " << gap << " lies between " << 0.1 * threshold << " and " << threshold;
      throw Error(ErrorKind::degeneracy_ambiguity, msg.str());
    }
  }
  starts.push_back(n);

  SpectralDecomposition out;
  out.spectrum = values;
  const auto levels = static_cast<Eigen::Index>(starts.size() - 1);
  out.eigenvalues.resize(levels);
  for (Eigen::Index l = 0; l < levels; ++l) {
    const Eigen::Index begin = starts[static_cast<std::size_t>(l)];
    const Eigen::Index count = starts[static_cast<std::size_t>(l) + 1] - begin;
    out.eigenvalues(l) = values.segment(begin, count).mean();
    Matrix frame = vectors.middleCols(begin, count);
    out.projectors.push_back(frame * frame.adjoint());
    out.frames.push_back(std::move(frame));
  }
  return out;
}

HamiltonianFamily::HamiltonianFamily(int dimension, int control_dimension, DegeneracySignature signature,
                                     Evaluator evaluator, double gap_tol)
    : dimension_(dimension),
      control_dimension_(control_dimension),
      signature_(std::move(signature)),
      evaluator_(std::move(evaluator)),
      gap_tol_(gap_tol) {
  if (dimension_ < 1 || control_dimension_ < 1)
    throw Error(ErrorKind::invalid_input, "family dimensions must be positive");
  if (signature_.dimension() != dimension_)
    throw Error(ErrorKind::invalid_input, "signature does not add up to the Hilbert-space dimension");
  if (!evaluator_) throw Error(ErrorKind::invalid_input, "family has no evaluator");
  if (!(gap_tol_ > 0.0)) throw Error(ErrorKind::invalid_input, "gap tolerance must be positive");
}

Matrix HamiltonianFamily::operator()(const ControlPoint& point) const {
  require_finite(point);
  if (point.size() != control_dimension_)
    throw Error(ErrorKind::invalid_input, "control point has wrong dimension " + describe(point));
  Matrix h = evaluator_(point);
  if (h.rows() != dimension_ || h.cols() != dimension_)
    throw Error(ErrorKind::invalid_input, "evaluator returned a matrix of the wrong size");
  if (!h.allFinite()) throw Error(ErrorKind::invalid_input, "evaluator returned non-finite entries");
  if (hermiticity_defect(h) > kHermitianTol * entry_scale(h))
    throw Error(ErrorKind::invalid_input, "evaluator returned a non-Hermitian matrix at " + describe(point));
  return hermitian_part(h);
}

SpectralDecomposition HamiltonianFamily::decompose_at(const ControlPoint& point) const {
  SpectralDecomposition d = decompose((*this)(point), gap_tol_);
  if (!(d.signature() == signature_)) {
    throw Error(ErrorKind::degeneracy_mismatch, "signature " + to_string(d.signature()) + " at " +
                                                    describe(point) + ", expected " + to_string(signature_));
  }
  return d;
}

HamiltonianFamily HamiltonianFamily::with_gauge(GaugeChart chart) const {
  if (!chart.frame) throw Error(ErrorKind::invalid_input, "gauge chart has no frame field");
  HamiltonianFamily copy = *this;
  copy.chart_ = std::move(chart);
  return copy;
}

IsoDegeneracyReport check_iso_degenerate(const HamiltonianFamily& family,
                                         const std::vector<ControlPoint>& points) {
  if (points.empty()) throw Error(ErrorKind::invalid_input, "no points to check");
  IsoDegeneracyReport report;
  report.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    SpectralDecomposition d;
    try {
      d = decompose(family(points[i]), family.gap_tolerance());
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " at point " + describe(points[i]));
    }
    report.min_gap = std::min(report.min_gap, d.min_gap());
    if (!(d.signature() == family.signature()) && !report.first_failure) {
      report.iso_degenerate = false;
      report.first_failure = i;
      report.message = "signature " + to_string(d.signature()) + " at " + describe(points[i]);
    }
  }
  return report;
}

int orbit_dimension(const DegeneracySignature& signature, bool include_eigenvalues) {
  const int n = signature.dimension();
  int stabiliser = 0;
  for (int m : signature.multiplicities()) stabiliser += m * m;
  return n * n - stabiliser + (include_eigenvalues ? signature.levels() : 0);
}

OrbitFamily make_orbit_family(const Matrix& h0, UnitaryMap generator, const ControlPoint& base,
                              UnitaryJacobian jacobian, double gap_tol) {
  if (!generator) throw Error(ErrorKind::invalid_generator, "orbit family needs a generator");
  require_finite(base, "orbit base point");
  SpectralDecomposition spectrum = decompose(h0, gap_tol);
  const auto n = static_cast<int>(h0.rows());

  const Matrix x0 = generator(base);
  if (x0.rows() != n || x0.cols() != n || unitarity_defect(x0) > kGeneratorTol)
    throw Error(ErrorKind::invalid_generator, "generator is not unitary at the base point");

  auto checked = [generator](const ControlPoint& point) {
    Matrix x = generator(point);
    if (unitarity_defect(x) > kGeneratorTol)
      throw Error(ErrorKind::invalid_generator, "generator output is not unitary at " + describe(point));
    return x;
  };

  HamiltonianFamily family(
      n, static_cast<int>(base.size()), spectrum.signature(),
      [checked, h0](const ControlPoint& point) -> Matrix {
        const Matrix x = checked(point);
        return x * h0 * x.adjoint();
      },
      gap_tol);

  if (jacobian) {
    auto frames = spectrum.frames;
    GaugeChart chart;
    chart.frame = [checked, frames](const ControlPoint& point, int level) -> Matrix {
      return checked(point) * frames.at(static_cast<std::size_t>(level));
    };
    chart.frame_derivatives = [jacobian, frames](const ControlPoint& point, int level) {
      std::vector<Matrix> out;
      for (const Matrix& dx : jacobian(point)) out.push_back(dx * frames.at(static_cast<std::size_t>(level)));
      return out;
    };
    family = family.with_gauge(std::move(chart));
  }
  return OrbitFamily{h0, std::move(spectrum), std::move(generator), std::move(family)};
}

Matrix degenerate_function_lift(const Matrix& hamiltonian, const std::function<double(double)>& f,
                                double target, const std::vector<int>& levels, double gap_tol) {
  if (!f) throw Error(ErrorKind::invalid_input, "no function to lift");
  const SpectralDecomposition d = decompose(hamiltonian, gap_tol);
  const std::set<int> selected(levels.begin(), levels.end());
  if (selected.empty()) throw Error(ErrorKind::invalid_input, "no levels selected");
  for (int l : selected)
    if (l < 0 || l >= d.signature().levels()) throw Error(ErrorKind::invalid_input, "selected level out of range");

  std::vector<double> values(static_cast<std::size_t>(d.eigenvalues.size()));
  double scale = std::max(1.0, std::abs(target));
  for (Eigen::Index l = 0; l < d.eigenvalues.size(); ++l) {
    values[static_cast<std::size_t>(l)] = f(d.eigenvalues(l));
    scale = std::max(scale, std::abs(values[static_cast<std::size_t>(l)]));
  }
  const double threshold = gap_tol * scale;

  const Eigen::Index n = hamiltonian.rows();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index l = 0; l < d.eigenvalues.size(); ++l) {
    const double v = values[static_cast<std::size_t>(l)];
    const bool chosen = selected.count(static_cast<int>(l)) > 0;
    if (chosen && std::abs(v - target) > threshold) {
      std::ostringstream msg;
      msg << "f maps selected level " << l << " to " << v << ", not " << target;
      throw Error(ErrorKind::invalid_input, msg.str());
    }
    if (!chosen && std::abs(v - target) <= threshold) {
      std::ostringstream msg;
      msg << "f also maps unselected level " << l << " onto " << target;
      throw Error(ErrorKind::unintended_degeneracy, msg.str());
    }
    out += (chosen ? target : v) * d.projectors[static_cast<std::size_t>(l)];
  }
  return out;
}

}  // namespace holo

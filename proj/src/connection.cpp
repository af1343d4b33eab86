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

#include "holo/connection.hpp"

#include <algorithm>
#include <cmath>

#include "holo/error.hpp"
#include "holo/loops.hpp"

namespace holo {
namespace {

constexpr double kTransportFloor = 1e-2;
constexpr double kSmoothnessTol = 1e-6;
constexpr double kGaugeTol = 1e-8;

// Psi and d_mu Psi at a point, in one smooth gauge.
struct LocalFrameField {
  Matrix frame;
  std::vector<Matrix> derivatives;
};

void check_level(const HamiltonianFamily& family, int level) {
  if (level < 0 || level >= family.signature().levels())
    throw Error(ErrorKind::invalid_input, "level index out of range");
}

LocalFrameField numerical_field(const HamiltonianFamily& family, const ControlPoint& point, int level,
                                double step, const std::optional<Frame>& reference) {
  const Frame origin = reference ? *reference : frame_at(family, point, level);
  LocalFrameField field{origin.columns, {}};
  for (Eigen::Index mu = 0; mu < point.size(); ++mu) {
    ControlPoint forward = point;
    ControlPoint backward = point;
    forward(mu) += step;
    backward(mu) -= step;
    const Matrix plus = transport_frame(family, origin, forward).columns;
    const Matrix minus = transport_frame(family, origin, backward).columns;
    field.derivatives.push_back((plus - minus) / (2.0 * step));
  }
  return field;
}

LocalFrameField analytic_field(const HamiltonianFamily& family, const ControlPoint& point, int level,
                               const std::optional<Frame>& reference) {
  if (!family.has_gauge() || !family.gauge().frame_derivatives)
    throw Error(ErrorKind::invalid_input, "family has no analytic gauge chart");
  LocalFrameField field{family.gauge().frame(point, level), family.gauge().frame_derivatives(point, level)};
  if (static_cast<Eigen::Index>(field.derivatives.size()) != point.size())
    throw Error(ErrorKind::invalid_input, "gauge chart returned the wrong number of derivatives");
  if (reference) {
    const Matrix g = field.frame.adjoint() * reference->columns;
    if (unitarity_defect(g) > kGaugeTol)
      throw Error(ErrorKind::invalid_input, "reference frame does not span the chart's eigenspace");
    field.frame = field.frame * g;
    for (auto& d : field.derivatives) d = d * g;
  }
  return field;
}

LocalFrameField local_field(const HamiltonianFamily& family, const ControlPoint& point, int level,
                            double step, Evaluation route, const std::optional<Frame>& reference) {
  check_level(family, level);
  require_finite(point);
  const bool analytic = route == Evaluation::analytic ||
                        (route == Evaluation::automatic && family.has_gauge() &&
                         static_cast<bool>(family.gauge().frame_derivatives));
  if (analytic) return analytic_field(family, point, level, reference);
  const double h = step > 0.0 ? step : default_step(point);
  return numerical_field(family, point, level, h, reference);
}

std::vector<Matrix> connection_components(const LocalFrameField& field) {
  std::vector<Matrix> out;
  out.reserve(field.derivatives.size());
  for (const Matrix& d : field.derivatives) {
    const Matrix raw = field.frame.adjoint() * d;
    const Matrix residue = hermitian_part(raw);
    if (residue.size() && residue.cwiseAbs().maxCoeff() > kSmoothnessTol)
      throw Error(ErrorKind::gauge_smoothness, "connection has a Hermitian residue above tolerance");
    out.push_back(antihermitian_part(raw));
  }
  return out;
}

}  // namespace

CurvatureTensor::CurvatureTensor(ControlPoint point, int level, int block_size, int directions)
    : point_(std::move(point)),
      level_(level),
      block_size_(block_size),
      directions_(directions),
      components_(static_cast<std::size_t>(directions) * static_cast<std::size_t>(directions),
                  Matrix::Zero(block_size, block_size)) {}

void CurvatureTensor::set(int mu, int nu, const Matrix& value) {
  if (mu == nu) throw Error(ErrorKind::invalid_input, "diagonal curvature components are zero");
  components_[index(mu, nu)] = value;
  components_[index(nu, mu)] = -value;
}

std::vector<Matrix> CurvatureTensor::independent_components() const {
  std::vector<Matrix> out;
  for (int mu = 0; mu < directions_; ++mu)
    for (int nu = mu + 1; nu < directions_; ++nu) out.push_back((*this)(mu, nu));
  return out;
}

double default_step(const ControlPoint& point) { return 1e-4 * (1.0 + point.norm()); }

Frame frame_at(const HamiltonianFamily& family, const ControlPoint& point, int level) {
  check_level(family, level);
  const SpectralDecomposition d = family.decompose_at(point);
  if (family.has_gauge()) return Frame{point, level, family.gauge().frame(point, level)};
  return Frame{point, level, d.frames[static_cast<std::size_t>(level)]};
}

Frame transport_frame(const HamiltonianFamily& family, const Frame& frame, const ControlPoint& next) {
  check_level(family, frame.level);
  if (next.size() == frame.point.size() && next == frame.point) return frame;
  const SpectralDecomposition d = family.decompose_at(next);
  const Matrix projected = d.projectors[static_cast<std::size_t>(frame.level)] * frame.columns;
  double smallest = 0.0;
  Matrix columns = polar_unitary(projected, &smallest);
  if (smallest < kTransportFloor)
    throw Error(ErrorKind::transport_breakdown, "projected frame lost rank (smallest singular value " +
                                                    std::to_string(smallest) + ")");
  return Frame{next, frame.level, std::move(columns)};
}

ConnectionSample connection_at(const HamiltonianFamily& family, const ControlPoint& point, int level,
                               double step, Evaluation route, const std::optional<Frame>& reference) {
  const LocalFrameField field = local_field(family, point, level, step, route, reference);
  return ConnectionSample{point, level, connection_components(field)};
}

CurvatureTensor curvature_at(const HamiltonianFamily& family, const ControlPoint& point, int level,
                             double step, Evaluation route, const std::optional<Frame>& reference) {
  const LocalFrameField field = local_field(family, point, level, step, route, reference);
  const std::vector<Matrix> a = connection_components(field);
  const auto d = static_cast<int>(a.size());
  const auto n = static_cast<int>(field.frame.cols());
  CurvatureTensor out(point, level, n, d);
  // d_nu A_mu - d_mu A_nu = (d_nu Psi)† d_mu Psi - (d_mu Psi)† d_nu Psi; the
  // second derivatives of Psi cancel.
  for (int mu = 0; mu < d; ++mu) {
    for (int nu = mu + 1; nu < d; ++nu) {
      const Matrix& dmu = field.derivatives[static_cast<std::size_t>(mu)];
      const Matrix& dnu = field.derivatives[static_cast<std::size_t>(nu)];
      const Matrix curl = dnu.adjoint() * dmu - dmu.adjoint() * dnu;
      out.set(mu, nu, curl - commutator(a[static_cast<std::size_t>(mu)], a[static_cast<std::size_t>(nu)]));
    }
  }
  return out;
}

SpanResult span_dimension(const std::vector<Matrix>& generators, int block_size, double threshold) {
  const int n = block_size;
  if (n < 1) throw Error(ErrorKind::invalid_input, "block size must be positive");
  const int real_dim = n * n;
  if (generators.empty()) return SpanResult{0, false};
  // Coordinates of an anti-Hermitian matrix: Im of the diagonal, Re and Im of
  // the strict upper triangle.
  Eigen::MatrixXd coords(real_dim, static_cast<Eigen::Index>(generators.size()));
  for (std::size_t c = 0; c < generators.size(); ++c) {
    const Matrix& g = generators[c];
    if (g.rows() != n || g.cols() != n) throw Error(ErrorKind::invalid_input, "generator has wrong size");
    Eigen::Index r = 0;
    for (int i = 0; i < n; ++i) coords(r++, static_cast<Eigen::Index>(c)) = g(i, i).imag();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        coords(r++, static_cast<Eigen::Index>(c)) = g(i, j).real();
        coords(r++, static_cast<Eigen::Index>(c)) = g(i, j).imag();
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coords);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cut = threshold * std::max(1.0, s.size() ? s(0) : 0.0);
  int dimension = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++dimension;
  return SpanResult{dimension, dimension == real_dim};
}

SpanResult irreducibility_dimension(const CurvatureTensor& curvature, double threshold) {
  return span_dimension(curvature.independent_components(), curvature.block_size(), threshold);
}

}  // namespace holo

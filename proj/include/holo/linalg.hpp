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

// Dense linear-algebra kernels shared by every module. Everything here is a
// free function over Eigen expressions and is templated on the scalar type of
// its argument, so the same kernels serve std::complex<double> and
// std::complex<long double> matrices.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace holo {

using Real = double;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using ControlPoint = Eigen::VectorXd;

template <typename Derived>
using PlainMatrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename DerivedA, typename DerivedB>
PlainMatrix<DerivedA> commutator(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
  return a * b - b * a;
}

template <typename Derived>
PlainMatrix<Derived> hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  return (a + a.adjoint()) / RealOf<Derived>(2);
}

template <typename Derived>
PlainMatrix<Derived> antihermitian_part(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()) / RealOf<Derived>(2);
}

/// Largest entrywise deviation of `a` from being Hermitian.
template <typename Derived>
RealOf<Derived> hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return RealOf<Derived>(0);
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Largest entrywise deviation of a†a from the identity. Works for isometries
/// (tall matrices with orthonormal columns) as well as square unitaries.
template <typename Derived>
RealOf<Derived> unitarity_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return RealOf<Derived>(0);
  const PlainMatrix<Derived> gram = a.adjoint() * a;
  return (gram - PlainMatrix<Derived>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

template <typename Derived>
RealOf<Derived> spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return RealOf<Derived>(0);
  Eigen::JacobiSVD<PlainMatrix<Derived>> svd(a.eval());
  return svd.singularValues()(0);
}

/// Unitary (isometric, for tall input) factor of the polar decomposition
/// a = W P. The smallest singular value of `a` is written to `min_singular`
/// when requested; callers use it to detect rank loss.
template <typename Derived>
PlainMatrix<Derived> polar_unitary(const Eigen::MatrixBase<Derived>& a,
                                   RealOf<Derived>* min_singular = nullptr) {
  Eigen::JacobiSVD<PlainMatrix<Derived>> svd(a.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (min_singular != nullptr) {
    const auto& s = svd.singularValues();
    *min_singular = s.size() > 0 ? s(s.size() - 1) : RealOf<Derived>(0);
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Frobenius distance, optionally minimised over a global phase. The optimal
/// phase is arg tr(b† a); the norm is then taken directly rather than through
/// sqrt(2n - 2|tr|), which loses half the digits near zero.
template <typename DerivedA, typename DerivedB>
RealOf<DerivedA> unitary_distance(const Eigen::MatrixBase<DerivedA>& a,
                                  const Eigen::MatrixBase<DerivedB>& b, bool phase_invariant) {
  using R = RealOf<DerivedA>;
  if (!phase_invariant) return (a - b).norm();
  const auto overlap = (b.adjoint() * a).trace();
  const R magnitude = std::abs(overlap);
  if (magnitude == R(0)) return (a - b).norm();
  return (a - (overlap / magnitude) * b).norm();
}

/// Exponential of an anti-Hermitian matrix g, kept in diagonalised form so
/// that Fréchet derivatives d/ds exp(g + s e) at s = 0 come at the cost of
/// two matrix products (Daleckii-Krein formula).
template <typename Scalar>
class SkewExponential {
 public:
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RealType = typename Eigen::NumTraits<Scalar>::Real;

  template <typename Derived>
  explicit SkewExponential(const Eigen::MatrixBase<Derived>& g) {
    // g = i K with K Hermitian; diagonalise K.
    const MatrixType k = hermitian_part((Scalar(0, -1) * g).eval());
    Eigen::SelfAdjointEigenSolver<MatrixType> eig(k);
    basis_ = eig.eigenvectors();
    angles_ = eig.eigenvalues();
    phases_.resize(angles_.size());
    for (Eigen::Index j = 0; j < angles_.size(); ++j) phases_(j) = std::polar(RealType(1), angles_(j));
    value_ = basis_ * phases_.asDiagonal() * basis_.adjoint();
  }

  const MatrixType& value() const { return value_; }

  template <typename Derived>
  MatrixType derivative(const Eigen::MatrixBase<Derived>& direction) const {
    MatrixType rotated = basis_.adjoint() * direction * basis_;
    for (Eigen::Index j = 0; j < rotated.rows(); ++j) {
      for (Eigen::Index k = 0; k < rotated.cols(); ++k) {
        const RealType half_gap = (angles_(j) - angles_(k)) / RealType(2);
        const RealType mid = (angles_(j) + angles_(k)) / RealType(2);
        const RealType sinc =
            std::abs(half_gap) < RealType(1e-8) ? RealType(1) - half_gap * half_gap / RealType(6)
                                                : std::sin(half_gap) / half_gap;
        rotated(j, k) *= std::polar(sinc, mid);
      }
    }
    return basis_ * rotated * basis_.adjoint();
  }

 private:
  MatrixType basis_;
  Eigen::Matrix<RealType, Eigen::Dynamic, 1> angles_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phases_;
  MatrixType value_;
};

template <typename Derived>
PlainMatrix<Derived> expm_skew(const Eigen::MatrixBase<Derived>& g) {
  return SkewExponential<typename Derived::Scalar>(g).value();
}

}  // namespace holo

// Copyright 2026 The grassquant Authors. All Rights Reserved.
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

#ifndef GRASSQUANT_PLANE_HPP_
#define GRASSQUANT_PLANE_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grassquant/errors.hpp"
#include "grassquant/field.hpp"
#include "grassquant/random.hpp"

namespace grassquant {

inline constexpr double kOrthonormalityTolerance = 1e-10;
inline constexpr double kRankTolerance = 1e-10;

/// A point of the Grassmann manifold G_{n,p}: the column span of an n x p
/// matrix with orthonormal columns. Two planes are the same point when their
/// chordal distance is zero, whatever their bases look like.
template <FieldScalar S>
class Plane {
 public:
  using Scalar = S;
  using MatrixType = Matrix<S>;

  /// Takes ownership of an orthonormal basis. Throws ParameterError when
  /// basis^H basis differs from the identity by more than 1e-10 in any entry.
  explicit Plane(MatrixType basis) : basis_(std::move(basis)) {
    detail::require(basis_.cols() >= 1 && basis_.cols() <= basis_.rows(),
                    "plane basis must be n x p with 1 <= p <= n");
    const MatrixType gram = basis_.adjoint() * basis_;
    const double defect =
        (gram - MatrixType::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
    detail::require(defect <= kOrthonormalityTolerance,
                    "plane basis columns are not orthonormal (defect " + std::to_string(defect) + ")");
  }

  int n() const noexcept { return static_cast<int>(basis_.rows()); }
  int p() const noexcept { return static_cast<int>(basis_.cols()); }
  static constexpr Field field() noexcept { return field_of<S>; }
  const MatrixType& basis() const noexcept { return basis_; }

 private:
  struct Trusted {};
  Plane(MatrixType basis, Trusted) : basis_(std::move(basis)) {}

  template <FieldScalar T>
  friend Plane<T> orthonormalize(const Matrix<T>& m);

  MatrixType basis_;
};

namespace detail {

inline void require_dimensions(int n, int p) {
  require(n >= 1, "ambient dimension n must be positive");
  require(p >= 1 && p <= n, "plane dimension p must satisfy 1 <= p <= n (got n=" +
                                std::to_string(n) + ", p=" + std::to_string(p) + ")");
}

template <FieldScalar S>
void require_same_manifold(const Plane<S>& a, const Plane<S>& b) {
  require(a.n() == b.n() && a.p() == b.p(), "planes live on different Grassmann manifolds");
}

}  // namespace detail

/// Orthonormal basis of the column span of m via Householder QR.
/// Throws DegenerateInputError when some diagonal entry of R falls below
/// 1e-10 relative to the largest column norm of m.
template <FieldScalar S>
Plane<S> orthonormalize(const Matrix<S>& m) {
  detail::require_dimensions(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  const Eigen::HouseholderQR<Matrix<S>> qr(m);
  const double scale = m.colwise().norm().maxCoeff();
  const auto& packed = qr.matrixQR();
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    if (!(std::abs(packed(i, i)) > kRankTolerance * scale)) {
      throw DegenerateInputError("matrix is numerically rank deficient (column " +
                                 std::to_string(i) + ")");
    }
  }
  Matrix<S> q = qr.householderQ() * Matrix<S>::Identity(m.rows(), m.cols());
  return Plane<S>(std::move(q), typename Plane<S>::Trusted{});
}

/// Draws a plane from the invariant (Haar) measure: an i.i.d. Gaussian n x p
/// matrix has an orthogonally/unitarily invariant column span.
template <FieldScalar S>
Plane<S> sample_uniform_plane(int n, int p, Rng& rng) {
  detail::require_dimensions(n, p);
  for (;;) {
    try {
      return orthonormalize<S>(gaussian_matrix<S>(n, p, rng));
    } catch (const DegenerateInputError&) {
      // Probability zero event; redraw.
    }
  }
}

/// Plane spanned by the first p standard basis vectors.
template <FieldScalar S>
Plane<S> coordinate_plane(int n, int p) {
  detail::require_dimensions(n, p);
  return Plane<S>(Matrix<S>::Identity(n, p));
}

struct PrincipalAngles {
  std::vector<double> angles;  // descending, each in [0, pi/2]
};

template <FieldScalar S>
PrincipalAngles principal_angles(const Plane<S>& a, const Plane<S>& b) {
  detail::require_same_manifold(a, b);
  const Matrix<S> cross = a.basis().adjoint() * b.basis();
  const Eigen::JacobiSVD<Matrix<S>> svd(cross);
  PrincipalAngles out;
  out.angles.reserve(static_cast<std::size_t>(a.p()));
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    out.angles.push_back(std::acos(std::clamp(svd.singularValues()(i), 0.0, 1.0)));
  std::sort(out.angles.begin(), out.angles.end(), std::greater<>());
  return out;
}

/// Squared chordal distance, sum of sin^2 of the principal angles.
///
/// Evaluated as the squared Frobenius norm of the part of b orthogonal to a,
/// ||(I - A A^H) B||_F^2, which equals sum(1 - sigma_i^2) without the
/// cancellation that 1 - sigma^2 suffers for nearly coincident planes.
template <FieldScalar S>
double chordal_distance_sq(const Plane<S>& a, const Plane<S>& b) {
  detail::require_same_manifold(a, b);
  const Matrix<S> residual = b.basis() - a.basis() * (a.basis().adjoint() * b.basis());
  return std::min(residual.squaredNorm(), static_cast<double>(a.p()));
}

template <FieldScalar S>
double chordal_distance(const Plane<S>& a, const Plane<S>& b) {
  return std::sqrt(chordal_distance_sq(a, b));
}

/// Haar-distributed n x n orthogonal or unitary matrix: QR of a Gaussian
/// matrix with the phases of diag(R) folded back into Q.
template <FieldScalar S>
Matrix<S> sample_unitary(int n, Rng& rng) {
  detail::require(n >= 1, "unitary dimension must be positive");
  const Eigen::HouseholderQR<Matrix<S>> qr(gaussian_matrix<S>(n, n, rng));
  Matrix<S> q = qr.householderQ();
  for (int i = 0; i < n; ++i) {
    const S d = qr.matrixQR()(i, i);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(i) *= d / mag;
  }
  return q;
}

}  // namespace grassquant

#endif  // GRASSQUANT_PLANE_HPP_

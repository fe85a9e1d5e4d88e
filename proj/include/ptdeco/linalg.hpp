#pragma once

// Dense complex linear algebra for small Hilbert spaces.
//
// Conventions used throughout the library:
//   * every matrix norm is the Frobenius norm (Eigen's `.norm()`);
//   * composite spaces are ordered system-major: index = s * dim_B + b.

#include <algorithm>
#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "ptdeco/error.hpp"

namespace ptdeco {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kMinEigenOverlap = 1e-8;
inline constexpr Index kKronDimCap = Index{1} << 16;

/// Right eigenvectors are unit-norm columns; `left` holds the dual rows so that
/// left * right == I. `overlaps(k)` is |<l_k|r_k>| for unit-normalized l_k and
/// r_k, i.e. the reciprocal eigenvalue condition number.
struct EigSystem {
  CVector values;
  CMatrix right;
  CMatrix left;
  RVector overlaps;
};

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, std::string_view what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be a non-empty square matrix");
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, std::string_view what) {
  if (!a.allFinite()) {
    throw Error(ErrorCode::Overflow, std::string(what) + " has non-finite entries");
  }
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).norm();
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = a * b - b * a;
  return out;
}

/// A is hermitian within tol relative to max(1, ||A||).
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = kDefaultTol) {
  return a.rows() == a.cols() &&
         hermiticity_defect(a) <= tol * std::max(1.0, static_cast<double>(a.norm()));
}

/// Kronecker product A (x) B. Throws Overflow when either result dimension
/// exceeds `cap`.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
          Index cap = kKronDimCap) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  const Index rows = a.rows() * b.rows();
  const Index cols = a.cols() * b.cols();
  if (rows > cap || cols > cap) {
    throw Error(ErrorCode::Overflow, "Kronecker product dimension exceeds cap");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(rows, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = Scalar(a(i, j)) * b.template cast<Scalar>();
    }
  }
  return out;
}

/// tr_B of an operator on the (dim_s * dim_b)-dimensional system-major space.
template <typename Derived>
auto partial_trace_env(const Eigen::MatrixBase<Derived>& m, Index dim_s, Index dim_b) {
  using Scalar = typename Derived::Scalar;
  if (dim_s <= 0 || dim_b <= 0 || m.rows() != dim_s * dim_b || m.cols() != dim_s * dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "partial trace: matrix is not (dim_S*dim_B)^2");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim_s, dim_s);
  for (Index s = 0; s < dim_s; ++s) {
    for (Index q = 0; q < dim_s; ++q) {
      out(s, q) = m.block(s * dim_b, q * dim_b, dim_b, dim_b).trace();
    }
  }
  return out;
}

/// General (non-hermitian) eigendecomposition with a biorthonormal left basis.
/// Eigenvalues sorted by real part, then imaginary part. Each right vector is
/// unit-norm with its first largest-modulus component real positive.
/// Throws NonDiagonalizable when any overlap falls below `min_overlap`.
EigSystem eig_general(const CMatrix& a, double tol = kDefaultTol,
                      double min_overlap = kMinEigenOverlap);

/// Matrix exponential by Pade scaling-and-squaring.
CMatrix mat_exp(const CMatrix& a);

/// Principal square root of a hermitian positive semidefinite matrix.
/// Eigenvalues in [-tol*scale, tol*scale] are clamped to zero, where
/// scale = max(1, ||A||).
CMatrix mat_sqrt_psd(const CMatrix& a, double tol = kDefaultTol);

/// exp(-i h t) for a fixed hermitian h, from one cached eigendecomposition.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const CMatrix& h, double tol = kDefaultTol);

  CMatrix at(double t) const;
  const RVector& energies() const { return energies_; }
  const CMatrix& eigenvectors() const { return vectors_; }

 private:
  RVector energies_;
  CMatrix vectors_;
};

CMatrix identity(Index dim);
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();

}  // namespace ptdeco

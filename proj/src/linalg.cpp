#include "ptdeco/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace ptdeco {

namespace {

// Unit norm, first component of largest modulus made real positive.
void fix_gauge(Eigen::Ref<CVector> v) {
  v.normalize();
  Index pivot = 0;
  double best = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    // Ties within roundoff go to the first index.
    if (std::abs(v(i)) > best * (1.0 + 1e-12)) {
      best = std::abs(v(i));
      pivot = i;
    }
  }
  if (best > 0.0) v *= std::conj(v(pivot)) / best;
}

}  // namespace

EigSystem eig_general(const CMatrix& a, double tol, double min_overlap) {
  require_square(a, "eig_general input");
  require_finite(a, "eig_general input");
  const Index n = a.rows();

  Eigen::ComplexEigenSolver<CMatrix> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonDiagonalizable, "complex eigensolver did not converge");
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const CVector& raw = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    if (raw(i).real() != raw(j).real()) return raw(i).real() < raw(j).real();
    return raw(i).imag() < raw(j).imag();
  });

  EigSystem out;
  out.values.resize(n);
  out.right.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.values(k) = raw(order[static_cast<std::size_t>(k)]);
    out.right.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    fix_gauge(out.right.col(k));
  }

  Eigen::FullPivLU<CMatrix> lu(out.right);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::NonDiagonalizable, "eigenvectors are linearly dependent");
  }
  out.left = lu.inverse();
  if (!out.left.allFinite()) {
    throw Error(ErrorCode::NonDiagonalizable, "eigenvector matrix is numerically singular");
  }

  out.overlaps.resize(n);
  for (Index k = 0; k < n; ++k) {
    out.overlaps(k) = 1.0 / out.left.row(k).norm();
    if (out.overlaps(k) < min_overlap) {
      throw Error(ErrorCode::NonDiagonalizable,
                  "left/right eigenvector overlap " + std::to_string(out.overlaps(k)) +
                      " below threshold (exceptional point)");
    }
  }

  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  for (Index k = 0; k < n; ++k) {
    const double residual = (a * out.right.col(k) - out.values(k) * out.right.col(k)).norm();
    if (residual > tol * scale) {
      throw Error(ErrorCode::NonDiagonalizable, "eigenpair residual exceeds tolerance");
    }
  }
  return out;
}

CMatrix mat_exp(const CMatrix& a) {
  require_square(a, "mat_exp input");
  require_finite(a, "mat_exp input");
  CMatrix out = a.exp();
  require_finite(out, "mat_exp result");
  return out;
}

CMatrix mat_sqrt_psd(const CMatrix& a, double tol) {
  require_square(a, "mat_sqrt_psd input");
  const double scale = std::max(1.0, a.norm());
  if (hermiticity_defect(a) > tol * scale) {
    throw Error(ErrorCode::NotHermitian, "mat_sqrt_psd input is not hermitian");
  }
  const CMatrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  RVector values = es.eigenvalues();
  if (values.minCoeff() < -tol * scale) {
    throw Error(ErrorCode::NegativeEigenvalue,
                "mat_sqrt_psd input has eigenvalue " + std::to_string(values.minCoeff()));
  }
  for (Index i = 0; i < values.size(); ++i) {
    values(i) = values(i) < tol * scale ? 0.0 : std::sqrt(values(i));
  }
  return es.eigenvectors() * values.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

HermitianPropagator::HermitianPropagator(const CMatrix& h, double tol) {
  require_square(h, "propagator generator");
  require_finite(h, "propagator generator");
  if (!is_hermitian(h, tol)) {
    throw Error(ErrorCode::NotHermitian, "propagator generator is not hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

CMatrix HermitianPropagator::at(double t) const {
  const CVector phases =
      (energies_.cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

CMatrix identity(Index dim) { return CMatrix::Identity(dim, dim); }

CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix sigma_y() {
  CMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

CMatrix sigma_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace ptdeco

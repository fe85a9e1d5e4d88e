#include "ptdeco/pt_core.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace ptdeco {

namespace {

void require_same_dim(const CMatrix& a, const CMatrix& b, std::string_view what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": dimensions differ");
  }
}

// Components below roundoff of ||H|| are zeroed so that sorting conjugate pairs
// and real spectra is reproducible.
Complex snap(Complex z, double floor) {
  return {std::abs(z.real()) <= floor ? 0.0 : z.real(), std::abs(z.imag()) <= floor ? 0.0 : z.imag()};
}

void sort_values(CVector& values) {
  std::sort(values.data(), values.data() + values.size(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

}  // namespace

PtHamiltonian::PtHamiltonian(CMatrix h, CMatrix parity, double tol)
    : h_(std::move(h)), parity_(std::move(parity)) {
  require_square(h_, "PT Hamiltonian");
  require_finite(h_, "PT Hamiltonian");
  require_same_dim(h_, parity_, "PtHamiltonian");
  if (!is_hermitian(parity_, tol) ||
      (parity_ * parity_ - identity(dim())).norm() > tol * std::sqrt(static_cast<double>(dim()))) {
    throw Error(ErrorCode::InvalidParity, "parity must be a hermitian involution");
  }
}

std::string_view to_string(SpectralPhase phase) noexcept {
  switch (phase) {
    case SpectralPhase::Real: return "Real";
    case SpectralPhase::ComplexPairs: return "ComplexPairs";
    case SpectralPhase::ExceptionalPoint: return "ExceptionalPoint";
  }
  return "Unknown";
}

bool check_pt_symmetry(const PtHamiltonian& ham, double tol) {
  const CMatrix& h = ham.h();
  const CMatrix& p = ham.parity();
  const double bound = tol * std::max(h.norm(), std::numeric_limits<double>::min());
  const CMatrix h_dag = h.adjoint();
  const bool parity_ok = (p * h * p - h_dag).norm() <= bound;
  const bool time_ok = (h.conjugate() - h_dag).norm() <= bound;
  return parity_ok && time_ok;
}

SpectrumReport spectrum(const PtHamiltonian& ham, double eps_spec) {
  const double norm = ham.h().norm();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * norm;
  SpectrumReport report;
  try {
    const EigSystem eig = eig_general(ham.h());
    report.eigenvalues = eig.values;
    double max_imag = 0.0;
    for (Index k = 0; k < eig.values.size(); ++k) {
      max_imag = std::max(max_imag, std::abs(eig.values(k).imag()));
    }
    report.classification =
        max_imag <= eps_spec * norm ? SpectralPhase::Real : SpectralPhase::ComplexPairs;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonDiagonalizable) throw;
    report.eigenvalues = Eigen::ComplexEigenSolver<CMatrix>(ham.h(), false).eigenvalues();
    report.classification = SpectralPhase::ExceptionalPoint;
  }
  for (Index k = 0; k < report.eigenvalues.size(); ++k) {
    report.eigenvalues(k) = snap(report.eigenvalues(k), floor);
  }
  sort_values(report.eigenvalues);
  return report;
}

BiorthoSystem biorthonormal_basis(const PtHamiltonian& ham, double tol) {
  const SpectrumReport report = spectrum(ham);
  if (report.classification == SpectralPhase::ExceptionalPoint) {
    throw Error(ErrorCode::ExceptionalPoint, "Hamiltonian is not diagonalizable");
  }
  if (report.classification == SpectralPhase::ComplexPairs) {
    throw Error(ErrorCode::BrokenPhase, "spectrum is not real");
  }

  const EigSystem eig = eig_general(ham.h(), tol);
  const Index n = ham.dim();
  const double scale = std::max(1.0, ham.h().norm());

  BiorthoSystem basis;
  basis.energies = eig.values.real();
  for (Index k = 1; k < n; ++k) {
    if (basis.energies(k) - basis.energies(k - 1) <= 1e-8 * scale) {
      throw Error(ErrorCode::DegenerateSpectrum, "spectrum must be non-degenerate");
    }
  }
  basis.psi = eig.right;
  basis.phi = eig.left.adjoint();
  basis.theta.resize(static_cast<std::size_t>(n));

  const CMatrix& p = ham.parity();
  for (Index k = 0; k < n; ++k) {
    // P|psi> is an eigenvector of H^dagger, hence P|psi> = lambda |phi> with
    // lambda = <psi|P|psi> real.
    const Complex lambda = basis.psi.col(k).dot(p * basis.psi.col(k));
    if (std::abs(lambda) <= tol || std::abs(lambda.imag()) > kPhaseSnapTol * std::abs(lambda)) {
      throw Error(ErrorCode::PhaseNotReal, "P|psi_n> is not a real multiple of |phi_n>");
    }
    const double root = std::sqrt(std::abs(lambda));
    basis.psi.col(k) /= root;
    basis.phi.col(k) *= root;

    const double theta = std::arg(basis.phi.col(k).dot(p * basis.psi.col(k)));
    if (std::abs(theta) <= kPhaseSnapTol) {
      basis.theta[static_cast<std::size_t>(k)] = 0.0;
    } else if (std::numbers::pi - std::abs(theta) <= kPhaseSnapTol) {
      basis.theta[static_cast<std::size_t>(k)] = std::numbers::pi;
    } else {
      throw Error(ErrorCode::PhaseNotReal, "theta_n is neither 0 nor pi");
    }
  }
  return basis;
}

CMatrix charge_conjugation(const BiorthoSystem& basis, const CMatrix& parity) {
  if (parity.rows() != basis.psi.rows() || parity.cols() != basis.psi.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "charge conjugation: parity dimension");
  }
  return basis.psi * basis.psi.adjoint() * parity;
}

CanonicalMap canonical_transform(const PtHamiltonian& ham, double tol, double max_condition) {
  const BiorthoSystem basis = biorthonormal_basis(ham, tol);
  // V has rows <phi_n|, so V^dagger V = sum_n |phi_n><phi_n|.
  const CMatrix metric = basis.phi * basis.phi.adjoint();
  const CMatrix t = mat_sqrt_psd(metric, tol);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (t + t.adjoint()));
  const RVector s = es.eigenvalues();
  if (s.minCoeff() <= 0.0 || s.maxCoeff() / s.minCoeff() > max_condition) {
    throw Error(ErrorCode::IllConditioned, "canonical transform condition exceeds cap");
  }

  const double log_mean = s.array().log().mean();
  const double gauge = std::exp(log_mean);
  const RVector s_inv = s.cwiseInverse();

  CanonicalMap map;
  map.t = t / gauge;
  map.t_inv = es.eigenvectors() * (s_inv * gauge).cast<Complex>().asDiagonal() *
              es.eigenvectors().adjoint();
  map.condition = s.maxCoeff() / s.minCoeff();
  return map;
}

CMatrix hermitian_representation(const PtHamiltonian& ham, const CanonicalMap& map) {
  require_same_dim(ham.h(), map.t, "hermitian_representation");
  return map.t * ham.h() * map.t_inv;
}

CMatrix map_observable(const CMatrix& observable, const CanonicalMap& map) {
  require_same_dim(observable, map.t, "map_observable");
  return map.t * observable * map.t_inv;
}

CMatrix map_state_back(const CMatrix& varrho, const CanonicalMap& map) {
  require_same_dim(varrho, map.t, "map_state_back");
  return map.t_inv * varrho * map.t;
}

}  // namespace ptdeco

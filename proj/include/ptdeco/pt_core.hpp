#pragma once

// PT-symmetric system Hamiltonians: symmetry checks, biorthonormal spectral
// decomposition, charge conjugation and the hermitizing similarity T.
//
// Time reversal is entrywise complex conjugation, so PT symmetry of H reads
//   P H P = conj(H) = H^dagger.

#include <vector>

#include "ptdeco/linalg.hpp"

namespace ptdeco {

inline constexpr double kSpectralRealityEps = 1e-9;
inline constexpr double kMaxTransformCondition = 1e8;
inline constexpr double kPhaseSnapTol = 1e-6;

/// Non-hermitian system Hamiltonian together with its parity operator.
/// The parity must be a hermitian involution.
class PtHamiltonian {
 public:
  PtHamiltonian(CMatrix h, CMatrix parity, double tol = kDefaultTol);

  const CMatrix& h() const { return h_; }
  const CMatrix& parity() const { return parity_; }
  Index dim() const { return h_.rows(); }

 private:
  CMatrix h_;
  CMatrix parity_;
};

enum class SpectralPhase { Real, ComplexPairs, ExceptionalPoint };

std::string_view to_string(SpectralPhase phase) noexcept;

struct SpectrumReport {
  CVector eigenvalues;
  SpectralPhase classification = SpectralPhase::Real;
};

/// Columns of `psi` are right eigenvectors |psi_n>, columns of `phi` the dual
/// kets |phi_n> (so <phi_n| are the rows of V). Normalized so that
/// P|psi_n> = e^{i theta_n} |phi_n> with theta_n in {0, pi}.
struct BiorthoSystem {
  RVector energies;
  CMatrix psi;
  CMatrix phi;
  std::vector<double> theta;
};

/// Hermitian positive-definite T with det(T) = 1; `condition` is the ratio of
/// its extreme eigenvalues.
struct CanonicalMap {
  CMatrix t;
  CMatrix t_inv;
  double condition = 1.0;
};

bool check_pt_symmetry(const PtHamiltonian& ham, double tol = kDefaultTol);

/// Eigenvalues sorted by real then imaginary part. Real iff
/// max |Im lambda| <= eps_spec * ||H||; ExceptionalPoint when the matrix is
/// not diagonalizable to working precision.
SpectrumReport spectrum(const PtHamiltonian& ham, double eps_spec = kSpectralRealityEps);

BiorthoSystem biorthonormal_basis(const PtHamiltonian& ham, double tol = kDefaultTol);

/// C = sum_n |psi_n><psi_n| P.
CMatrix charge_conjugation(const BiorthoSystem& basis, const CMatrix& parity);

/// T = sqrt(V^dagger V) with the rows of V the duals <phi_n|, rescaled to
/// det(T) = 1. Throws IllConditioned when the condition exceeds the cap.
CanonicalMap canonical_transform(const PtHamiltonian& ham, double tol = kDefaultTol,
                                 double max_condition = kMaxTransformCondition);

/// h_S = T H T^-1.
CMatrix hermitian_representation(const PtHamiltonian& ham, const CanonicalMap& map);

/// o = T O T^-1.
CMatrix map_observable(const CMatrix& observable, const CanonicalMap& map);

/// rho = T^-1 varrho T; hermiticity is generally not preserved.
CMatrix map_state_back(const CMatrix& varrho, const CanonicalMap& map);

}  // namespace ptdeco

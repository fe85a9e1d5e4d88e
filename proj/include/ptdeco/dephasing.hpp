#pragma once

// PT-symmetric qubit H = [[i a, 1], [1, -i a]] (P = sigma_x) coupled by pure
// dephasing to a thermal bosonic bath. Units: hbar = 1.

#include <cmath>
#include <span>
#include <vector>

#include "ptdeco/linalg.hpp"
#include "ptdeco/pt_core.hpp"

namespace ptdeco {

inline constexpr double kDefaultGammaTol = 1e-10;

/// J(w) = j0 * w^(1+mu) * exp(-w / omega_c).
struct SpectralDensity {
  double j0 = 1.0;
  double mu = 0.0;
  double omega_c = 1.0;

  double operator()(double omega) const;
  /// Throws InvalidExponent for mu <= -1 and InvalidArgument for j0 < 0 or omega_c <= 0.
  void validate() const;
};

struct DephasingModel {
  double alpha = 0.0;
  double beta = 1.0;
  SpectralDensity spectral;

  bool unbroken() const { return std::abs(alpha) <= 1.0; }
  /// E_1 = -sqrt(1 - alpha^2); BrokenPhase outside |alpha| <= 1.
  double e1() const;
};

struct QubitEnergies {
  double e1;
  double e2;
};

struct GammaResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

/// Scales applied when assembling the exact state: phase e^{-i phase_scale E1 t}
/// and the caller-supplied decoherence factor. The default is phase_scale = 1.
struct SolutionConvention {
  double phase_scale = 1.0;
};

/// Table of D(t; alpha): rows follow `times`, columns follow `alphas`.
struct DecoherenceTable {
  std::vector<double> alphas;
  std::vector<double> times;
  std::vector<double> gammas;
  Eigen::MatrixXd d;
};

PtHamiltonian qubit_hamiltonian(double alpha);

QubitEnergies qubit_energies(double alpha);

/// T = U^dagger diag(s1, s2) U with s_{1,2} = sqrt(2(1 +- alpha)) and
/// U = [[i, 1], [-i, 1]] / sqrt(2). Not rescaled (T = sqrt(2) I at alpha = 0).
CanonicalMap qubit_transform(double alpha, double max_condition = kMaxTransformCondition);

/// gamma(t) = int_0^inf J(w)/w^2 (1 - cos wt) coth(beta w / 2) dw.
GammaResult gamma_integral(const SpectralDensity& spectral, double beta, double t,
                           double tol = kDefaultGammaTol);
GammaResult gamma_integral(const DephasingModel& model, double t, double tol = kDefaultGammaTol);

/// D(t) = exp(-E1^2 gamma(t)); identically 1 at |alpha| = 1.
double decoherence_function(const DephasingModel& model, double t, double tol = kDefaultGammaTol);

/// exp(-pi j0 (1 - alpha^2) t / beta).
double ohmic_asymptote(double alpha, double j0, double beta, double t);

/// Closed-form qubit state for given E1, t and decoherence factor d; no t = 0
/// consistency check.
CMatrix assemble_exact_state(const CMatrix& varrho0, double e1, double t, double d,
                             SolutionConvention convention = {});

/// Exact reduced state in the hermitian representation (h_S = E1 sigma_x).
/// Throws InconsistentInitialState when the formulas at t = 0 do not
/// reproduce varrho0 within 1e-9, i.e. unless varrho0_11 = 1/2 and
/// Re varrho0_12 = 0.
CMatrix evolve_exact(const DephasingModel& model, const CMatrix& varrho0, double t,
                     double tol = kDefaultGammaTol);

/// Checks the t = 0 self-consistency of the exact solution for varrho0.
void require_consistent_initial_state(const CMatrix& varrho0, double tol = 1e-9);

/// D(t; alpha) for every (t, alpha). gamma(t) is computed once per time point
/// (in parallel over `threads` workers; 0 picks the default) and shared by all
/// alphas.
DecoherenceTable sweep_alpha(std::span<const double> alphas, std::span<const double> times,
                             const SpectralDensity& spectral, double beta,
                             double tol = kDefaultGammaTol, unsigned threads = 0);

/// Worker count: PTDECO_THREADS when set and positive, otherwise hardware concurrency.
unsigned default_thread_count();

}  // namespace ptdeco

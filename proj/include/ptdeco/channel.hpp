#pragma once

// Composite system+environment dynamics and their operator-sum (Kraus)
// representations, in both the hermitian and the PT (left/right) form.

#include <vector>

#include "ptdeco/linalg.hpp"
#include "ptdeco/pt_core.hpp"

namespace ptdeco {

inline constexpr double kDefaultWeightCut = 1e-12;

/// h = h_S (x) I + I (x) H_B + h_I on the system-major product space.
struct CompositeModel {
  CMatrix h_s;
  CMatrix h_b;
  CMatrix h_i;
  Index dim_s = 0;
  Index dim_b = 0;
  bool dephasing = false;

  CMatrix total() const;
};

enum class ChannelKind { Hermitian, Pt };

/// Hermitian kind: Phi[x] = sum_i K_i x K_i^dagger with `ops` = {K_i}.
/// PT kind: Phi[x] = sum_i L_i x R_i with `ops` = {L_i}, `right_ops` = {R_i}.
struct KrausChannel {
  ChannelKind kind = ChannelKind::Hermitian;
  std::vector<CMatrix> ops;
  std::vector<CMatrix> right_ops;
  Index dim = 0;
  /// Environment weight sum_{p_alpha <= weight_cut} p_alpha dropped on extraction.
  double discarded_weight = 0.0;

  /// sum K_i^dagger K_i (hermitian) or sum L_i R_i (PT).
  CMatrix completeness() const;
  double completeness_defect() const;
};

/// Throws NotDensityMatrix unless rho is hermitian, unit-trace and PSD within tol.
void require_density_matrix(const CMatrix& rho, double tol = 1e-10);

CompositeModel build_composite(const CMatrix& h_s, const CMatrix& h_b, const CMatrix& v_s,
                               const CMatrix& v_b, double tol = kDefaultTol);

/// U(t) = exp(-i h t).
CMatrix propagator(const CompositeModel& model, double t);

/// tr_B{ U(t) (varrho_S(0) (x) Omega_B) U(t)^dagger }.
CMatrix reduced_state(const CompositeModel& model, const CMatrix& varrho0_s, const CMatrix& omega_b,
                      double t);

/// K_{alpha,beta} = sqrt(p_alpha) <beta| U(t) |alpha>, ordered by descending
/// p_alpha then ascending beta (standard basis of the environment).
KrausChannel kraus_extract(const CompositeModel& model, const CMatrix& omega_b, double t,
                           double weight_cut = kDefaultWeightCut);

/// L_i = T^-1 K_i T, R_i = T^-1 K_i^dagger T.
KrausChannel pt_kraus(const KrausChannel& channel, const CanonicalMap& map);

CMatrix apply_channel(const KrausChannel& channel, const CMatrix& state);

/// Choi matrix sum_{ij} |i><j| (x) Phi[|i><j|].
CMatrix choi_matrix(const KrausChannel& channel);

/// Choi-matrix eigenvalue test; defined for the hermitian representation only.
bool is_completely_positive(const KrausChannel& channel, double tol = 1e-9);

}  // namespace ptdeco

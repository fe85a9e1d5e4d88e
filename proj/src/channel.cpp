#include "ptdeco/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ptdeco {

CMatrix CompositeModel::total() const {
  return kron(h_s, identity(dim_b)) + kron(identity(dim_s), h_b) + h_i;
}

CMatrix KrausChannel::completeness() const {
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    sum += kind == ChannelKind::Hermitian ? CMatrix(ops[i].adjoint() * ops[i])
                                          : CMatrix(ops[i] * right_ops[i]);
  }
  return sum;
}

double KrausChannel::completeness_defect() const {
  return (completeness() - identity(dim)).norm();
}

void require_density_matrix(const CMatrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw Error(ErrorCode::NotDensityMatrix, "state is not square");
  }
  if (!rho.allFinite() || hermiticity_defect(rho) > tol) {
    throw Error(ErrorCode::NotDensityMatrix, "state is not hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > tol) {
    throw Error(ErrorCode::NotDensityMatrix, "state trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw Error(ErrorCode::NotDensityMatrix, "state has a negative eigenvalue");
  }
}

CompositeModel build_composite(const CMatrix& h_s, const CMatrix& h_b, const CMatrix& v_s,
                               const CMatrix& v_b, double tol) {
  require_square(h_s, "h_S");
  require_square(h_b, "H_B");
  if (v_s.rows() != h_s.rows() || v_s.cols() != h_s.cols() || v_b.rows() != h_b.rows() ||
      v_b.cols() != h_b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "coupling operators do not match their spaces");
  }
  if (!is_hermitian(h_s, tol) || !is_hermitian(h_b, tol) || !is_hermitian(v_s, tol) ||
      !is_hermitian(v_b, tol)) {
    throw Error(ErrorCode::NotHermitian, "composite factors must be hermitian");
  }

  CompositeModel model;
  model.h_s = h_s;
  model.h_b = h_b;
  model.dim_s = h_s.rows();
  model.dim_b = h_b.rows();
  model.h_i = kron(v_s, v_b);
  const CMatrix lifted = kron(h_s, identity(model.dim_b));
  const double scale = std::max(1.0, lifted.norm() * model.h_i.norm());
  model.dephasing = commutator(lifted, model.h_i).norm() <= tol * scale;
  return model;
}

CMatrix propagator(const CompositeModel& model, double t) {
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "time must be finite");
  return mat_exp(Complex(0.0, -t) * model.total());
}

CMatrix reduced_state(const CompositeModel& model, const CMatrix& varrho0_s, const CMatrix& omega_b,
                      double t) {
  require_density_matrix(varrho0_s);
  require_density_matrix(omega_b);
  if (varrho0_s.rows() != model.dim_s || omega_b.rows() != model.dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "initial states do not match the composite");
  }
  const CMatrix u = propagator(model, t);
  const CMatrix evolved = u * kron(varrho0_s, omega_b) * u.adjoint();
  return partial_trace_env(evolved, model.dim_s, model.dim_b);
}

KrausChannel kraus_extract(const CompositeModel& model, const CMatrix& omega_b, double t,
                           double weight_cut) {
  require_density_matrix(omega_b);
  if (omega_b.rows() != model.dim_b) {
    throw Error(ErrorCode::DimensionMismatch, "environment state does not match the composite");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (omega_b + omega_b.adjoint()));
  const RVector& p = es.eigenvalues();

  std::vector<Index> order(static_cast<std::size_t>(model.dim_b));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return p(a) > p(b); });

  const CMatrix u = propagator(model, t);
  const Index ds = model.dim_s;
  const Index db = model.dim_b;

  KrausChannel channel;
  channel.kind = ChannelKind::Hermitian;
  channel.dim = ds;
  for (Index alpha : order) {
    if (p(alpha) <= weight_cut) {
      channel.discarded_weight += std::max(0.0, p(alpha));
      continue;
    }
    // U (I_S (x) |alpha>): rows indexed by (s, beta), columns by s'.
    const CMatrix lifted = u * kron(identity(ds), es.eigenvectors().col(alpha));
    const double amplitude = std::sqrt(p(alpha));
    for (Index beta = 0; beta < db; ++beta) {
      CMatrix k(ds, ds);
      for (Index s = 0; s < ds; ++s) k.row(s) = amplitude * lifted.row(s * db + beta);
      channel.ops.push_back(std::move(k));
    }
  }
  return channel;
}

KrausChannel pt_kraus(const KrausChannel& channel, const CanonicalMap& map) {
  if (channel.kind != ChannelKind::Hermitian) {
    throw Error(ErrorCode::InvalidArgument, "pt_kraus expects a hermitian-representation channel");
  }
  if (map.t.rows() != channel.dim) {
    throw Error(ErrorCode::DimensionMismatch, "canonical map dimension differs from channel");
  }
  KrausChannel out;
  out.kind = ChannelKind::Pt;
  out.dim = channel.dim;
  out.discarded_weight = channel.discarded_weight;
  out.ops.reserve(channel.ops.size());
  out.right_ops.reserve(channel.ops.size());
  for (const CMatrix& k : channel.ops) {
    out.ops.push_back(map.t_inv * k * map.t);
    out.right_ops.push_back(map.t_inv * k.adjoint() * map.t);
  }
  return out;
}

CMatrix apply_channel(const KrausChannel& channel, const CMatrix& state) {
  if (state.rows() != channel.dim || state.cols() != channel.dim) {
    throw Error(ErrorCode::DimensionMismatch, "state dimension differs from channel");
  }
  CMatrix out = CMatrix::Zero(channel.dim, channel.dim);
  for (std::size_t i = 0; i < channel.ops.size(); ++i) {
    if (channel.kind == ChannelKind::Hermitian) {
      out.noalias() += channel.ops[i] * state * channel.ops[i].adjoint();
    } else {
      out.noalias() += channel.ops[i] * state * channel.right_ops[i];
    }
  }
  return out;
}

CMatrix choi_matrix(const KrausChannel& channel) {
  const Index d = channel.dim;
  CMatrix choi = CMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = apply_channel(channel, unit);
    }
  }
  return choi;
}

bool is_completely_positive(const KrausChannel& channel, double tol) {
  if (channel.kind != ChannelKind::Hermitian) {
    throw Error(ErrorCode::InvalidArgument,
                "complete positivity is tested in the hermitian representation");
  }
  const CMatrix choi = choi_matrix(channel);
  if (hermiticity_defect(choi) > tol) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (choi + choi.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace ptdeco

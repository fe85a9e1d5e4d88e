#include "ptdeco/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "parallel.hpp"
#include "ptdeco/channel.hpp"

namespace ptdeco {

namespace {

CMatrix ladder(int fock_dim) {
  CMatrix a = CMatrix::Zero(fock_dim, fock_dim);
  for (int k = 1; k < fock_dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// I (x) ... (x) op (x) ... (x) I with `op` on mode `which`; mode 0 is the most
// significant factor.
CMatrix embed_mode(const CMatrix& op, std::size_t which, std::size_t n_modes, int fock_dim) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (std::size_t m = 0; m < n_modes; ++m) {
    out = kron(out, m == which ? op : identity(fock_dim));
  }
  return out;
}

CMatrix hadamard() {
  CMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::numbers::sqrt2;
}

CMatrix default_initial_state() {
  CMatrix rho(2, 2);
  rho << 0.5, Complex(0.0, 0.5), Complex(0.0, -0.5), 0.5;
  return rho;
}

}  // namespace

Index DiscreteBath::dim() const {
  Index d = 1;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (d > std::numeric_limits<Index>::max() / fock_dim) {
      throw Error(ErrorCode::DimensionCap, "bath dimension overflows");
    }
    d *= fock_dim;
  }
  return d;
}

void DiscreteBath::validate() const {
  if (modes.empty()) throw Error(ErrorCode::InvalidArgument, "bath needs at least one mode");
  if (fock_dim < 2) throw Error(ErrorCode::InvalidArgument, "fock_dim must be at least 2");
  std::set<double> seen;
  for (const BathMode& mode : modes) {
    if (!(mode.omega > 0.0) || !std::isfinite(mode.omega) || !std::isfinite(mode.g)) {
      throw Error(ErrorCode::InvalidArgument, "mode frequencies must be positive and finite");
    }
    if (!seen.insert(mode.omega).second) {
      throw Error(ErrorCode::InvalidArgument, "mode frequencies must be distinct");
    }
  }
}

DiscreteBath discretize_bath(const SpectralDensity& spectral, int n_modes, double omega_max,
                             int fock_dim) {
  spectral.validate();
  if (n_modes < 1 || !(omega_max > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "discretization needs N >= 1 and omega_max > 0");
  }
  DiscreteBath bath;
  bath.fock_dim = fock_dim;
  const double width = omega_max / n_modes;
  for (int n = 0; n < n_modes; ++n) {
    const double omega = (n + 0.5) * width;
    bath.modes.push_back({omega, std::sqrt(spectral(omega) * width)});
  }
  return bath;
}

DiscreteBath rescale_couplings(DiscreteBath bath, double factor) {
  for (BathMode& mode : bath.modes) mode.g *= factor;
  return bath;
}

double discrete_gamma(const DiscreteBath& bath, double beta, double t) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");
  double sum = 0.0;
  for (const BathMode& mode : bath.modes) {
    const double s = std::sin(0.5 * mode.omega * t);
    const double coth = std::isinf(beta) ? 1.0 : 1.0 / std::tanh(0.5 * beta * mode.omega);
    sum += mode.g * mode.g / (mode.omega * mode.omega) * 2.0 * s * s * coth;
  }
  return sum;
}

CMatrix bath_hamiltonian(const DiscreteBath& bath) {
  bath.validate();
  const CMatrix a = ladder(bath.fock_dim);
  const CMatrix number = a.adjoint() * a;
  CMatrix h = CMatrix::Zero(bath.dim(), bath.dim());
  for (std::size_t m = 0; m < bath.modes.size(); ++m) {
    h += bath.modes[m].omega * embed_mode(number, m, bath.modes.size(), bath.fock_dim);
  }
  return h;
}

CMatrix bath_coupling(const DiscreteBath& bath) {
  bath.validate();
  const CMatrix a = ladder(bath.fock_dim);
  const CMatrix quadrature = a + a.adjoint();
  CMatrix v = CMatrix::Zero(bath.dim(), bath.dim());
  for (std::size_t m = 0; m < bath.modes.size(); ++m) {
    v += bath.modes[m].g * embed_mode(quadrature, m, bath.modes.size(), bath.fock_dim);
  }
  return v;
}

ThermalState thermal_state(const DiscreteBath& bath, double beta, double tail_threshold) {
  bath.validate();
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive");

  RVector weights = RVector::Ones(1);
  double kept = 1.0;
  for (const BathMode& mode : bath.modes) {
    RVector local(bath.fock_dim);
    for (int k = 0; k < bath.fock_dim; ++k) {
      local(k) = k == 0 ? 1.0 : std::exp(-beta * mode.omega * k);
    }
    kept *= 1.0 - std::exp(-beta * mode.omega * bath.fock_dim);
    RVector next(weights.size() * local.size());
    for (Index i = 0; i < weights.size(); ++i) {
      next.segment(i * local.size(), local.size()) = weights(i) * local;
    }
    weights = std::move(next);
  }
  weights /= weights.sum();

  ThermalState out;
  out.rho = weights.cast<Complex>().asDiagonal();
  out.tail_population = 1.0 - kept;
  out.truncation_warning = out.tail_population > tail_threshold;
  return out;
}

BruteForceRun brute_force_dynamics(double alpha, const DiscreteBath& bath, double beta,
                                   const CMatrix& varrho0, std::span<const double> times,
                                   Index dim_cap) {
  bath.validate();
  if (2 * bath.dim() > dim_cap) {
    throw Error(ErrorCode::DimensionCap, "composite dimension " + std::to_string(2 * bath.dim()) +
                                             " exceeds cap " + std::to_string(dim_cap));
  }
  if (varrho0.rows() != 2 || varrho0.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "system state must be 2x2");
  }
  require_density_matrix(varrho0);

  const double e1 = qubit_energies(alpha).e1;
  const CMatrix h_s = e1 * sigma_x();
  const CompositeModel model = build_composite(h_s, bath_hamiltonian(bath), h_s, bath_coupling(bath));
  const ThermalState omega = thermal_state(bath, beta);

  const HermitianPropagator prop(model.total());
  const CMatrix& w = prop.eigenvectors();
  const RVector& energies = prop.energies();
  const Index db = model.dim_b;

  // rho_S[s,q](t) = phase^T (Y o M_sq) conj(phase), Y = W^dagger X W and
  // M_sq = W_s^T conj(W_q), with W_s the rows of W belonging to system state s.
  const CMatrix y = w.adjoint() * kron(varrho0, omega.rho) * w;
  std::array<CMatrix, 4> weighted;
  for (Index s = 0; s < 2; ++s) {
    for (Index q = 0; q < 2; ++q) {
      const CMatrix m = w.middleRows(s * db, db).transpose() * w.middleRows(q * db, db).conjugate();
      weighted[static_cast<std::size_t>(2 * s + q)] = y.cwiseProduct(m);
    }
  }

  BruteForceRun run;
  run.tail_population = omega.tail_population;
  run.truncation_warning = omega.truncation_warning;
  run.states.assign(times.size(), CMatrix());
  detail::parallel_for(times.size(), default_thread_count(), [&](std::size_t i) {
    const CVector phase = (energies.cast<Complex>() * Complex(0.0, -times[i])).array().exp().matrix();
    const CVector phase_conj = phase.conjugate();
    CMatrix rho(2, 2);
    for (Index s = 0; s < 2; ++s) {
      for (Index q = 0; q < 2; ++q) {
        rho(s, q) = phase.transpose() * weighted[static_cast<std::size_t>(2 * s + q)] * phase_conj;
      }
    }
    run.states[i] = rho;
  });
  return run;
}

CoherenceSeries coherence_series(double alpha, const DiscreteBath& bath, double beta,
                                 const BruteForceRun& run, std::span<const double> times) {
  if (run.states.size() != times.size()) {
    throw Error(ErrorCode::LengthMismatch, "states and times differ in length");
  }
  const CMatrix h = hadamard();
  CoherenceSeries series;
  series.alpha = alpha;
  series.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < times.size(); ++i) {
    series.gamma.push_back(discrete_gamma(bath, beta, times[i]));
    series.magnitude.push_back(std::abs((h * run.states[i] * h)(0, 1)));
  }
  return series;
}

ConventionFit fit_convention_constant(std::span<const CoherenceSeries> series) {
  double sxx = 0.0;
  double sxy = 0.0;
  for (const CoherenceSeries& s : series) {
    const double e1_sq = 1.0 - s.alpha * s.alpha;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      const double x = e1_sq * s.gamma[i];
      if (x > 0.0 && s.magnitude[i] > 0.0) {
        sxx += x * x;
        sxy += x * -std::log(s.magnitude[i]);
      }
    }
  }

  auto sum_squares = [&](double c) {
    double total = 0.0;
    for (const CoherenceSeries& s : series) {
      const double e1_sq = 1.0 - s.alpha * s.alpha;
      for (std::size_t i = 0; i < s.times.size(); ++i) {
        const double r = s.magnitude[i] - std::exp(-c * e1_sq * s.gamma[i]);
        total += r * r;
      }
    }
    return total;
  };

  ConventionFit fit;
  if (sxx > 0.0) {
    // Log-linear estimate seeds a golden-section search on the direct residual.
    const double seed = std::max(0.0, sxy / sxx);
    double lo = 0.0;
    double hi = 2.0 * seed + 1.0;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = sum_squares(x1);
    double f2 = sum_squares(x2);
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++iter) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = sum_squares(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = sum_squares(x2);
      }
    }
    fit.c = 0.5 * (lo + hi);
  }

  for (const CoherenceSeries& s : series) {
    const double e1_sq = 1.0 - s.alpha * s.alpha;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      fit.max_residual = std::max(
          fit.max_residual, std::abs(s.magnitude[i] - std::exp(-fit.c * e1_sq * s.gamma[i])));
    }
  }
  fit.convention_flag = std::abs(fit.c - 1.0) > 1e-3;
  return fit;
}

ComparisonReport compare(std::span<const CMatrix> analytic, std::span<const CMatrix> brute,
                         std::span<const double> times) {
  if (analytic.size() != brute.size() || analytic.size() != times.size()) {
    throw Error(ErrorCode::LengthMismatch, "trajectories and times differ in length");
  }
  ComparisonReport report;
  report.times.assign(times.begin(), times.end());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (analytic[i].rows() != brute[i].rows() || analytic[i].cols() != brute[i].cols()) {
      throw Error(ErrorCode::DimensionMismatch, "compared states differ in shape");
    }
    const double dev = (analytic[i] - brute[i]).cwiseAbs().maxCoeff();
    report.state_deviation.push_back(dev);
    report.max_abs_dev = std::max(report.max_abs_dev, dev);
  }
  return report;
}

OracleOutcome run_oracle_comparison(const OracleScenario& scenario) {
  if (scenario.times.empty() || scenario.alphas.empty()) {
    throw Error(ErrorCode::InvalidArgument, "oracle comparison needs times and alphas");
  }
  const CMatrix varrho0 = scenario.varrho0.size() == 0 ? default_initial_state() : scenario.varrho0;
  const CMatrix coherence0 = hadamard() * varrho0 * hadamard();
  if (std::abs(coherence0(0, 1)) == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "initial state has no sigma_x-basis coherence");
  }
  require_consistent_initial_state(varrho0);

  const double analytic_beta = scenario.analytic_beta > 0.0 ? scenario.analytic_beta : scenario.beta;
  const DiscreteBath bath =
      discretize_bath(scenario.spectral, scenario.modes, scenario.omega_max, scenario.fock_dim);

  OracleOutcome outcome;
  std::vector<BruteForceRun> runs;
  for (double alpha : scenario.alphas) {
    runs.push_back(brute_force_dynamics(alpha, bath, scenario.beta, varrho0, scenario.times));
    CoherenceSeries series =
        coherence_series(alpha, bath, analytic_beta, runs.back(), scenario.times);
    for (double& m : series.magnitude) m /= std::abs(coherence0(0, 1));
    outcome.series.push_back(std::move(series));
    outcome.tail_population = std::max(outcome.tail_population, runs.back().tail_population);
    outcome.truncation_warning = outcome.truncation_warning || runs.back().truncation_warning;
  }

  if (scenario.convention_c > 0.0) {
    outcome.fit.c = scenario.convention_c;
    for (const CoherenceSeries& s : outcome.series) {
      const double e1_sq = 1.0 - s.alpha * s.alpha;
      for (std::size_t i = 0; i < s.times.size(); ++i) {
        outcome.fit.max_residual =
            std::max(outcome.fit.max_residual,
                     std::abs(s.magnitude[i] - std::exp(-outcome.fit.c * e1_sq * s.gamma[i])));
      }
    }
    outcome.fit.convention_flag = std::abs(outcome.fit.c - 1.0) > 1e-3;
  } else {
    outcome.fit = fit_convention_constant(outcome.series);
  }
  outcome.max_decoherence_dev = outcome.fit.max_residual;

  for (std::size_t a = 0; a < scenario.alphas.size(); ++a) {
    const double e1 = qubit_energies(scenario.alphas[a]).e1;
    std::vector<CMatrix> fitted;
    std::vector<CMatrix> literal;
    for (std::size_t i = 0; i < scenario.times.size(); ++i) {
      const double t = scenario.times[i];
      const double gamma = outcome.series[a].gamma[i];
      fitted.push_back(assemble_exact_state(varrho0, e1, t, std::exp(-outcome.fit.c * e1 * e1 * gamma),
                                            SolutionConvention{2.0}));
      literal.push_back(assemble_exact_state(varrho0, e1, t, std::exp(-e1 * e1 * gamma)));
    }
    ComparisonReport report = compare(fitted, runs[a].states, scenario.times);
    outcome.max_state_dev = std::max(outcome.max_state_dev, report.max_abs_dev);
    outcome.literal_max_dev = std::max(outcome.literal_max_dev,
                                       compare(literal, runs[a].states, scenario.times).max_abs_dev);
    outcome.state_reports.push_back(std::move(report));
  }

  outcome.pass = std::max(outcome.max_decoherence_dev, outcome.max_state_dev) <= scenario.tolerance;
  return outcome;
}

}  // namespace ptdeco

#include "ptdeco/dephasing.hpp"

#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

#include "parallel.hpp"
#include "ptdeco/channel.hpp"
#include "ptdeco/quadrature.hpp"

namespace ptdeco {

namespace {

constexpr long kMaxPieces = 200'000;

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "inverse temperature must be positive and finite");
  }
}

// 2 sin^2(wt/2) coth(beta w/2) / w, bounded as w -> 0 (limit t^2/beta).
double thermal_kernel(double w, double t, double beta) {
  if (w <= 0.0) return t * t / beta;
  const double x = 0.5 * beta * w;
  const double coth = x < 0.5e-4 ? 1.0 / x + x / 3.0 : 1.0 / std::tanh(x);
  const double s = std::sin(0.5 * w * t);
  return 2.0 * s * s / w * coth;
}

// Bound on the integral over [s, inf), using 1 - cos <= 2 and monotone coth.
double tail_bound(const SpectralDensity& j, double beta, double s) {
  const double prefactor = j.mu > 1.0 ? 2.0 : 1.0;
  return prefactor * 2.0 / std::tanh(0.5 * beta * s) * j.j0 * j.omega_c *
         std::pow(s, j.mu - 1.0) * std::exp(-s / j.omega_c);
}

}  // namespace

double SpectralDensity::operator()(double omega) const {
  if (omega <= 0.0) return 0.0;
  return j0 * std::pow(omega, 1.0 + mu) * std::exp(-omega / omega_c);
}

void SpectralDensity::validate() const {
  if (!(mu > -1.0)) {
    throw Error(ErrorCode::InvalidExponent, "spectral exponent mu must exceed -1");
  }
  if (!(j0 >= 0.0) || !(omega_c > 0.0) || !std::isfinite(j0) || !std::isfinite(omega_c) ||
      !std::isfinite(mu)) {
    throw Error(ErrorCode::InvalidArgument, "spectral density needs j0 >= 0 and omega_c > 0");
  }
}

double DephasingModel::e1() const { return qubit_energies(alpha).e1; }

PtHamiltonian qubit_hamiltonian(double alpha) {
  CMatrix h(2, 2);
  h << Complex(0.0, alpha), 1.0, 1.0, Complex(0.0, -alpha);
  return PtHamiltonian(std::move(h), sigma_x());
}

QubitEnergies qubit_energies(double alpha) {
  if (!(std::abs(alpha) <= 1.0)) {
    throw Error(ErrorCode::BrokenPhase, "qubit spectrum is complex for |alpha| > 1");
  }
  const double e = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  return {-e, e};
}

CanonicalMap qubit_transform(double alpha, double max_condition) {
  if (std::abs(alpha) > 1.0) {
    throw Error(ErrorCode::BrokenPhase, "no hermitizing transform for |alpha| > 1");
  }
  if (std::abs(alpha) == 1.0) {
    throw Error(ErrorCode::ExceptionalPoint, "transform is singular at |alpha| = 1");
  }
  const double s1 = std::sqrt(2.0 * (1.0 + alpha));
  const double s2 = std::sqrt(2.0 * (1.0 - alpha));
  const double condition = std::max(s1, s2) / std::min(s1, s2);
  if (condition > max_condition) {
    throw Error(ErrorCode::IllConditioned, "qubit transform too close to the exceptional point");
  }
  CMatrix u(2, 2);
  u << Complex(0.0, 1.0), 1.0, Complex(0.0, -1.0), 1.0;
  u /= std::numbers::sqrt2;

  CanonicalMap map;
  map.t = u.adjoint() * Eigen::Vector2cd(s1, s2).asDiagonal() * u;
  map.t_inv = u.adjoint() * Eigen::Vector2cd(1.0 / s1, 1.0 / s2).asDiagonal() * u;
  map.condition = condition;
  return map;
}

GammaResult gamma_integral(const SpectralDensity& spectral, double beta, double t, double tol) {
  spectral.validate();
  require_beta(beta);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidArgument, "gamma(t) needs finite t >= 0");
  }
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (t == 0.0 || spectral.j0 == 0.0) return {};

  const double j0 = spectral.j0;
  const double mu = spectral.mu;
  const double wc = spectral.omega_c;

  double upper = wc * std::max(1.0, std::log(1.0 / tol));
  if (mu > 1.0) upper = std::max(upper, 2.0 * (mu - 1.0) * wc);
  while (tail_bound(spectral, beta, upper) > 0.25 * tol) upper *= 1.2;
  const double tail = tail_bound(spectral, beta, upper);

  // One oscillation period of cos(wt) per initial piece.
  const double period = 2.0 * std::numbers::pi / t;
  const double first = std::min(upper, period);

  // First piece: w = first * u^p removes the w^mu endpoint singularity.
  const double p = mu < 0.0 ? 1.0 / (mu + 1.0) : 1.0;
  const double q = p * (mu + 1.0) - 1.0;
  const double prefactor = j0 * std::pow(first, mu + 1.0) * p;
  auto near_zero = [&](double u) {
    const double w = first * std::pow(u, p);
    const double power = q == 0.0 ? 1.0 : std::pow(u, q);
    return prefactor * power * std::exp(-w / wc) * thermal_kernel(w, t, beta);
  };
  const std::array<double, 2> unit = {0.0, 1.0};
  const QuadratureResult head = integrate_adaptive(near_zero, unit, 0.25 * tol);

  GammaResult out;
  out.value = head.value;
  out.abs_error_estimate = head.abs_error + tail;
  out.evaluations = head.evaluations;
  bool converged = head.converged;

  if (upper > first) {
    auto body = [&](double w) {
      return j0 * std::pow(w, mu) * std::exp(-w / wc) * thermal_kernel(w, t, beta);
    };
    const long pieces =
        std::clamp(static_cast<long>(std::ceil((upper - first) / period)), 1L, kMaxPieces);
    std::vector<double> edges(static_cast<std::size_t>(pieces) + 1);
    for (long i = 0; i <= pieces; ++i) {
      edges[static_cast<std::size_t>(i)] =
          first + (upper - first) * static_cast<double>(i) / static_cast<double>(pieces);
    }
    edges.back() = upper;
    const QuadratureResult rest = integrate_adaptive(body, edges, 0.5 * tol);
    out.value += rest.value;
    out.abs_error_estimate += rest.abs_error;
    out.evaluations += rest.evaluations;
    converged = converged && rest.converged;
  }

  if (!converged) {
    throw Error(ErrorCode::QuadratureFailure,
                "gamma(t) at t = " + std::to_string(t) + " did not reach tolerance");
  }
  out.value = std::max(0.0, out.value);
  return out;
}

GammaResult gamma_integral(const DephasingModel& model, double t, double tol) {
  return gamma_integral(model.spectral, model.beta, t, tol);
}

double decoherence_function(const DephasingModel& model, double t, double tol) {
  const double e1 = model.e1();
  if (std::abs(model.alpha) == 1.0) return 1.0;
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "D(t) needs t >= 0");
  if (t == 0.0) return 1.0;
  return std::exp(-e1 * e1 * gamma_integral(model, t, tol).value);
}

double ohmic_asymptote(double alpha, double j0, double beta, double t) {
  return std::exp(-std::numbers::pi * j0 * (1.0 - alpha * alpha) * t / beta);
}

CMatrix assemble_exact_state(const CMatrix& varrho0, double e1, double t, double d,
                             SolutionConvention convention) {
  if (varrho0.rows() != 2 || varrho0.cols() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "exact solution is defined for a qubit");
  }
  const Complex z = varrho0(0, 1) * std::exp(Complex(0.0, -convention.phase_scale * e1 * t));
  const double rho11_0 = varrho0(0, 0).real();

  CMatrix out(2, 2);
  out(0, 0) = 0.5 - z.real() * d;
  out(0, 1) = Complex(rho11_0 - 0.5, z.imag() * d);
  out(1, 0) = std::conj(out(0, 1));
  out(1, 1) = 1.0 - out(0, 0);
  return out;
}

void require_consistent_initial_state(const CMatrix& varrho0, double tol) {
  require_density_matrix(varrho0);
  if (varrho0.rows() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "exact solution is defined for a qubit");
  }
  const CMatrix at_zero = assemble_exact_state(varrho0, 0.0, 0.0, 1.0);
  if ((at_zero - varrho0).cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorCode::InconsistentInitialState,
                "at t = 0 the exact solution reproduces the initial state only if "
                "varrho_11(0) = 1/2 and Re varrho_12(0) = 0");
  }
}

CMatrix evolve_exact(const DephasingModel& model, const CMatrix& varrho0, double t, double tol) {
  require_consistent_initial_state(varrho0);
  const double d = decoherence_function(model, t, tol);
  return assemble_exact_state(varrho0, model.e1(), t, d);
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("PTDECO_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

DecoherenceTable sweep_alpha(std::span<const double> alphas, std::span<const double> times,
                             const SpectralDensity& spectral, double beta, double tol,
                             unsigned threads) {
  spectral.validate();
  require_beta(beta);
  for (double a : alphas) {
    if (!(std::abs(a) <= 1.0)) throw Error(ErrorCode::BrokenPhase, "sweep needs |alpha| <= 1");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "times must be nonnegative and ascending");
    }
  }

  DecoherenceTable table;
  table.alphas.assign(alphas.begin(), alphas.end());
  table.times.assign(times.begin(), times.end());
  table.gammas.assign(times.size(), 0.0);
  detail::parallel_for(times.size(), threads == 0 ? default_thread_count() : threads,
                       [&](std::size_t i) {
                         table.gammas[i] = gamma_integral(spectral, beta, times[i], tol).value;
                       });

  table.d.resize(static_cast<Index>(times.size()), static_cast<Index>(alphas.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      const double a = alphas[j];
      const double e1_sq = 1.0 - a * a;
      table.d(static_cast<Index>(i), static_cast<Index>(j)) =
          std::abs(a) == 1.0 ? 1.0 : std::exp(-e1_sq * table.gammas[i]);
    }
  }
  return table;
}

}  // namespace ptdeco

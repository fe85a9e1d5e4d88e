#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ptdeco/dephasing.hpp"
#include "ptdeco/oracle.hpp"

namespace ptdeco {
namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

// Composite Simpson rule with a fixed, large number of panels.
template <class F>
double simpson(F&& f, double a, double b, long panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double sum = f(a) + f(b);
  for (long k = 1; k < panels; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
  return sum * h / 3.0;
}

// Ohmic integrand of gamma with J0 = omega_c = 1.
double ohmic_reference(double beta, double t) {
  auto f = [&](double w) {
    if (w == 0.0) return t * t / beta;
    const double s = std::sin(0.5 * w * t);
    return std::exp(-w) / w * 2.0 * s * s / std::tanh(0.5 * beta * w);
  };
  return simpson(f, 0.0, 45.0, 1'000'000);
}

// mu = -1/2 after w = u^2, which removes the endpoint singularity.
double subohmic_reference(double beta, double t) {
  auto f = [&](double u) {
    if (u == 0.0) return 2.0 * t * t / beta;
    const double w = u * u;
    const double s = std::sin(0.5 * w * t);
    return 2.0 * std::exp(-w) / w * 2.0 * s * s / std::tanh(0.5 * beta * w);
  };
  return simpson(f, 0.0, std::sqrt(45.0), 1'000'000);
}

const SpectralDensity kFigureBath{1.0, -0.5, 1.0};

TEST(QubitHamiltonian, Examples) {
  EXPECT_EQ(qubit_hamiltonian(0.0).h(), sigma_x());
  CMatrix expected(2, 2);
  expected << Complex(0.0, 0.5), 1.0, 1.0, Complex(0.0, -0.5);
  EXPECT_EQ(qubit_hamiltonian(0.5).h(), expected);
  EXPECT_EQ(qubit_hamiltonian(0.5).parity(), sigma_x());
  for (double a : {-2.0, -0.3, 0.0, 0.7, 1.0, 4.0}) {
    EXPECT_EQ(qubit_hamiltonian(a).h().trace(), Complex(0.0));
    EXPECT_TRUE(check_pt_symmetry(qubit_hamiltonian(a)));
  }
}

TEST(QubitEnergies, Examples) {
  EXPECT_EQ(qubit_energies(0.0).e1, -1.0);
  EXPECT_EQ(qubit_energies(0.0).e2, 1.0);
  EXPECT_EQ(qubit_energies(1.0).e1, 0.0);
  EXPECT_EQ(qubit_energies(1.0).e2, 0.0);
  EXPECT_NEAR(qubit_energies(0.5).e1, -0.8660254037844386, 1e-16);
  EXPECT_NEAR(qubit_energies(0.5).e2, 0.8660254037844386, 1e-16);
  EXPECT_EQ(code_of([] { qubit_energies(1.01); }), ErrorCode::BrokenPhase);
}

TEST(QubitTransform, Examples) {
  const CanonicalMap t0 = qubit_transform(0.0);
  EXPECT_LT((t0.t - std::numbers::sqrt2 * identity(2)).norm(), 1e-15);
  const CanonicalMap t6 = qubit_transform(0.6);
  EXPECT_NEAR(t6.t(0, 0).real(), 1.3416408, 1e-7);
  EXPECT_NEAR(t6.t(1, 1).real(), 1.3416408, 1e-7);
  EXPECT_NEAR(t6.t(0, 1).imag(), -0.4472136, 1e-7);
  EXPECT_NEAR(t6.t(1, 0).imag(), 0.4472136, 1e-7);
  EXPECT_LT((t6.t * t6.t_inv - identity(2)).norm(), 1e-14);
  EXPECT_LT(hermiticity_defect(t6.t), 1e-15);
  EXPECT_EQ(code_of([] { qubit_transform(1.0); }), ErrorCode::ExceptionalPoint);
  EXPECT_EQ(code_of([] { qubit_transform(0.999, 10.0); }), ErrorCode::IllConditioned);
  EXPECT_EQ(code_of([] { qubit_transform(1.3); }), ErrorCode::BrokenPhase);
}

TEST(QubitTransform, AgreesWithGenericTransform) {
  for (double a = -0.98; a < 0.99; a += 0.07) {
    const CanonicalMap closed = qubit_transform(a);
    const CanonicalMap generic = canonical_transform(qubit_hamiltonian(a));
    const double scale = std::sqrt(std::abs(closed.t.determinant()));
    EXPECT_LT((closed.t / scale - generic.t).norm(), 1e-10) << a;
    const CMatrix hs = closed.t * qubit_hamiltonian(a).h() * closed.t_inv;
    // Hermitian image is -E1 sigma_x for this transform.
    EXPECT_LT((hs + qubit_energies(a).e1 * sigma_x()).norm(), 1e-10) << a;
  }
}

TEST(GammaIntegral, ZeroTimeAndValidation) {
  EXPECT_EQ(gamma_integral(kFigureBath, 0.5, 0.0).value, 0.0);
  EXPECT_EQ(code_of([] { gamma_integral(SpectralDensity{1.0, -1.0, 1.0}, 1.0, 1.0); }),
            ErrorCode::InvalidExponent);
  EXPECT_EQ(code_of([] { gamma_integral(SpectralDensity{1.0, -1.5, 1.0}, 1.0, 1.0); }),
            ErrorCode::InvalidExponent);
  EXPECT_EQ(code_of([] { gamma_integral(kFigureBath, -1.0, 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { gamma_integral(kFigureBath, 1.0, -1.0); }), ErrorCode::InvalidArgument);
}

TEST(GammaIntegral, OhmicMatchesSimpsonReference) {
  const GammaResult r = gamma_integral(SpectralDensity{1.0, 0.0, 1.0}, 1.0, 10.0);
  EXPECT_NEAR(r.value, ohmic_reference(1.0, 10.0), 1e-8);
  EXPECT_LE(r.abs_error_estimate, kDefaultGammaTol);
  EXPECT_GT(r.evaluations, 0);
}

TEST(GammaIntegral, SubOhmicMatchesSimpsonReference) {
  for (double t : {0.3, 2.0, 7.5, 20.0}) {
    EXPECT_NEAR(gamma_integral(kFigureBath, 0.5, t).value, subohmic_reference(0.5, t), 1e-8) << t;
  }
}

TEST(GammaIntegral, SingleModeSurrogate) {
  DiscreteBath bath;
  bath.modes = {{1.0, 0.2}};
  for (double t : {0.0, 0.5, 3.0, 10.0}) {
    EXPECT_NEAR(discrete_gamma(bath, std::numeric_limits<double>::infinity(), t),
                0.04 * (1.0 - std::cos(t)), 1e-16);
  }
}

TEST(GammaIntegral, NonNegativeAcrossModels) {
  for (double mu : {-0.9, -0.5, 0.0, 1.0, 2.5}) {
    for (double beta : {0.1, 1.0, 50.0}) {
      for (double t : {1e-3, 0.7, 13.0}) {
        const GammaResult r = gamma_integral(SpectralDensity{0.7, mu, 2.0}, beta, t, 1e-9);
        EXPECT_GE(r.value, 0.0);
        EXPECT_LE(r.abs_error_estimate, 1e-9);
      }
    }
  }
}

TEST(DecoherenceFunction, Examples) {
  DephasingModel model{1.0, 0.5, kFigureBath};
  for (double t : {0.0, 1.0, 50.0}) EXPECT_EQ(decoherence_function(model, t), 1.0);
  model.alpha = 0.3;
  EXPECT_EQ(decoherence_function(model, 0.0), 1.0);
  for (double t : {0.5, 3.0, 12.0}) {
    DephasingModel a0{0.0, 0.5, kFigureBath};
    DephasingModel a9{0.9, 0.5, kFigureBath};
    EXPECT_GT(decoherence_function(a9, t), decoherence_function(a0, t));
    const double d = decoherence_function(a0, t);
    EXPECT_GT(d, 0.0);
    EXPECT_LE(d, 1.0);
    EXPECT_NEAR(d, std::exp(-subohmic_reference(0.5, t)), 1e-8);
  }
}

TEST(OhmicAsymptote, Examples) {
  EXPECT_EQ(ohmic_asymptote(1.0, 1.0, 1.0, 7.0), 1.0);
  EXPECT_NEAR(ohmic_asymptote(0.0, 1.0, std::numbers::pi, 1.0), 0.36787944, 1e-8);
}

TEST(OhmicAsymptote, SlopeOfQuadratureMatchesRate) {
  const SpectralDensity ohmic{1.0, 0.0, 100.0};
  for (double alpha : {0.0, 0.6}) {
    std::vector<double> ts;
    std::vector<double> ys;
    for (double t = 5.0; t <= 20.0 + 1e-9; t += 0.5) {
      ts.push_back(t);
      ys.push_back((1.0 - alpha * alpha) * gamma_integral(ohmic, 1.0, t).value);
    }
    double tm = 0.0;
    double ym = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      tm += ts[i];
      ym += ys[i];
    }
    tm /= static_cast<double>(ts.size());
    ym /= static_cast<double>(ts.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      sxy += (ts[i] - tm) * (ys[i] - ym);
      sxx += (ts[i] - tm) * (ts[i] - tm);
    }
    const double expected = std::numbers::pi * (1.0 - alpha * alpha);
    EXPECT_NEAR(sxy / sxx / expected, 1.0, 0.05) << alpha;
  }
}

CMatrix state(double rho11, Complex rho12) {
  CMatrix r(2, 2);
  r << rho11, rho12, std::conj(rho12), 1.0 - rho11;
  return r;
}

TEST(EvolveExact, MaximallyMixedIsFixed) {
  const DephasingModel model{0.5, 0.5, kFigureBath};
  for (double t : {0.0, 1.0, 9.0}) {
    EXPECT_LT((evolve_exact(model, identity(2) / 2.0, t) - identity(2) / 2.0).norm(), 1e-15);
  }
}

TEST(EvolveExact, CriticalPointFreezes) {
  const DephasingModel model{1.0, 0.5, kFigureBath};
  const CMatrix rho0 = state(0.5, Complex(0.0, 0.3));
  for (double t : {0.5, 4.0, 20.0}) EXPECT_LT((evolve_exact(model, rho0, t) - rho0).norm(), 1e-15);
}

TEST(EvolveExact, ClosedFormAndInvariants) {
  const DephasingModel model{0.5, 0.5, kFigureBath};
  const CMatrix rho0 = state(0.5, Complex(0.0, 0.4));
  const double e1 = model.e1();
  for (double t : {0.0, 0.7, 3.0, 11.0}) {
    const CMatrix r = evolve_exact(model, rho0, t);
    const double d = decoherence_function(model, t);
    const Complex z = Complex(0.0, 0.4) * std::exp(Complex(0.0, -e1 * t));
    EXPECT_NEAR(r(0, 0).real(), 0.5 - z.real() * d, 1e-15);
    EXPECT_NEAR(std::abs(r(0, 1) - Complex(0.0, z.imag() * d)), 0.0, 1e-15);
    EXPECT_EQ(r.trace(), Complex(1.0));
    EXPECT_EQ(r(1, 0), std::conj(r(0, 1)));
  }
}

TEST(EvolveExact, InconsistentInitialStateIsRejected) {
  const DephasingModel model{0.5, 0.5, kFigureBath};
  EXPECT_EQ(code_of([&] { evolve_exact(model, state(0.5, Complex(0.5, 0.0)), 1.0); }),
            ErrorCode::InconsistentInitialState);
  EXPECT_EQ(code_of([&] { evolve_exact(model, state(0.8, Complex(0.0, 0.1)), 1.0); }),
            ErrorCode::InconsistentInitialState);
  EXPECT_EQ(code_of([&] { evolve_exact(model, state(1.5, Complex(0.0, 0.0)), 1.0); }),
            ErrorCode::NotDensityMatrix);
}

TEST(SweepAlpha, CriticalColumnAndOrdering) {
  const std::vector<double> alphas{0.0, 1.0};
  const std::vector<double> times{0.5, 2.0, 6.0};
  const DecoherenceTable table = sweep_alpha(alphas, times, kFigureBath, 0.5);
  for (Index i = 0; i < 3; ++i) {
    EXPECT_EQ(table.d(i, 1), 1.0);
    EXPECT_LT(table.d(i, 0), table.d(i, 1));
  }
}

TEST(SweepAlpha, SymmetricAndMonotoneInAlphaSquared) {
  std::vector<double> alphas;
  for (double a = -1.0; a <= 1.0 + 1e-12; a += 0.125) alphas.push_back(a);
  std::vector<double> times;
  for (double t = 0.0; t <= 20.0; t += 1.0) times.push_back(t);
  const DecoherenceTable table = sweep_alpha(alphas, times, kFigureBath, 0.5, kDefaultGammaTol, 2);
  const Index n = static_cast<Index>(alphas.size());
  for (Index i = 0; i < table.d.rows(); ++i) {
    EXPECT_GE(table.gammas[static_cast<std::size_t>(i)], 0.0);
    for (Index j = 0; j < n; ++j) {
      EXPECT_NEAR(table.d(i, j), table.d(i, n - 1 - j), 1e-12);
      EXPECT_GT(table.d(i, j), 0.0);
      EXPECT_LE(table.d(i, j), 1.0);
    }
    for (Index j = n / 2; j + 1 < n; ++j) EXPECT_LE(table.d(i, j), table.d(i, j + 1));
  }
  EXPECT_EQ(table.d.row(0), Eigen::RowVectorXd::Ones(n));
}

TEST(SweepAlpha, ThreadCountDoesNotChangeValues) {
  const std::vector<double> alphas{0.0, 0.5};
  std::vector<double> times;
  for (double t = 0.0; t < 10.0; t += 0.7) times.push_back(t);
  const DecoherenceTable one = sweep_alpha(alphas, times, kFigureBath, 0.5, kDefaultGammaTol, 1);
  const DecoherenceTable many = sweep_alpha(alphas, times, kFigureBath, 0.5, kDefaultGammaTol, 4);
  EXPECT_EQ(one.d, many.d);
}

TEST(SweepAlpha, Validation) {
  const std::vector<double> bad_alpha{1.5};
  const std::vector<double> times{1.0};
  EXPECT_EQ(code_of([&] { sweep_alpha(bad_alpha, times, kFigureBath, 0.5); }),
            ErrorCode::BrokenPhase);
  const std::vector<double> alphas{0.0};
  const std::vector<double> unsorted{2.0, 1.0};
  EXPECT_EQ(code_of([&] { sweep_alpha(alphas, unsorted, kFigureBath, 0.5); }),
            ErrorCode::InvalidArgument);
}

}  // namespace
}  // namespace ptdeco

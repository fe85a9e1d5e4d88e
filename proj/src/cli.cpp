#include "ptdeco/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ptdeco/dephasing.hpp"
#include "ptdeco/oracle.hpp"
#include "ptdeco/pt_core.hpp"

namespace ptdeco::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::vector<double> alphas;
  double beta = 0.5;
  double mu = -0.5;
  double j0 = 1.0;
  double omega_c = 1.0;
  double t_start = 0.0;
  std::optional<double> t_end;
  std::optional<int> n_points;
  double tol = kDefaultGammaTol;
  int modes = 3;
  int fock_dim = 5;
  double omega_max = 20.0;
  double rho11 = 0.5;
  double rho12_re = 0.0;
  double rho12_im = 0.5;
  std::string representation = "hermitian";
  double compare_tol = 1e-2;
  double analytic_beta = 0.0;
  double convention_c = 0.0;
  std::string out;
};

std::string num(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string short_num(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw UsageError("n-points must be at least 1");
  if (n == 1) return {a};
  if (!(b > a)) throw UsageError("t-end must exceed t-start");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

void require_unbroken(const std::vector<double>& alphas) {
  if (alphas.empty()) throw UsageError("--alpha needs at least one value");
  for (double a : alphas) {
    if (!(std::abs(a) <= 1.0)) throw UsageError("alpha values must satisfy |alpha| <= 1");
  }
}

SpectralDensity spectral_of(const Settings& s) {
  SpectralDensity j{s.j0, s.mu, s.omega_c};
  try {
    j.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!(s.beta > 0.0)) throw UsageError("beta must be positive");
  return j;
}

void header(std::ostringstream& csv, const std::string& command, const Settings& s) {
  csv << "# ptdeco " << command << '\n';
  csv << "# units: hbar = 1\n";
  csv << "# spectral density: J(w) = j0 * w^(1+mu) * exp(-w/omega_c)\n";
  csv << "# j0 = " << num(s.j0) << '\n';
  csv << "# mu = " << num(s.mu) << '\n';
  csv << "# omega_c = " << num(s.omega_c) << '\n';
  csv << "# beta = " << num(s.beta) << '\n';
  csv << "# tol = " << num(s.tol) << '\n';
}

std::string cmd_spectrum(const Settings& s, std::ostream&) {
  if (s.alphas.empty()) throw UsageError("spectrum needs --alpha with at least one value");
  std::ostringstream csv;
  csv << "# ptdeco spectrum\n";
  csv << "# H = [[i alpha, 1], [1, -i alpha]], P = sigma_x\n";
  csv << "alpha,phase,re_e1,im_e1,re_e2,im_e2\n";
  for (double a : s.alphas) {
    const SpectrumReport r = spectrum(qubit_hamiltonian(a));
    csv << num(a) << ',' << to_string(r.classification);
    for (Index k = 0; k < r.eigenvalues.size(); ++k) {
      csv << ',' << num(r.eigenvalues(k).real()) << ',' << num(r.eigenvalues(k).imag());
    }
    csv << '\n';
  }
  return csv.str();
}

std::string cmd_figure1(Settings s, std::ostream&) {
  if (s.alphas.empty()) s.alphas = {0.0, 0.5, 0.9, 1.0};
  require_unbroken(s.alphas);
  const SpectralDensity j = spectral_of(s);
  const std::vector<double> times = linspace(s.t_start, s.t_end.value_or(20.0), s.n_points.value_or(200));
  if (times.front() < 0.0) throw UsageError("times must be nonnegative");

  const DecoherenceTable table = sweep_alpha(s.alphas, times, j, s.beta, s.tol);

  std::ostringstream csv;
  header(csv, "figure1", s);
  csv << "# D(t; alpha) = exp(-(1 - alpha^2) gamma(t))\n";
  csv << 't';
  for (double a : s.alphas) csv << ",D[alpha=" << short_num(a) << ']';
  csv << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    csv << num(times[i]);
    for (std::size_t k = 0; k < s.alphas.size(); ++k) {
      csv << ',' << num(table.d(static_cast<Index>(i), static_cast<Index>(k)));
    }
    csv << '\n';
  }
  return csv.str();
}

std::string cmd_evolve(Settings s, std::ostream&) {
  if (s.alphas.empty()) s.alphas = {0.5};
  if (s.alphas.size() != 1) throw UsageError("evolve takes a single --alpha value");
  require_unbroken(s.alphas);
  if (s.representation != "hermitian" && s.representation != "pt") {
    throw UsageError("--representation must be hermitian or pt");
  }
  const double alpha = s.alphas.front();
  const DephasingModel model{alpha, s.beta, spectral_of(s)};
  const std::vector<double> times = linspace(s.t_start, s.t_end.value_or(20.0), s.n_points.value_or(200));
  if (times.front() < 0.0) throw UsageError("times must be nonnegative");

  CMatrix varrho0(2, 2);
  varrho0 << s.rho11, Complex(s.rho12_re, s.rho12_im), Complex(s.rho12_re, -s.rho12_im),
      1.0 - s.rho11;
  require_consistent_initial_state(varrho0);

  std::optional<CanonicalMap> map;
  if (s.representation == "pt") map = qubit_transform(alpha);

  std::ostringstream csv;
  header(csv, "evolve", s);
  csv << "# alpha = " << num(alpha) << '\n';
  csv << "# representation = " << s.representation << '\n';
  csv << "# varrho0 = [[" << num(s.rho11) << ", " << num(s.rho12_re) << " + " << num(s.rho12_im)
      << "i], [c.c., " << num(1.0 - s.rho11) << "]]\n";
  csv << "t,D,re_rho11,im_rho11,re_rho12,im_rho12,re_rho21,im_rho21,re_rho22,im_rho22\n";
  for (double t : times) {
    const double d = decoherence_function(model, t, s.tol);
    CMatrix rho = assemble_exact_state(varrho0, model.e1(), t, d);
    if (map) rho = map_state_back(rho, *map);
    csv << num(t) << ',' << num(d);
    for (Index r = 0; r < 2; ++r) {
      for (Index c = 0; c < 2; ++c) csv << ',' << num(rho(r, c).real()) << ',' << num(rho(r, c).imag());
    }
    csv << '\n';
  }
  return csv.str();
}

std::string cmd_oracle_compare(Settings s, std::ostream& summary, bool& passed) {
  OracleScenario scenario;
  if (!s.alphas.empty()) scenario.alphas = s.alphas;
  require_unbroken(scenario.alphas);
  scenario.spectral = spectral_of(s);
  scenario.beta = s.beta;
  scenario.analytic_beta = s.analytic_beta;
  scenario.modes = s.modes;
  scenario.fock_dim = s.fock_dim;
  scenario.omega_max = s.omega_max;
  scenario.tolerance = s.compare_tol;
  scenario.convention_c = s.convention_c;
  scenario.times = linspace(s.t_start, s.t_end.value_or(5.0), s.n_points.value_or(51));
  if (scenario.times.front() < 0.0) throw UsageError("times must be nonnegative");
  if (s.modes < 1 || s.fock_dim < 2 || !(s.omega_max > 0.0)) {
    throw UsageError("oracle needs modes >= 1, fock-dim >= 2 and omega-max > 0");
  }
  scenario.varrho0.resize(2, 2);
  scenario.varrho0 << s.rho11, Complex(s.rho12_re, s.rho12_im), Complex(s.rho12_re, -s.rho12_im),
      1.0 - s.rho11;

  const OracleOutcome outcome = run_oracle_comparison(scenario);

  std::ostringstream csv;
  header(csv, "oracle-compare", s);
  csv << "# modes = " << s.modes << ", fock_dim = " << s.fock_dim << ", omega_max = "
      << num(s.omega_max) << '\n';
  csv << "# analytic beta = " << num(s.analytic_beta > 0.0 ? s.analytic_beta : s.beta) << '\n';
  csv << "# convention constant c = " << num(outcome.fit.c)
      << (s.convention_c > 0.0 ? " (fixed)" : " (fitted)") << '\n';
  csv << "# thermal tail population = " << num(outcome.tail_population)
      << (outcome.truncation_warning ? " (truncation warning)" : "") << '\n';
  csv << "alpha,t,gamma_n,d_brute,d_model,state_dev\n";
  for (std::size_t a = 0; a < outcome.series.size(); ++a) {
    const CoherenceSeries& series = outcome.series[a];
    const double e1_sq = 1.0 - series.alpha * series.alpha;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      csv << num(series.alpha) << ',' << num(series.times[i]) << ',' << num(series.gamma[i]) << ','
          << num(series.magnitude[i]) << ',' << num(std::exp(-outcome.fit.c * e1_sq * series.gamma[i]))
          << ',' << num(outcome.state_reports[a].state_deviation[i]) << '\n';
    }
  }

  passed = outcome.pass;
  summary << (outcome.pass ? "PASS" : "FAIL") << " c=" << num(outcome.fit.c)
          << " max_decoherence_dev=" << num(outcome.max_decoherence_dev)
          << " max_state_dev=" << num(outcome.max_state_dev) << " tolerance=" << num(s.compare_tol)
          << (outcome.fit.convention_flag ? " convention_flag=1" : " convention_flag=0")
          << (outcome.truncation_warning ? " truncation_warning=1" : "") << '\n';
  return csv.str();
}

// Writes next to the target and renames, so a failed run never leaves a partial file.
void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    if (!f.flush()) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PT-symmetric qubit dephasing: spectra, decoherence curves, exact dynamics and "
               "brute-force checks",
               "ptdeco"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file; command-line flags override it");

  Settings s;
  app.add_option("--alpha", s.alphas, "comma-separated alpha values")->delimiter(',');
  app.add_option("--beta", s.beta, "inverse temperature");
  app.add_option("--mu", s.mu, "spectral exponent (> -1)");
  app.add_option("--j0", s.j0, "spectral strength");
  app.add_option("--omega-c", s.omega_c, "spectral cutoff frequency");
  app.add_option("--t-start", s.t_start, "first time point");
  app.add_option("--t-end", s.t_end, "last time point");
  app.add_option("--n-points", s.n_points, "number of time points");
  app.add_option("--tol", s.tol, "absolute tolerance of gamma(t)");
  app.add_option("--modes", s.modes, "oracle bath modes");
  app.add_option("--fock-dim", s.fock_dim, "oracle Fock cutoff per mode");
  app.add_option("--omega-max", s.omega_max, "oracle discretization cutoff");
  app.add_option("--rho11", s.rho11, "initial varrho_11");
  app.add_option("--rho12-re", s.rho12_re, "initial Re varrho_12");
  app.add_option("--rho12-im", s.rho12_im, "initial Im varrho_12");
  app.add_option("--representation", s.representation, "evolve output: hermitian or pt");
  app.add_option("--compare-tol", s.compare_tol, "oracle pass tolerance");
  app.add_option("--analytic-beta", s.analytic_beta, "oracle: analytic-side beta (default: --beta)");
  app.add_option("--convention-c", s.convention_c, "oracle: fixed constant c instead of a fit");
  app.add_option("--out", s.out, "output CSV path (default: standard output)");

  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and phase per alpha");
  CLI::App* figure_cmd = app.add_subcommand("figure1", "decoherence curves D(t; alpha)");
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "exact reduced dynamics of the qubit");
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle-compare", "analytic decoherence against brute-force evolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run 'ptdeco --help' for usage\n";
    return 2;
  }

  // Summary lines go to stdout when the CSV goes to a file, to stderr otherwise.
  std::ostream& summary = s.out.empty() ? err : out;
  try {
    std::string csv;
    bool passed = true;
    if (*spectrum_cmd) {
      csv = cmd_spectrum(s, summary);
    } else if (*figure_cmd) {
      csv = cmd_figure1(s, summary);
    } else if (*evolve_cmd) {
      csv = cmd_evolve(s, summary);
    } else if (*oracle_cmd) {
      csv = cmd_oracle_compare(s, summary, passed);
    }
    if (s.out.empty()) {
      out << csv;
    } else {
      write_file(s.out, csv);
    }
    return passed ? 0 : 1;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ptdeco::cli

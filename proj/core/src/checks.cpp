#include "hpimc/checks.hpp"

#include "hpimc/config.hpp"
#include "hpimc/dvr.hpp"
#include "hpimc/error_budget.hpp"
#include "hpimc/experiments.hpp"
#include "hpimc/hamiltonian.hpp"
#include "hpimc/propagators.hpp"
#include "hpimc/units.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hpimc {

bool CheckReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.passed; });
}

void CheckReport::add(std::string name, bool ok, double measured, double threshold,
                      std::string detail) {
  items.push_back(CheckItem{std::move(name), ok, measured, threshold, std::move(detail)});
}

std::vector<std::string> check_suites() {
  return {"decompose", "onesparse_exp", "trotter_slopes", "error_bound", "mc_convergence"};
}

CheckReport run_check(const std::string& suite) {
  if (suite == "decompose") return check_decompose();
  if (suite == "onesparse_exp") return check_onesparse_exp();
  if (suite == "trotter_slopes") return check_trotter_slopes();
  if (suite == "error_bound") return check_error_bound();
  if (suite == "mc_convergence") return check_mc_convergence();
  throw std::invalid_argument("unknown check suite '" + suite + "'");
}

std::string to_json(const CheckReport& report) {
  nlohmann::ordered_json j;
  j["suite"] = report.suite;
  j["passed"] = report.passed();
  j["items"] = nlohmann::json::array();
  for (const auto& item : report.items) {
    nlohmann::ordered_json e;
    e["name"] = item.name;
    e["passed"] = item.passed;
    e["measured"] = item.measured;
    e["threshold"] = item.threshold;
    if (!item.detail.empty()) {
      e["detail"] = item.detail;
    }
    j["items"].push_back(e);
  }
  return j.dump(2);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("slope fit needs two or more paired points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

OneSparseMatrix random_one_sparse(Index dimension, std::mt19937_64& rng) {
  std::vector<Index> order(static_cast<std::size_t>(dimension));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 3);
  std::vector<SparseEntry> entries;
  std::size_t i = 0;
  while (i < order.size()) {
    const int kind = pick(rng);
    if (kind <= 1 && i + 1 < order.size()) {
      const double v = normal(rng);
      entries.push_back({order[i], order[i + 1], v});
      entries.push_back({order[i + 1], order[i], v});
      i += 2;
    } else if (kind == 2) {
      entries.push_back({order[i], order[i], normal(rng)});
      ++i;
    } else {
      ++i;
    }
  }
  return OneSparseMatrix(dimension, std::move(entries));
}

CheckReport check_decompose(const std::vector<int>& sizes) {
  CheckReport report{"decompose", {}};
  int diagonals = 0;
  int failures = 0;
  double worst_sum = 0.0;
  int max_parts = 0;
  std::string first_failure;
  for (const int d : sizes) {
    const dvr::DvrBand band(1.0, d, d);
    for (int nu = 1; nu <= d; ++nu) {
      ++diagonals;
      const auto target = dvr::extract_diagonal(band, nu);
      const auto parts = decompose_diagonal(d, nu, target.value);
      max_parts = std::max(max_parts, static_cast<int>(parts.size()));
      Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
      bool ok = parts.size() <= 2;
      for (const auto& part : parts) {
        const Eigen::MatrixXd dense = part.to_dense();
        ok = ok && is_one_sparse(dense) && dense == dense.transpose();
        sum += dense;
      }
      const double err = (sum - target.to_dense()).cwiseAbs().maxCoeff();
      worst_sum = std::max(worst_sum, err);
      ok = ok && err == 0.0;
      if (classify_diagonal(d, nu) == DecompositionCase::odd_nu) {
        // Exactly one (p, b) with b odd, p >= 1, b 2^p = nu - 1.
        int matches = 0;
        for (int p = 1; (1 << p) <= nu - 1; ++p) {
          const int b = (nu - 1) >> p;
          if ((b << p) == nu - 1 && b % 2 == 1) {
            ++matches;
          }
        }
        const auto rp = odd_case_parameters(nu);
        ok = ok && matches == 1 && (rp.b << rp.p) == nu - 1 && rp.b % 2 == 1;
      }
      if (!ok) {
        ++failures;
        if (first_failure.empty()) {
          first_failure = "D=" + std::to_string(d) + " nu=" + std::to_string(nu);
        }
      }
    }
  }
  report.add("diagonals_checked", failures == 0, diagonals, 0.0, first_failure);
  report.add("max_sum_error", worst_sum == 0.0, worst_sum, 0.0);
  report.add("max_parts", max_parts <= 2, max_parts, 2.0);
  return report;
}

CheckReport check_onesparse_exp(int trials, Index dimension, std::uint64_t seed) {
  CheckReport report{"onesparse_exp", {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-2.0, 2.0);
  double worst_real = 0.0;
  double worst_imag = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const OneSparseMatrix m = random_one_sparse(dimension, rng);
    const double theta = angle(rng);
    const Spectrum spectrum = eigendecompose(m.to_dense());
    const Eigen::MatrixXcd real_ref = spectrum.exponential(Complex(0.0, -theta));
    const Eigen::MatrixXcd imag_ref = spectrum.exponential(Complex(-theta, 0.0));
    for (Index q = 0; q < dimension; ++q) {
      StateVector e = StateVector::Zero(dimension);
      e[q] = 1.0;
      worst_real = std::max(worst_real, (apply_exp_one_sparse(m, theta, TimeKind::real_time, e) -
                                         real_ref.col(q)).cwiseAbs().maxCoeff());
      worst_imag = std::max(worst_imag,
                            (apply_exp_one_sparse(m, theta, TimeKind::imaginary_time, e) -
                             imag_ref.col(q)).cwiseAbs().maxCoeff());
    }
  }
  report.add("real_time_max_deviation", worst_real <= 1e-12, worst_real, 1e-12);
  report.add("imaginary_time_max_deviation", worst_imag <= 1e-12, worst_imag, 1e-12);
  return report;
}

namespace {

struct SlopeSystem {
  UniformGrid grid;
  DoubleWell potential;
  double mass;
};

SlopeSystem slope_system() {
  const double mass = units::kProtonMass;
  return SlopeSystem{UniformGrid(30.0, 6),
                     DoubleWell{mass, units::wavenumber_to_hartree(500.0),
                                units::wavenumber_to_hartree(1500.0)},
                     mass};
}

}  // namespace

CheckReport check_trotter_slopes() {
  CheckReport report{"trotter_slopes", {}};
  const SlopeSystem sys = slope_system();
  const Eigen::VectorXd v = potential_on_grid(sys.potential, sys.grid);
  const Eigen::MatrixXd h_fourier =
      fourier_kinetic_matrix(sys.grid, sys.mass) + Eigen::MatrixXd(v.asDiagonal());
  const Eigen::MatrixXd h_dvr = assemble_dense(sys.grid, sys.potential, sys.mass).matrix;
  const Spectrum sf = eigendecompose(h_fourier);
  const Spectrum sd = eigendecompose(h_dvr);
  const double t0 = 1.0 / sf.eigenvalues.cwiseAbs().maxCoeff();
  const double b0 = 1.0 / sd.eigenvalues.cwiseAbs().maxCoeff();

  std::vector<double> dts, real_err, dbs, imag_err;
  const SchemeOptions options;
  for (int k = 0; k <= 6; ++k) {
    const double dt = t0 * std::ldexp(1.0, -k);
    const PropagatorContext rt(sys.grid, sys.potential, sys.mass, StepScheme(options, dt, 0.0, 1));
    const Eigen::MatrixXcd step = rt.step_matrix(PathDirection::forward);
    dts.push_back(dt);
    real_err.push_back((step - sf.exponential(Complex(0.0, -dt))).norm());

    const double db = b0 * std::ldexp(1.0, -k);
    const PropagatorContext it(sys.grid, sys.potential, sys.mass, StepScheme(options, 0.0, db, 1));
    const Eigen::MatrixXcd istep = it.step_matrix(PathDirection::forward);
    dbs.push_back(db);
    imag_err.push_back((istep - sd.exponential(Complex(-db / 2.0, 0.0))).norm());
  }
  const double real_slope = log_log_slope(dts, real_err);
  const double imag_slope = log_log_slope(dbs, imag_err);
  report.add("real_time_local_slope", std::abs(real_slope - 3.0) <= 0.2, real_slope, 3.0,
             "tolerance 0.2, dt from 1/|H| over 6 octaves");
  report.add("imaginary_time_local_slope", std::abs(imag_slope - 2.0) <= 0.2, imag_slope, 2.0,
             "tolerance 0.2, dbeta from 1/|H| over 6 octaves");
  return report;
}

CheckReport check_error_bound(int trials, std::uint64_t seed) {
  CheckReport report{"error_bound", {}};
  constexpr Index d = 8;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  std::uniform_real_distribution<double> time(0.0, 5.0);
  int within = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::MatrixXd h(d, d);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j <= i; ++j) {
        h(i, j) = h(j, i) = normal(rng);
      }
    }
    Eigen::VectorXd a(d), b(d);
    for (Index i = 0; i < d; ++i) {
      a[i] = uniform(rng);
      b[i] = uniform(rng);
    }
    const double beta = 1.0;
    const double t = time(rng);
    const Spectrum s = eigendecompose(h);
    const Eigen::MatrixXcd u = s.exponential(Complex(-beta / 2.0, -t));  // e^{-iH t_c}
    Eigen::MatrixXcd noise(d, d);
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        noise(i, j) = Complex(normal(rng), normal(rng));
      }
    }
    const double eta = 1e-3 * std::pow(10.0, -3.0 * (trial % 4) / 3.0);
    const Eigen::MatrixXcd u_tilde = u + eta * u.norm() / noise.norm() * noise;
    const double z = s.partition_function(beta);
    const Eigen::MatrixXcd am = a.cast<Complex>().asDiagonal();
    const Eigen::MatrixXcd bm = b.cast<Complex>().asDiagonal();
    const Complex c = (u.adjoint() * am * u * bm).trace() / z;
    const Complex c_tilde = (u_tilde.adjoint() * am * u_tilde * bm).trace() / z;
    const double eps_u = trace_norm(Eigen::MatrixXcd(u - u_tilde));
    const double bound = tcf_error_bound(a.cwiseAbs().sum(), b.cwiseAbs().sum(),
                                         trace_norm(s.real_exponential(-beta / 2.0)), eps_u, z);
    const double err = std::abs(c - c_tilde);
    worst_ratio = std::max(worst_ratio, err / bound);
    if (err <= bound) {
      ++within;
    }
  }
  report.add("trials_within_bound", within == trials, within, trials);
  report.add("worst_error_to_bound_ratio", worst_ratio <= 1.0, worst_ratio, 1.0);
  return report;
}

ExperimentConfig mc_check_config() {
  ExperimentConfig c;
  c.experiment = "mc";
  c.potential = PotentialKind::harmonic;
  c.mass = 1.0;
  c.harmonic_frequency = 1.0;
  c.beta = 2.0;
  c.length = 6.0;
  c.qubits = {3};
  c.steps = {2};
  c.ells = {0};
  c.mc_time = 0.0;
  c.threads = 1;
  return c;
}

CheckReport check_mc_convergence(const std::vector<std::int64_t>& iterations) {
  CheckReport report{"mc_convergence", {}};
  const ExperimentConfig config = mc_check_config();
  const McProblem p = make_mc_problem(config, 3, 2);
  const Complex reference = trotterized_trace(p.tables.forward, p.tables.backward, 2, p.a_diag,
                                              p.b_diag, p.partition_function);
  std::vector<double> ms, ses;
  for (const auto m : iterations) {
    SamplerConfig sc;
    sc.iterations = m;
    sc.seed = config.seed;
    const McResult r = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
    const double z_score = std::abs(r.estimate - reference) / r.standard_error;
    std::ostringstream detail;
    detail << "estimate " << format_double(r.estimate.real()) << " reference "
           << format_double(reference.real()) << " se " << format_double(r.standard_error);
    report.add("within_3se_M" + std::to_string(m), z_score <= 3.0, z_score, 3.0, detail.str());
    ms.push_back(static_cast<double>(m));
    ses.push_back(r.standard_error);
  }
  if (ms.size() >= 2) {
    const double slope = log_log_slope(ms, ses);
    report.add("standard_error_slope", std::abs(slope + 0.5) <= 0.1, slope, -0.5,
               "tolerance 0.1");
  }
  SamplerConfig sc;
  sc.iterations = iterations.front();
  sc.seed = config.seed;
  const McResult first = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  const McResult second = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  const bool identical = first.estimate == second.estimate &&
                         first.standard_error == second.standard_error;
  report.add("seeded_runs_identical", identical, identical ? 1.0 : 0.0, 1.0);
  return report;
}

}  // namespace hpimc

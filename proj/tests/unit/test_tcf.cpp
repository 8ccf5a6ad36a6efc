#include "hpimc/hamiltonian.hpp"
#include "hpimc/tcf.hpp"
#include "hpimc/units.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace hpimc;

namespace {

const DoubleWell kWell{1836.0, units::wavenumber_to_hartree(500.0),
                       units::wavenumber_to_hartree(1500.0)};

// Symmetrized position autocorrelation of the harmonic oscillator.
double harmonic_tcf(double t, double mass, double omega, double beta) {
  return std::cos(omega * t) / (2.0 * mass * omega * std::sinh(beta * omega / 2.0));
}

}  // namespace

TEST_CASE("observables") {
  const auto g = make_grid(2.0, 2);
  const Eigen::VectorXd x = Observable::position().diagonal(g);
  CHECK(x[0] == -1.0);
  CHECK(x[3] == 0.5);
  CHECK(Observable::tabulated({1, 2, 3, 4}).diagonal(g)[2] == 3.0);
  CHECK_THROWS_AS(Observable::tabulated({1, 2}).diagonal(g), std::invalid_argument);
}

TEST_CASE("series validation and normalization") {
  TcfSeries s;
  s.times = {0.0, 1.0, 2.0};
  s.values = {Complex(0.5, 0.5), Complex(-2.0, 1.0), Complex(0.0, 1.0)};
  CHECK_NOTHROW(s.validate());
  const auto n = normalize(s);
  CHECK(n.normalized);
  double mx = 0.0;
  for (const auto& v : n.values) mx = std::max(mx, std::abs(v));
  CHECK(mx == 1.0);
  CHECK(std::arg(n.values[1]) == doctest::Approx(std::arg(s.values[1])));
  const auto nn = normalize(n);
  for (std::size_t i = 0; i < 3; ++i) CHECK(nn.values[i] == n.values[i]);
  const auto r = normalize(s, Normalization::max_real);
  CHECK(r.values[1].real() == -1.0);
  CHECK(max_deviation(n, n) == 0.0);

  TcfSeries bad = s;
  bad.times = {0.0, 0.0, 1.0};
  CHECK_THROWS(bad.validate());
  bad.times = {0.0, 1.0};
  CHECK_THROWS(bad.validate());

  const auto t = uniform_times(10.0, 5);
  CHECK(t.front() == 0.0);
  CHECK(t.back() == 10.0);
  CHECK(t[1] == 2.5);
}

TEST_CASE("identity observables give a constant one") {
  const auto g = make_grid(30.0, 5);
  const auto s = eigendecompose(assemble_dense(g, kWell, kWell.mass));
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(32);
  const auto c = exact_tcf(s, one, one, 900.0, uniform_times(5000.0, 11));
  for (const auto& v : c.values) {
    CHECK(std::abs(v - 1.0) < 1e-12);
  }
}

TEST_CASE("exact TCF at t = 0 is the thermal second moment") {
  const auto g = make_grid(30.0, 6);
  const auto s = eigendecompose(assemble_dense(g, kWell, kWell.mass));
  const Eigen::VectorXd x = g.positions();
  const double beta = 900.0;
  const auto c = exact_tcf(s, x, x, beta, {0.0});
  const Eigen::MatrixXd rho = s.real_exponential(-beta);
  const double second = (rho * x.cwiseProduct(x).asDiagonal()).trace() / rho.trace();
  CHECK(c.values[0].imag() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(c.values[0].real() > 0.0);
  // Symmetrized form at t = 0 is Tr(rho^{1/2} x rho^{1/2} x) / Z, bounded by <x^2>.
  CHECK(c.values[0].real() <= second * (1 + 1e-12));
  CHECK(c.values[0].real() > 0.9 * second);
}

TEST_CASE("harmonic oscillator closed form") {
  const auto g = make_grid(40.0, 9);
  const auto s = eigendecompose(assemble_dense(g, Harmonic{1.0, 1.0}, 1.0));
  const Eigen::VectorXd x = g.positions();
  const auto times = uniform_times(10.0, 41);
  for (const double beta : {1.0, 10.0}) {
    const auto c = exact_tcf(s, x, x, beta, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(std::abs(c.values[i] - harmonic_tcf(times[i], 1.0, 1.0, beta)) < 1e-8);
    }
  }
}

TEST_CASE("shift invariance and time reversal") {
  const auto g = make_grid(30.0, 5);
  const auto h = assemble_dense(g, kWell, kWell.mass);
  const auto s = eigendecompose(h);
  const auto s2 = eigendecompose(Eigen::MatrixXd(h.matrix + 0.37 * Eigen::MatrixXd::Identity(32, 32)));
  const Eigen::VectorXd x = g.positions();
  const std::vector<double> times{-300.0, -10.0, 0.0, 10.0, 300.0};
  const auto a = exact_tcf(s, x, x, 900.0, times);
  const auto b = exact_tcf(s2, x, x, 900.0, times);
  CHECK(max_deviation(a, b) < 1e-10);
  CHECK(std::abs(a.values[0] - std::conj(a.values[4])) < 1e-12);
  CHECK(std::abs(a.values[1] - std::conj(a.values[3])) < 1e-12);
}

TEST_CASE("matrix power") {
  Eigen::MatrixXcd m(2, 2);
  m << Complex(0.5, 0.1), Complex(0.2, 0.0), Complex(-0.3, 0.2), Complex(0.9, -0.4);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(2, 2);
  for (int i = 0; i < 13; ++i) p = p * m;
  CHECK((matrix_power(m, 13) - p).norm() < 1e-14);
  CHECK(matrix_power(m, 0) == Eigen::MatrixXcd::Identity(2, 2));
}

TEST_CASE("Trotterized trace equals the explicit nested sum") {
  const auto g = make_grid(4.0, 3);
  const Harmonic pot{1.0, 1.0};
  const double beta = 1.5;
  const int n = 2;
  const auto s = eigendecompose(assemble_dense(g, pot, 1.0));
  const double shift = s.eigenvalues[0];
  const double z = s.partition_function(beta, shift);
  const PropagatorContext ctx(g, pot, 1.0, StepScheme(SchemeOptions{}, 0.9, beta, n), shift);
  const Eigen::MatrixXcd f = ctx.step_matrix(PathDirection::forward);
  const Eigen::MatrixXcd b = ctx.step_matrix(PathDirection::backward);
  const Eigen::VectorXd x = g.positions();
  Complex sum{};
  for (Index j0 = 0; j0 < 8; ++j0)
    for (Index j1 = 0; j1 < 8; ++j1)
      for (Index j2 = 0; j2 < 8; ++j2)
        for (Index j3 = 0; j3 < 8; ++j3)
          sum += x[j0] * f(j1, j0) * f(j2, j1) * x[j2] * b(j3, j2) * b(j0, j3);
  sum /= z;
  const Complex trace = trotterized_trace(f, b, n, x, x, z);
  CHECK(std::abs(trace - sum) <= 1e-10 * std::abs(sum));

  TrotterSetup setup{g, pot, 1.0, SchemeOptions{}, n, beta, std::nullopt, 1};
  const auto series = trotterized_tcf(setup, x, x, {0.0, 0.9});
  CHECK(std::abs(series.values[1] - sum) <= 1e-10 * std::abs(sum));
}

TEST_CASE("identity observables: time dependence vanishes with more steps") {
  // Exactly, Tr(U^dagger U)/Z = 1 for all t. The split factors do not commute, so the
  // Trotterized value drifts with t by an amount that shrinks as N grows.
  const auto g = make_grid(30.0, 5);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(32);
  const auto times = uniform_times(3000.0, 7);
  double drift[2] = {0.0, 0.0};
  const int steps[2] = {10, 80};
  for (int i = 0; i < 2; ++i) {
    TrotterSetup setup{g, kWell, kWell.mass, SchemeOptions{}, steps[i], 900.0, std::nullopt, 1};
    const auto c = trotterized_tcf(setup, one, one, times);
    for (const auto& v : c.values) {
      drift[i] = std::max(drift[i], std::abs(v - 1.0));
    }
    if (i == 0) {
      CHECK(c.metadata.at("method") == "trotterized_quadrature");
    }
  }
  CHECK(drift[1] < drift[0]);
}

TEST_CASE("Trotterized TCF converges as N grows") {
  const auto g = make_grid(30.0, 6);
  const auto s = eigendecompose(assemble_dense(g, kWell, kWell.mass));
  const Eigen::VectorXd x = g.positions();
  const auto times = uniform_times(3000.0, 16);
  const auto exact = normalize(exact_tcf(s, x, x, units::kelvin_to_beta(350.0), times));
  double previous = INFINITY;
  for (const int n : {10, 20, 40, 80}) {
    TrotterSetup setup{g, kWell, kWell.mass, SchemeOptions{}, n, units::kelvin_to_beta(350.0),
                       std::nullopt, 1};
    const double dev = max_deviation(normalize(trotterized_tcf(setup, x, x, times)), exact);
    CHECK(dev < previous);
    previous = dev;
  }
  CHECK(previous < 0.05);
}

TEST_CASE("file-backed caches reproduce the uncached series") {
  const auto dir = std::filesystem::temp_directory_path() / "hpimc_tcf_cache";
  std::filesystem::remove_all(dir);
  const auto g = make_grid(30.0, 4);
  const Eigen::VectorXd x = g.positions();
  TrotterSetup setup{g, kWell, kWell.mass, SchemeOptions{}, 8, 900.0, std::nullopt, 1};
  const auto plain = trotterized_tcf(setup, x, x, uniform_times(1000.0, 4));
  setup.cache_dir = dir;
  const auto cold = trotterized_tcf(setup, x, x, uniform_times(1000.0, 4));
  const auto warm = trotterized_tcf(setup, x, x, uniform_times(1000.0, 4));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(cold.values[i] == plain.values[i]);
    CHECK(warm.values[i] == plain.values[i]);
  }
}

#include "hpimc/checks.hpp"
#include "hpimc/experiments.hpp"
#include "hpimc/path_sampling.hpp"
#include "hpimc/tcf.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace hpimc;

namespace {

StepTables random_tables(Index d, int steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  StepTables t{Eigen::MatrixXcd(d, d), Eigen::MatrixXcd(d, d), steps};
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      t.forward(i, j) = Complex(n(rng), n(rng));
      t.backward(i, j) = Complex(n(rng), n(rng));
    }
  }
  return t;
}

}  // namespace

TEST_CASE("path weight for N = 1, D = 2 by hand") {
  const auto tables = random_tables(4, 1, 1);
  StepTables t{tables.forward.topLeftCorner(2, 2), tables.backward.topLeftCorner(2, 2), 1};
  for (Index a = 0; a < 2; ++a) {
    for (Index b = 0; b < 2; ++b) {
      const std::vector<Index> path{a, b};
      const Complex expected = t.forward(b, a) * t.backward(a, b);
      CHECK(std::abs(theta_weight(path, t) - expected) < 1e-15);
    }
  }
  CHECK_THROWS_AS(theta_weight(std::vector<Index>{0, 1, 0}, t), std::invalid_argument);
}

TEST_CASE("path weight for N = 2") {
  const auto t = random_tables(3, 2, 2);
  const std::vector<Index> p{2, 0, 1, 1};
  const Complex expected = t.forward(0, 2) * t.forward(1, 0) * t.backward(1, 1) * t.backward(2, 1);
  CHECK(std::abs(theta_weight(p, t) - expected) < 1e-14);
  const auto sample = make_path_sample(p, t);
  CHECK(std::abs(std::abs(sample.phase) - 1.0) < 1e-15);
  CHECK_THROWS_AS(make_path_sample({0, 1, 2, 3}, t), std::invalid_argument);
  CHECK(unit_phase(Complex{}) == Complex(1.0, 0.0));
  CHECK(unit_phase(Complex(-2.0, 0.0)) == Complex(-1.0, 0.0));
}

TEST_CASE("enumeration reproduces the trace and bounds it") {
  const auto config = mc_check_config();
  const McProblem p = make_mc_problem(config, 3, 2);
  const auto all = enumerate_paths(p.tables, p.grid, p.a_diag, p.b_diag);
  const Complex trace = trotterized_trace(p.tables.forward, p.tables.backward, 2, p.a_diag,
                                          p.b_diag, p.partition_function);
  CHECK(std::abs(all.sum / p.partition_function - trace) < 1e-12 * std::abs(trace));
  CHECK(all.f >= std::abs(all.sum) / p.a_diag.cwiseAbs().maxCoeff() / p.b_diag.cwiseAbs().maxCoeff());
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(8);
  const auto plain = enumerate_paths(p.tables, p.grid, one, one);
  CHECK(plain.f >= std::abs(plain.sum));
  CHECK(path_distribution_f(p.tables, p.grid) == doctest::Approx(plain.f).epsilon(1e-14));
  CHECK_THROWS_AS(enumerate_paths(p.tables, p.grid, one, one, unit_influence, 100),
                  std::invalid_argument);
}

TEST_CASE("pure imaginary time with positive elements gives unit phases") {
  StepTables t{Eigen::MatrixXcd::Constant(4, 4, Complex(0.2, 0.0)),
               Eigen::MatrixXcd::Constant(4, 4, Complex(0.3, 0.0)), 2};
  t.forward.diagonal().setConstant(Complex(0.9, 0.0));
  const auto g = make_grid(4.0, 2);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Index> pick(0, 3);
  for (int i = 0; i < 50; ++i) {
    std::vector<Index> p(4);
    for (auto& b : p) b = pick(rng);
    const auto s = make_path_sample(p, t);
    CHECK(s.theta.real() > 0.0);
    CHECK(s.phase == Complex(1.0, 0.0));
  }
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(4);
  const auto all = enumerate_paths(t, g, one, one);
  CHECK(all.f == doctest::Approx(all.sum.real()).epsilon(1e-14));
}

TEST_CASE("Monte Carlo estimate agrees with quadrature") {
  const auto config = mc_check_config();
  const McProblem p = make_mc_problem(config, 3, 2);
  const Complex reference = trotterized_trace(p.tables.forward, p.tables.backward, 2, p.a_diag,
                                              p.b_diag, p.partition_function);
  SamplerConfig sc;
  sc.iterations = 40'000;
  const auto r = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  CHECK(r.f_exact);
  CHECK(r.f_standard_error == 0.0);
  CHECK(std::abs(r.estimate - reference) <= 3.0 * r.standard_error);
  CHECK(r.acceptance_rate > 0.0);
  CHECK(r.acceptance_rate <= 1.0);

  const auto twin = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  CHECK(twin.estimate == r.estimate);
  CHECK(twin.standard_error == r.standard_error);
  sc.seed = 999;
  const auto other = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  CHECK(other.estimate != r.estimate);
}

TEST_CASE("identity observables estimate F/Z times the mean phase") {
  const auto config = mc_check_config();
  const McProblem p = make_mc_problem(config, 3, 2);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(8);
  const Complex reference =
      trotterized_trace(p.tables.forward, p.tables.backward, 2, one, one, p.partition_function);
  SamplerConfig sc;
  sc.iterations = 20'000;
  const auto r = mc_tcf(p.tables, p.grid, one, one, p.partition_function, sc);
  CHECK(std::abs(r.estimate - reference) <= 3.0 * r.standard_error + 1e-12);
}

TEST_CASE("constant influence scales the estimate exactly") {
  const auto config = mc_check_config();
  const McProblem p = make_mc_problem(config, 3, 2);
  SamplerConfig sc;
  sc.iterations = 5'000;
  const auto base = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  const Complex c(0.5, 0.5);
  const auto scaled = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc,
                             [c](std::span<const double>) { return c; });
  CHECK(std::abs(scaled.estimate - c * base.estimate) < 1e-12 * std::abs(base.estimate));
  CHECK(unit_influence(std::span<const double>{}) == Complex(1.0, 0.0));
}

TEST_CASE("a position-dependent influence is sampled consistently") {
  ExperimentConfig config = mc_check_config();
  config.mc_time = 2.0;
  const McProblem p = make_mc_problem(config, 3, 2);
  const int n = p.tables.steps;
  SamplerConfig sc;
  sc.iterations = 20'000;
  const InfluenceHook damping = [n](std::span<const double> x) {
    // Forward bead k pairs with backward bead 2N - k.
    double s = 0.0;
    for (int k = 1; k < n; ++k) {
      const double d = x[k] - x[2 * n - k];
      s += d * d;
    }
    return Complex(std::exp(-2.0 * s), 0.0);
  };
  const auto damped = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc, damping);
  const auto exact = enumerate_paths(p.tables, p.grid, p.a_diag, p.b_diag, damping);
  CHECK(damped.f_exact);
  CHECK(damped.f_estimate == doctest::Approx(exact.f).epsilon(1e-12));
  CHECK(std::abs(damped.estimate - exact.sum / p.partition_function) <=
        4.0 * damped.standard_error);
}

TEST_CASE("F is estimated when enumeration is too large") {
  const auto config = mc_check_config();
  const McProblem p = make_mc_problem(config, 3, 2);
  SamplerConfig sc;
  sc.iterations = 40'000;
  sc.enumeration_limit = 100;
  const auto r = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  CHECK_FALSE(r.f_exact);
  const double exact_f = path_distribution_f(p.tables, p.grid);
  CHECK(std::abs(r.f_estimate - exact_f) <= 4.0 * r.f_standard_error);
}

TEST_CASE("stuck sampler and argument errors") {
  StepTables t{Eigen::MatrixXcd::Zero(4, 4), Eigen::MatrixXcd::Zero(4, 4), 1};
  t.forward(0, 0) = 1.0;
  t.backward(0, 0) = 1.0;
  const auto g = make_grid(4.0, 2);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(4);
  SamplerConfig sc;
  sc.iterations = 64;
  CHECK_THROWS_AS(mc_tcf(t, g, one, one, 1.0, sc), SamplerStuckError);
  sc.batches = 1;
  CHECK_THROWS_AS(mc_tcf(t, g, one, one, 1.0, sc), std::invalid_argument);
  sc.batches = 32;
  CHECK_THROWS_AS(mc_tcf(t, g, one, one, 0.0, sc), std::invalid_argument);
  CHECK_THROWS_AS(mc_tcf(t, make_grid(4.0, 3), one, one, 1.0, sc), std::invalid_argument);
}

TEST_CASE("parallel chains merge deterministically") {
  const auto config = mc_check_config();
  const McProblem p = make_mc_problem(config, 3, 2);
  SamplerConfig sc;
  sc.iterations = 4'000;
  sc.chains = 4;
  sc.threads = 1;
  const auto serial = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  sc.threads = 4;
  const auto parallel = mc_tcf(p.tables, p.grid, p.a_diag, p.b_diag, p.partition_function, sc);
  CHECK(serial.estimate == parallel.estimate);
  CHECK(serial.standard_error == parallel.standard_error);
}

#include "hpimc/experiments.hpp"

#include "doctest.h"

#include <charconv>
#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hpimc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hpimc_exp_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_fig1() {
  return make_experiment_config(
      KeyValueConfig::parse("qubits = 4, 5\nsteps = 10\nreference_qubits = 6\n"
                            "t_max = 2000\ntime_points = 12\nthreads = 1\n"),
      "b");
}

}  // namespace

TEST_CASE("number formatting is full precision and locale independent") {
  CHECK(format_double(0.1) == "1.00000000000000006e-01");
  for (const double v : {-2.5e-300, 1.0 / 3.0, 6.02214076e23, 5e-324}) {
    const std::string text = format_double(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == v);
  }
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  CHECK(format_double(1.5) == "1.50000000000000000e+00");
  std::setlocale(LC_NUMERIC, "C");
}

TEST_CASE("fig1 output files and headers") {
  const auto config = small_fig1();
  const auto dir = scratch("fig1");
  const auto files = run_fig1("b", config, dir);
  REQUIRE(files.size() == 4);
  CHECK(files[0].filename() == "fig1b_exact.csv");
  CHECK(files[1].filename() == "fig1b_approx_n4_N10_ell0.csv");
  CHECK(files[3].filename() == "fig1b_summary.csv");
  const std::string text = slurp(files[2]);
  CHECK(text.rfind("# hpimc " + version() + "\n", 0) == 0);
  CHECK(text.find("# fingerprint: ") != std::string::npos);
  CHECK(text.find("# config: qubits = 4, 5\n") != std::string::npos);
  CHECK(text.find("# source: reference_qubits = 6\n") != std::string::npos);
  CHECK(text.find("# meta scheme: ") != std::string::npos);
  CHECK(text.find("\nt,re,im\n") != std::string::npos);
  std::istringstream lines(text);
  int rows = 0;
  double max_mag = 0.0;
  for (std::string line; std::getline(lines, line);) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    ++rows;
    double t = 0.0, re = 0.0, im = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream row(line);
    row >> t >> c1 >> re >> c2 >> im;
    CHECK(c1 == ',');
    max_mag = std::max(max_mag, std::hypot(re, im));
  }
  CHECK(rows == 12);
  CHECK(max_mag == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("identical configs give byte-identical CSVs") {
  const auto config = small_fig1();
  const auto a = run_fig1("b", config, scratch("det_a"));
  const auto b = run_fig1("b", config, scratch("det_b"));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(slurp(a[i]) == slurp(b[i]));
  }
}

TEST_CASE("panel d default records its parameters") {
  auto config = make_experiment_config(KeyValueConfig::parse("time_points = 8\n"), "d");
  const auto files = run_fig1("d", config, scratch("panel_d"));
  const std::string text = slurp(files[1]);
  CHECK(files[1].filename() == "fig1d_approx_n6_N40_ell4.csv");
  CHECK(text.find("# config: steps = 40\n") != std::string::npos);
  CHECK(text.find("# config: qubits = 6\n") != std::string::npos);
  CHECK(text.find("# config: ell = 4\n") != std::string::npos);
  CHECK(text.find("# meta steps: 40\n") != std::string::npos);
  CHECK(text.find("imag=trotter1_dvr(ell=4)") != std::string::npos);
}

TEST_CASE("bounds rows") {
  const auto one = compute_bounds(1.0, 512);
  const auto hundred = compute_bounds(100.0, 512);
  REQUIRE(one.size() == 509);
  CHECK(one.front().ell == 1);
  CHECK(one.back().ell == 509);
  CHECK(one.front().exact == 1.0);
  for (std::size_t i = 0; i < one.size(); ++i) {
    REQUIRE(one[i].lower < one[i].exact);
    REQUIRE(one[i].exact < one[i].upper);
    REQUIRE(hundred[i].exact == doctest::Approx(one[i].exact).epsilon(1e-13));
    REQUIRE(hundred[i].lower == doctest::Approx(one[i].lower).epsilon(1e-13));
    REQUIRE(hundred[i].upper == doctest::Approx(one[i].upper).epsilon(1e-13));
  }
  const auto small = compute_bounds(1.0, 8);
  CHECK(small[1].ell == 2);
  CHECK_THROWS_AS(compute_bounds(1.0, 4), std::invalid_argument);

  auto config = make_experiment_config(KeyValueConfig::parse("bounds_k = 1, 100\n"), "");
  const auto files = run_bounds(config, scratch("bounds"));
  REQUIRE(files.size() == 2);
  const std::string text = slurp(files[0]);
  CHECK(text.find("\nell,delta_exact,delta_lower,delta_upper\n1,") != std::string::npos);
}

TEST_CASE("Monte Carlo output") {
  auto config = make_experiment_config(
      KeyValueConfig::parse("experiment = mc\npotential = harmonic\nmass = 1\nbeta = 2\n"
                            "length = 6\nqubits = 3\nsteps = 2\nmc_iterations = 2000\n"),
      "");
  const auto rows = compute_mc(config);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0].result.estimate - rows[0].reference) <= 4 * rows[0].result.standard_error);
  const auto files = run_mc(config, scratch("mc"));
  CHECK(slurp(files[0]).find("\nsteps,iterations,re,im,standard_error") != std::string::npos);
}

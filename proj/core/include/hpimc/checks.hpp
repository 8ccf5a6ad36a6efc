#pragma once

#include "hpimc/config.hpp"
#include "hpimc/sparse_decomp.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hpimc {

struct CheckItem {
  std::string name;
  bool passed;
  double measured;
  double threshold;
  std::string detail;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckItem> items;

  bool passed() const;
  void add(std::string name, bool passed, double measured, double threshold,
           std::string detail = "");
};

std::vector<std::string> check_suites();

// Throws std::invalid_argument for an unknown suite name.
CheckReport run_check(const std::string& suite);

std::string to_json(const CheckReport& report);

// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Random real symmetric 1-sparse matrix: a random pairing of indices into 2x2 blocks,
// some diagonal entries and some empty rows.
OneSparseMatrix random_one_sparse(Index dimension, std::mt19937_64& rng);

// Harmonic test system of the Monte Carlo suite: m = 1, omega = 1, beta = 2, L = 6, D = 8,
// N = 2, t = 0.
ExperimentConfig mc_check_config();

// Individual suites, exposed for tests and the acceptance runner.
CheckReport check_decompose(const std::vector<int>& sizes = {4, 8, 16, 32, 64});
CheckReport check_onesparse_exp(int trials = 100, Index dimension = 32, std::uint64_t seed = 7);
CheckReport check_trotter_slopes();
CheckReport check_error_bound(int trials = 100, std::uint64_t seed = 11);
CheckReport check_mc_convergence(const std::vector<std::int64_t>& iterations = {10'000, 100'000,
                                                                                 1'000'000});

}  // namespace hpimc

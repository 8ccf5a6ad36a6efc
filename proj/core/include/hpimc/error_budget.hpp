#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace hpimc {

// Schatten-1 norm (sum of singular values).
double trace_norm(const Eigen::MatrixXcd& m);
double trace_norm(const Eigen::MatrixXd& m);
// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& m);

// (2/Z) |A|_1 |B|_1 |e^{-beta H/2}|_1 eps_U.
double tcf_error_bound(double norm1_a, double norm1_b, double norm1_thermal, double eps_u,
                       double partition_function);

struct BudgetInputs {
  double eps_total = 0.0;
  // Share of eps_total carried by the propagator term: eps_C / 2 = split * eps.
  double split = 0.5;
  int k = 1;                 // Suzuki order 2k
  double norm_h1 = 0.0;      // the two non-commuting pieces of H
  double norm_h2 = 0.0;
  double tc_magnitude = 0.0; // |t - i beta/2|
  double norm1_a = 0.0;
  double norm1_b = 0.0;
  double norm1_thermal = 0.0;
  double partition_function = 0.0;
};

struct ErrorBudget {
  double eps_total;
  double eps_c;
  double eps_mc;
  std::int64_t mc_iterations;  // M = ceil(1 / eps_MC^2)
  std::int64_t trotter_steps;  // N, implied constant 1, at least 1
  double omega;
  int k;
};

ErrorBudget error_budget(const BudgetInputs& in);

// |t_c| for t_c = t - i beta / 2.
double complex_time_magnitude(double t, double beta);

struct CostModel {
  double pimc_runtime;   // M N + P^{3d}
  double pimc_space;     // P^d x P^d
  double hpimc_runtime;  // M N Q
  double hpimc_space;    // d ceil(log2 P) + anc
};

CostModel cost_model(double m, double n, double p, int d, double q_u, double anc_u);

}  // namespace hpimc

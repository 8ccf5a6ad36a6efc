#pragma once

#include "hpimc/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hpimc {

// Forward and backward short-time element tables: forward(r, c) = <r|U|c>,
// backward(r, c) = <r|U_b|c>.
struct StepTables {
  Eigen::MatrixXcd forward;
  Eigen::MatrixXcd backward;
  int steps;

  Index dimension() const { return forward.rows(); }
};

// Closed path x_0 .. x_{2N-1}; x_{2N} is x_0 by trace closure. Beads 0..N form the
// forward path, beads N..2N the backward path. A sits on x_N, B on x_0.
struct PathSample {
  std::vector<Index> beads;
  Complex theta;
  Complex phase;  // theta / |theta| (sign of theta when real)
};

// Pure function of the full closed path positions x_0 .. x_{2N}.
using InfluenceHook = std::function<Complex(std::span<const double> positions)>;

// Gas-phase default: I(x) = 1.
Complex unit_influence(std::span<const double> positions);

// prod_{k=0}^{N-1} <x_{k+1}|U|x_k> * prod_{k=N}^{2N-1} <x_{k+1}|U_b|x_k>.
Complex theta_weight(std::span<const Index> beads, const StepTables& tables);

PathSample make_path_sample(std::vector<Index> beads, const StepTables& tables);

// Unit phase of a complex weight; 1 for a zero weight.
Complex unit_phase(Complex theta);

struct EnumeratedPaths {
  double f;      // sum |Theta I| over all D^{2N} paths
  Complex sum;   // sum A(x_N) B(x_0) Theta I
};

// Exhaustive enumeration; throws when D^{2N} exceeds `limit`.
EnumeratedPaths enumerate_paths(const StepTables& tables, const UniformGrid& grid,
                                const Eigen::VectorXd& a_diag, const Eigen::VectorXd& b_diag,
                                const InfluenceHook& influence = unit_influence,
                                std::int64_t limit = 1'000'000);

double path_distribution_f(const StepTables& tables, const UniformGrid& grid,
                           const InfluenceHook& influence = unit_influence,
                           std::int64_t limit = 1'000'000);

struct SamplerConfig {
  std::int64_t iterations = 10'000;  // measured sweeps per chain
  int window = 0;                    // +-w grid points; 0 means max(1, D/8)
  double burn_in_fraction = 0.1;
  int batches = 32;
  int chains = 1;
  std::uint64_t seed = 12345;
  std::int64_t enumeration_limit = 1'000'000;
  int threads = 1;
};

struct McResult {
  Complex estimate;
  double standard_error;
  double f_estimate;
  double f_standard_error;  // 0 when F was enumerated exactly
  bool f_exact;
  double acceptance_rate;
  std::int64_t iterations;
};

class SamplerStuckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Metropolis sampling of bead space with stationary weight |Theta I|. Estimator
// (F/Z) < A(x_N) B(x_0) phase(Theta I) >. Each iteration is one sweep proposing a
// uniform displacement in [-w, w] \ {0} (periodic) for every bead in turn.
McResult mc_tcf(const StepTables& tables, const UniformGrid& grid, const Eigen::VectorXd& a_diag,
                const Eigen::VectorXd& b_diag, double partition_function,
                const SamplerConfig& config, const InfluenceHook& influence = unit_influence);

}  // namespace hpimc

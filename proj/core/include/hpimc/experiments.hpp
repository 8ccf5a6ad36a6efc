#pragma once

#include "hpimc/config.hpp"
#include "hpimc/path_sampling.hpp"
#include "hpimc/tcf.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hpimc {

std::string version();

// Shortest round-trip scientific form, independent of the global locale.
std::string format_double(double v);

struct LabeledSeries {
  std::string label;  // e.g. "n8_N80_ell0"
  int qubits;
  int steps;
  int ell;
  TcfSeries series;   // normalized
};

struct Fig1Result {
  std::string panel;
  TcfSeries exact;  // normalized, reference grid
  std::vector<LabeledSeries> approx;
  // Deviation of each approximation from the exact curve, same order as `approx`.
  std::vector<double> deviations;
};

Fig1Result compute_fig1(const std::string& panel, const ExperimentConfig& config);
// exact.csv, one approx_<label>.csv per member and summary.csv; returns the written paths.
std::vector<std::filesystem::path> write_fig1(const Fig1Result& result,
                                              const ExperimentConfig& config,
                                              const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> run_fig1(const std::string& panel,
                                            const ExperimentConfig& config,
                                            const std::filesystem::path& out_dir);

struct BoundsRow {
  int ell;
  double exact;
  double lower;
  double upper;
};

// Rows for ell in [1, D-3], normalized by max exact error.
std::vector<BoundsRow> compute_bounds(double kinetic_scale, int num_points);
std::vector<std::filesystem::path> run_bounds(const ExperimentConfig& config,
                                              const std::filesystem::path& out_dir);

struct McRow {
  int steps;
  std::int64_t iterations;
  McResult result;
  Complex reference;  // quadrature value for the same scheme and N
};

// Element tables for one (t, beta, N) plus the partition function and energy shift
// that go with them.
struct McProblem {
  UniformGrid grid;
  StepTables tables;
  double partition_function;
  Eigen::VectorXd a_diag;
  Eigen::VectorXd b_diag;
};

McProblem make_mc_problem(const ExperimentConfig& config, int qubits, int steps);
std::vector<McRow> compute_mc(const ExperimentConfig& config);
std::vector<std::filesystem::path> run_mc(const ExperimentConfig& config,
                                          const std::filesystem::path& out_dir);

// Text after "# " for every header line: version, fingerprint and the verbatim config.
std::vector<std::string> provenance_header(const ExperimentConfig& config,
                                           const std::string& fingerprint_hex);

}  // namespace hpimc

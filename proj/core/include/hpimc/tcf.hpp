#pragma once

#include "hpimc/grid.hpp"
#include "hpimc/hamiltonian.hpp"
#include "hpimc/propagators.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hpimc {

// Observable diagonal in the position representation.
class Observable {
 public:
  static Observable position() { return Observable(std::nullopt); }
  static Observable tabulated(std::vector<double> values) { return Observable(std::move(values)); }

  bool is_position() const { return !values_.has_value(); }
  // diag(x_q) for position; the table otherwise (length must equal D).
  Eigen::VectorXd diagonal(const UniformGrid& grid) const;

 private:
  explicit Observable(std::optional<std::vector<double>> values) : values_(std::move(values)) {}
  std::optional<std::vector<double>> values_;
};

struct TcfSeries {
  std::vector<double> times;
  std::vector<Complex> values;
  bool normalized = false;
  std::map<std::string, std::string> metadata;

  // Throws unless times strictly increase and lengths agree.
  void validate() const;
};

enum class Normalization { max_magnitude, max_real };

// Divides by max |C| (or max |Re C|). Idempotent and phase preserving.
TcfSeries normalize(const TcfSeries& series, Normalization mode = Normalization::max_magnitude);

// max_t |a(t) - b(t)| over a shared time grid.
double max_deviation(const TcfSeries& a, const TcfSeries& b);

std::vector<double> uniform_times(double t_max, int count);

// C(t) = (1/Z) sum_{mn} e^{-beta(E_m+E_n)/2} e^{i(E_m-E_n)t} A_mn B_nm, with A and B
// given as position-diagonal values and rotated into the eigenbasis. Energies are
// shifted by E_0 internally.
TcfSeries exact_tcf(const Spectrum& spectrum, const Eigen::VectorXd& a_diag,
                    const Eigen::VectorXd& b_diag, double beta, const std::vector<double>& times);

// Everything needed to build the short-time propagators of a Trotterized TCF.
struct TrotterSetup {
  UniformGrid grid;
  PotentialSpec potential;
  double mass;
  SchemeOptions options;
  int steps;
  double beta;
  // When set, element tables are filled through file-backed caches there.
  std::optional<std::filesystem::path> cache_dir;
  int threads = 0;  // 0: hardware concurrency
};

// X^N by binary powering.
Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& x, int n);

// (1/Z) Tr(Ub^N A Uf^N B) for the forward/backward step matrices.
Complex trotterized_trace(const Eigen::MatrixXcd& forward, const Eigen::MatrixXcd& backward,
                          int steps, const Eigen::VectorXd& a_diag, const Eigen::VectorXd& b_diag,
                          double partition_function);

// Each time point t gets dt = t/N at fixed N; Z and the energy shift come from the eigen-oracle
// of the DVR Hamiltonian on the same grid.
TcfSeries trotterized_tcf(const TrotterSetup& setup, const Eigen::VectorXd& a_diag,
                          const Eigen::VectorXd& b_diag, const std::vector<double>& times);

// Runs body(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace hpimc

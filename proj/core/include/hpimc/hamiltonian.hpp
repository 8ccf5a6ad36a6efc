#pragma once

#include "hpimc/grid.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <variant>
#include <vector>

namespace hpimc {

// V(x) = -1/2 m wb^2 x^2 + m^2 wb^4 / (16 V0) x^4; minima at -V0.
struct DoubleWell {
  double mass;
  double barrier_frequency;
  double barrier_height;
};

struct Harmonic {
  double mass;
  double frequency;
};

// One value per grid point.
struct Tabulated {
  std::vector<double> values;
};

using PotentialSpec = std::variant<DoubleWell, Harmonic, Tabulated>;

double double_well_value(double x, double mass, double barrier_frequency, double barrier_height);
// Positive root of dV/dx = 0: sqrt(4 V0 / (m wb^2)).
double double_well_minimum(double mass, double barrier_frequency, double barrier_height);
double harmonic_value(double x, double mass, double frequency);

void validate(const PotentialSpec& potential, const UniformGrid& grid);
Eigen::VectorXd potential_on_grid(const PotentialSpec& potential, const UniformGrid& grid);

enum class KineticModel { dvr, fourier };

// Sinc-DVR kinetic matrix keeping diagonals [1, ell]; ell = 0 keeps all.
Eigen::MatrixXd dvr_kinetic_matrix(const UniformGrid& grid, double mass, int ell = 0);
// Dense form of F^-1 diag(p_k^2 / 2m) F with p_k = 2 pi k / L, k in [-D/2, D/2).
Eigen::MatrixXd fourier_kinetic_matrix(const UniformGrid& grid, double mass);

struct DenseHamiltonian {
  Eigen::MatrixXd matrix;
  UniformGrid grid;
  double mass;
  Eigen::VectorXd potential;
};

DenseHamiltonian assemble_dense(const UniformGrid& grid, const PotentialSpec& potential,
                                double mass, KineticModel kinetic = KineticModel::dvr,
                                int ell = 0);

class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Eigen-oracle result; eigenvalues ascending, eigenvectors in columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  Index size() const { return eigenvalues.size(); }
  // E diag(exp(z * lambda)) E^T. z = -i t gives e^{-iHt}, z = -beta/2 gives e^{-beta H/2}.
  Eigen::MatrixXcd exponential(Complex z) const;
  Eigen::MatrixXd real_exponential(double z) const;
  // sum_n exp(-beta (E_n - shift)).
  double partition_function(double beta, double shift = 0.0) const;
  Eigen::MatrixXd reconstruct() const;
};

Spectrum eigendecompose(const Eigen::MatrixXd& symmetric);
inline Spectrum eigendecompose(const DenseHamiltonian& h) { return eigendecompose(h.matrix); }

}  // namespace hpimc

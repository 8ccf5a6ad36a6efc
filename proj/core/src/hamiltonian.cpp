#include "hpimc/hamiltonian.hpp"

#include "hpimc/dvr.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hpimc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double double_well_value(double x, double mass, double barrier_frequency, double barrier_height) {
  require_positive(mass, "mass");
  require_positive(barrier_frequency, "barrier frequency");
  require_positive(barrier_height, "barrier height");
  const double w2 = barrier_frequency * barrier_frequency;
  const double x2 = x * x;
  return -0.5 * mass * w2 * x2 + (mass * mass * w2 * w2 / (16.0 * barrier_height)) * x2 * x2;
}

double double_well_minimum(double mass, double barrier_frequency, double barrier_height) {
  require_positive(mass, "mass");
  require_positive(barrier_frequency, "barrier frequency");
  require_positive(barrier_height, "barrier height");
  return std::sqrt(4.0 * barrier_height / (mass * barrier_frequency * barrier_frequency));
}

double harmonic_value(double x, double mass, double frequency) {
  require_positive(mass, "mass");
  require_positive(frequency, "frequency");
  return 0.5 * mass * frequency * frequency * x * x;
}

void validate(const PotentialSpec& potential, const UniformGrid& grid) {
  std::visit(overloaded{
                 [](const DoubleWell& p) {
                   require_positive(p.mass, "mass");
                   require_positive(p.barrier_frequency, "barrier frequency");
                   require_positive(p.barrier_height, "barrier height");
                 },
                 [](const Harmonic& p) {
                   require_positive(p.mass, "mass");
                   require_positive(p.frequency, "frequency");
                 },
                 [&grid](const Tabulated& p) {
                   if (static_cast<Index>(p.values.size()) != grid.size()) {
                     throw std::invalid_argument("tabulated potential has " +
                                                 std::to_string(p.values.size()) +
                                                 " values, grid has " +
                                                 std::to_string(grid.size()));
                   }
                 },
             },
             potential);
}

Eigen::VectorXd potential_on_grid(const PotentialSpec& potential, const UniformGrid& grid) {
  validate(potential, grid);
  Eigen::VectorXd v(grid.size());
  for (Index q = 0; q < grid.size(); ++q) {
    const double x = grid.position(q);
    v[q] = std::visit(
        overloaded{
            [x](const DoubleWell& p) {
              return double_well_value(x, p.mass, p.barrier_frequency, p.barrier_height);
            },
            [x](const Harmonic& p) { return harmonic_value(x, p.mass, p.frequency); },
            [q](const Tabulated& p) { return p.values[static_cast<std::size_t>(q)]; },
        },
        potential);
  }
  return v;
}

Eigen::MatrixXd dvr_kinetic_matrix(const UniformGrid& grid, double mass, int ell) {
  const Index d = grid.size();
  const int kept = ell == 0 ? static_cast<int>(d) : ell;
  const dvr::DvrBand band(dvr::kinetic_scale(mass, grid.spacing()), static_cast<int>(d), kept);
  return band.to_dense();
}

Eigen::MatrixXd fourier_kinetic_matrix(const UniformGrid& grid, double mass) {
  require_positive(mass, "mass");
  const Index d = grid.size();
  const double dk = 2.0 * std::numbers::pi / grid.length();
  // Toeplitz: only the offset matters. The +-k sine terms cancel and the
  // unpaired k = -D/2 term is real, so the matrix is real symmetric.
  Eigen::VectorXd column(d);
  for (Index off = 0; off < d; ++off) {
    double acc = 0.0;
    for (Index k = -d / 2; k < d / 2; ++k) {
      const double p = dk * static_cast<double>(k);
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k * off) /
                           static_cast<double>(d);
      acc += std::cos(angle) * p * p / (2.0 * mass);
    }
    column[off] = acc / static_cast<double>(d);
  }
  Eigen::MatrixXd t(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      t(i, j) = column[std::abs(i - j)];
    }
  }
  return t;
}

DenseHamiltonian assemble_dense(const UniformGrid& grid, const PotentialSpec& potential,
                                double mass, KineticModel kinetic, int ell) {
  Eigen::VectorXd v = potential_on_grid(potential, grid);
  Eigen::MatrixXd h = kinetic == KineticModel::dvr ? dvr_kinetic_matrix(grid, mass, ell)
                                                   : fourier_kinetic_matrix(grid, mass);
  h.diagonal() += v;
  return DenseHamiltonian{std::move(h), grid, mass, std::move(v)};
}

Eigen::MatrixXcd Spectrum::exponential(Complex z) const {
  const Eigen::VectorXcd phases =
      (z * eigenvalues.cast<Complex>().array()).exp().matrix();
  const Eigen::MatrixXcd e = eigenvectors.cast<Complex>();
  return e * phases.asDiagonal() * e.transpose();
}

Eigen::MatrixXd Spectrum::real_exponential(double z) const {
  const Eigen::VectorXd factors = (z * eigenvalues.array()).exp().matrix();
  return eigenvectors * factors.asDiagonal() * eigenvectors.transpose();
}

double Spectrum::partition_function(double beta, double shift) const {
  return (-beta * (eigenvalues.array() - shift)).exp().sum();
}

Eigen::MatrixXd Spectrum::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

Spectrum eigendecompose(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw std::invalid_argument("eigendecompose requires a non-empty square matrix");
  }
  const double scale = std::max(symmetric.norm(), 1e-300);
  const double asym = (symmetric - symmetric.transpose()).norm();
  if (asym > 1e-12 * scale) {
    throw std::invalid_argument("eigendecompose requires a symmetric matrix (asymmetry " +
                                std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver did not converge", std::nan(""));
  }
  Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
  const double residual = (s.reconstruct() - symmetric).norm();
  if (residual > 1e-9 * scale) {
    throw NumericalFailure("eigendecomposition reconstruction residual " +
                               std::to_string(residual) + " exceeds tolerance",
                           residual);
  }
  return s;
}

}  // namespace hpimc

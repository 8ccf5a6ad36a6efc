#include "hpimc/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hpimc {

UniformGrid::UniformGrid(double length, int num_qubits)
    : length_(length), num_qubits_(num_qubits), size_(0) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite, got " +
                                std::to_string(length));
  }
  if (num_qubits < 2 || num_qubits > 16) {
    throw std::invalid_argument("num_qubits must lie in [2, 16], got " +
                                std::to_string(num_qubits));
  }
  size_ = Index{1} << num_qubits;
}

double UniformGrid::position(Index q) const {
  if (q < 0 || q >= size_) {
    throw std::invalid_argument("grid index " + std::to_string(q) + " out of range");
  }
  return offset() + static_cast<double>(q) * spacing();
}

Index UniformGrid::index_of(double x) const {
  const double raw = (x - offset()) / spacing();
  const auto q = static_cast<Index>(std::llround(raw));
  if (q < 0 || q >= size_) {
    throw std::invalid_argument("position " + std::to_string(x) + " lies outside the grid");
  }
  return q;
}

Eigen::VectorXd UniformGrid::positions() const {
  Eigen::VectorXd x(size_);
  for (Index q = 0; q < size_; ++q) {
    x[q] = position(q);
  }
  return x;
}

UniformGrid make_grid(double length, int num_qubits) {
  return UniformGrid(length, num_qubits);
}

StateVector basis_state(const UniformGrid& grid, Index q) {
  if (q < 0 || q >= grid.size()) {
    throw std::invalid_argument("basis index " + std::to_string(q) + " out of range [0, " +
                                std::to_string(grid.size()) + ")");
  }
  StateVector psi = StateVector::Zero(grid.size());
  psi[q] = 1.0;
  return psi;
}

}  // namespace hpimc

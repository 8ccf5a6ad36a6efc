#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace hpimc {

using Index = Eigen::Index;
using Complex = std::complex<double>;

// Amplitudes over grid indices. Not normalized in general: imaginary-time
// and PITE branches are non-unitary.
using StateVector = Eigen::VectorXcd;

// Uniform 1-D position grid with D = 2^n points,
// x_q = -L/2 + q * dx, dx = L / D. There is no point at +L/2.
class UniformGrid {
 public:
  UniformGrid(double length, int num_qubits);

  double length() const { return length_; }
  int num_qubits() const { return num_qubits_; }
  Index size() const { return size_; }
  double spacing() const { return length_ / static_cast<double>(size_); }
  double offset() const { return -0.5 * length_; }

  double position(Index q) const;
  // Nearest grid index; exact inverse of position() at grid points.
  Index index_of(double x) const;
  Eigen::VectorXd positions() const;

  bool operator==(const UniformGrid&) const = default;

 private:
  double length_;
  int num_qubits_;
  Index size_;
};

// length > 0, 2 <= num_qubits <= 16.
UniformGrid make_grid(double length, int num_qubits);

// |q>, the classical stand-in for a layer of X gates on the register.
StateVector basis_state(const UniformGrid& grid, Index q);

}  // namespace hpimc

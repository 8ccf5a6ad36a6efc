#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace hpimc::dvr {

// Diagonal index convention used throughout: nu = 1 is the main diagonal,
// nu = 2 the pair at offset |i - j| = 1, and so on up to nu = D.

// K = 1 / (m dx^2) in hartree (hbar = 1).
double kinetic_scale(double mass, double spacing);

// Sinc-DVR kinetic matrix element: K pi^2/6 on the diagonal,
// (-1)^(i-j) K / (i-j)^2 off it.
double dvr_element(std::int64_t i, std::int64_t j, double kinetic_scale);

// Value carried by every element of diagonal nu.
double diagonal_value(int nu, double kinetic_scale);

// Banded Toeplitz form of the DVR kinetic matrix keeping diagonals [1, ell].
class DvrBand {
 public:
  DvrBand(double kinetic_scale, int num_points, int kept_diagonals);

  double kinetic_scale() const { return kinetic_scale_; }
  int num_points() const { return num_points_; }
  int kept_diagonals() const { return kept_diagonals_; }
  // v[nu] for nu in [1, ell].
  double value(int nu) const;

  Eigen::MatrixXd to_dense() const;

 private:
  double kinetic_scale_;
  int num_points_;
  int kept_diagonals_;
  std::vector<double> values_;
};

struct DiagonalDescriptor {
  double value;
  int nu;
  int num_points;

  // diag(DVR, nu) as a dense matrix.
  Eigen::MatrixXd to_dense() const;
};

DiagonalDescriptor extract_diagonal(const DvrBand& band, int nu);

// floor((2K)^(2/3) / delta^(2/3)), clamped below at 1.
int truncation_threshold(double delta, double kinetic_scale);

// sqrt(S(ell)), S(ell) = 2 K^2 sum_{nu=ell+1}^{D} nu / (nu-1)^4. Requires ell < D.
double exact_truncation_error(int ell, int num_points, double kinetic_scale);

// sqrt(2) K (ell^(1/2) + 1) / ell^(3/2).
double error_upper_bound(int ell, double kinetic_scale);
// 2 sqrt(2) K / ell, the simplified upper bound.
double error_upper_bound_simplified(int ell, double kinetic_scale);
// 2 K / ell^(3/2); valid for num_points >= ell + 3.
double error_lower_bound(int ell, double kinetic_scale);

// Frobenius norm of the dense matrix of neglected diagonals (nu > ell):
// every diagonal weighted by its true length D - nu + 1. Differs from
// exact_truncation_error(), which weights diagonal nu by nu.
double frobenius_truncation_error(int ell, int num_points, double kinetic_scale);

}  // namespace hpimc::dvr

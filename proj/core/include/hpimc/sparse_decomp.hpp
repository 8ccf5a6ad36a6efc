#pragma once

#include "hpimc/grid.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hpimc {

enum class TimeKind { real_time, imaginary_time };

struct SparseEntry {
  Index row;
  Index col;
  double value;
};

// Real symmetric matrix with at most one nonzero per row and per column.
// Entries are stored in full: every off-diagonal (r, c, a) has its mirror (c, r, a).
class OneSparseMatrix {
 public:
  // An independent 2x2 block (first < second) or an isolated diagonal entry (first == second).
  struct Block {
    Index first;
    Index second;
    double value;
  };

  // Throws std::invalid_argument unless the entries are 1-sparse and mirrored.
  OneSparseMatrix(Index dimension, std::vector<SparseEntry> entries);

  // Builds from 0-based (row, col) positions sharing one value; mirrors are added.
  static OneSparseMatrix from_positions(Index dimension,
                                        const std::vector<std::pair<Index, Index>>& positions,
                                        double value);

  Index dimension() const { return dimension_; }
  const std::vector<SparseEntry>& entries() const { return entries_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  Eigen::MatrixXd to_dense() const;

 private:
  Index dimension_;
  std::vector<SparseEntry> entries_;
  std::vector<Block> blocks_;
};

// Brute-force occupancy scan: at most one nonzero in every row and column.
bool is_one_sparse(const Eigen::MatrixXd& m);

enum class DecompositionCase {
  main_diagonal,  // nu = 1
  wide,           // nu > D/2: upper and lower diagonals never share a row
  even_nu,        // 1 < nu <= D/2, nu even: alternate single pairs
  odd_nu,         // 1 < nu <= D/2, nu odd: alternate runs of 2^p pairs
};

std::string to_string(DecompositionCase c);

// Throws unless D is a power of two >= 4 and 1 <= nu <= D.
DecompositionCase classify_diagonal(int num_points, int nu);

// nu - 1 = b * 2^p with b odd, p >= 1; defined for odd nu >= 3.
struct RunParameters {
  int p;
  int b;
};
RunParameters odd_case_parameters(int nu);

// Splits diag(DVR, nu) (value on the upper and lower nu-th diagonals) into
// one or two 1-sparse symmetric parts that sum to it exactly.
std::vector<OneSparseMatrix> decompose_diagonal(int num_points, int nu, double value);

// exp(-i M theta) or exp(-M theta), applied analytically block by block.
void apply_exp_one_sparse_inplace(const OneSparseMatrix& m, double theta, TimeKind kind,
                                  StateVector& psi);
StateVector apply_exp_one_sparse(const OneSparseMatrix& m, double theta, TimeKind kind,
                                 const StateVector& psi);

struct KineticFactor {
  int nu;
  int sigma;
  OneSparseMatrix matrix;
};

// Ordered product prod_{nu=1}^{ell} prod_{sigma} exp(-i diag(DVR,nu)_sigma theta)
// (or exp(-diag(DVR,nu)_sigma theta)). Leftmost factor is (nu=1, sigma=1);
// application runs right to left.
class KineticPropagator {
 public:
  KineticPropagator(std::vector<KineticFactor> factors, double theta, TimeKind kind);

  const std::vector<KineticFactor>& factors() const { return factors_; }
  double theta() const { return theta_; }
  TimeKind kind() const { return kind_; }
  Index dimension() const;

  void apply_inplace(StateVector& psi) const;
  StateVector apply(const StateVector& psi) const;
  // Conjugate transpose of the product: factors left to right, each adjointed.
  void apply_adjoint_inplace(StateVector& psi) const;

  Eigen::MatrixXcd to_dense() const;
  static std::string ordering();

 private:
  std::vector<KineticFactor> factors_;
  double theta_;
  TimeKind kind_;
};

KineticPropagator build_kinetic_propagator(const UniformGrid& grid, double mass, int ell,
                                           double theta, TimeKind kind);

}  // namespace hpimc

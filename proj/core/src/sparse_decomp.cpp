#include "hpimc/sparse_decomp.hpp"

#include "hpimc/dvr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hpimc {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

OneSparseMatrix::OneSparseMatrix(Index dimension, std::vector<SparseEntry> entries)
    : dimension_(dimension), entries_(std::move(entries)) {
  if (dimension < 1) {
    throw std::invalid_argument("one-sparse matrix dimension must be positive");
  }
  std::vector<std::ptrdiff_t> entry_in_row(static_cast<std::size_t>(dimension), -1);
  std::vector<int> col_used(static_cast<std::size_t>(dimension), 0);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (e.row < 0 || e.row >= dimension || e.col < 0 || e.col >= dimension) {
      throw std::invalid_argument("one-sparse entry index out of range");
    }
    auto& slot = entry_in_row[static_cast<std::size_t>(e.row)];
    if (slot >= 0 || ++col_used[static_cast<std::size_t>(e.col)] > 1) {
      throw std::invalid_argument("entries are not 1-sparse");
    }
    slot = static_cast<std::ptrdiff_t>(k);
  }
  for (const auto& e : entries_) {
    if (e.row == e.col) {
      blocks_.push_back(Block{e.row, e.col, e.value});
      continue;
    }
    const auto mirror = entry_in_row[static_cast<std::size_t>(e.col)];
    if (mirror < 0 || entries_[static_cast<std::size_t>(mirror)].col != e.row ||
        entries_[static_cast<std::size_t>(mirror)].value != e.value) {
      throw std::invalid_argument("off-diagonal entry lacks a matching mirror");
    }
    if (e.row < e.col) {
      blocks_.push_back(Block{e.row, e.col, e.value});
    }
  }
}

OneSparseMatrix OneSparseMatrix::from_positions(
    Index dimension, const std::vector<std::pair<Index, Index>>& positions, double value) {
  std::vector<SparseEntry> entries;
  entries.reserve(positions.size() * 2);
  for (const auto& [r, c] : positions) {
    entries.push_back(SparseEntry{r, c, value});
    if (r != c) {
      entries.push_back(SparseEntry{c, r, value});
    }
  }
  return OneSparseMatrix(dimension, std::move(entries));
}

Eigen::MatrixXd OneSparseMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dimension_, dimension_);
  for (const auto& e : entries_) {
    m(e.row, e.col) += e.value;
  }
  return m;
}

bool is_one_sparse(const Eigen::MatrixXd& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    if ((m.row(r).array() != 0.0).count() > 1) {
      return false;
    }
  }
  for (Index c = 0; c < m.cols(); ++c) {
    if ((m.col(c).array() != 0.0).count() > 1) {
      return false;
    }
  }
  return true;
}

std::string to_string(DecompositionCase c) {
  switch (c) {
    case DecompositionCase::main_diagonal:
      return "main_diagonal";
    case DecompositionCase::wide:
      return "wide";
    case DecompositionCase::even_nu:
      return "even_nu";
    case DecompositionCase::odd_nu:
      return "odd_nu";
  }
  return "unknown";
}

DecompositionCase classify_diagonal(int num_points, int nu) {
  if (!is_power_of_two(num_points) || num_points < 4) {
    throw std::invalid_argument("decomposition requires D to be a power of two >= 4, got " +
                                std::to_string(num_points));
  }
  if (nu < 1 || nu > num_points) {
    throw std::invalid_argument("diagonal index nu=" + std::to_string(nu) + " outside [1, D]");
  }
  if (nu == 1) {
    return DecompositionCase::main_diagonal;
  }
  if (nu > num_points / 2) {
    return DecompositionCase::wide;
  }
  return nu % 2 == 0 ? DecompositionCase::even_nu : DecompositionCase::odd_nu;
}

RunParameters odd_case_parameters(int nu) {
  if (nu < 3 || nu % 2 == 0) {
    throw std::invalid_argument("run parameters are defined for odd nu >= 3");
  }
  int p = 0;
  int b = nu - 1;
  while (b % 2 == 0) {
    b /= 2;
    ++p;
  }
  return RunParameters{p, b};
}

std::vector<OneSparseMatrix> decompose_diagonal(int num_points, int nu, double value) {
  const DecompositionCase kind = classify_diagonal(num_points, nu);
  const Index d = num_points;

  if (kind == DecompositionCase::main_diagonal) {
    std::vector<std::pair<Index, Index>> diag;
    for (Index i = 0; i < d; ++i) {
      diag.emplace_back(i, i);
    }
    return {OneSparseMatrix::from_positions(d, diag, value)};
  }

  // Upper-diagonal element j (1-based, j in [1, D - nu + 1]) sits at
  // (j, j + nu - 1); stored 0-based as (j - 1, j + nu - 2).
  const int count = num_points - nu + 1;
  const auto position = [nu](int j) {
    return std::pair<Index, Index>{j - 1, j + nu - 2};
  };

  if (kind == DecompositionCase::wide) {
    std::vector<std::pair<Index, Index>> all;
    for (int j = 1; j <= count; ++j) {
      all.push_back(position(j));
    }
    return {OneSparseMatrix::from_positions(d, all, value)};
  }

  // Elements are grouped into runs of run_length; odd runs go to M1, even runs to M2.
  const int run_length = kind == DecompositionCase::even_nu ? 1 : (1 << odd_case_parameters(nu).p);
  std::vector<std::pair<Index, Index>> first;
  std::vector<std::pair<Index, Index>> second;
  for (int j = 1; j <= count; ++j) {
    const int run = (j - 1) / run_length + 1;
    (run % 2 == 1 ? first : second).push_back(position(j));
  }
  std::vector<OneSparseMatrix> parts;
  parts.push_back(OneSparseMatrix::from_positions(d, first, value));
  if (!second.empty()) {
    parts.push_back(OneSparseMatrix::from_positions(d, second, value));
  }
  return parts;
}

void apply_exp_one_sparse_inplace(const OneSparseMatrix& m, double theta, TimeKind kind,
                                  StateVector& psi) {
  if (psi.size() != m.dimension()) {
    throw std::invalid_argument("state dimension " + std::to_string(psi.size()) +
                                " does not match matrix dimension " +
                                std::to_string(m.dimension()));
  }
  for (const auto& b : m.blocks()) {
    const double angle = b.value * theta;
    if (b.first == b.second) {
      psi[b.first] *= kind == TimeKind::real_time ? std::polar(1.0, -angle)
                                                  : Complex(std::exp(-angle), 0.0);
      continue;
    }
    const Complex u = psi[b.first];
    const Complex v = psi[b.second];
    if (kind == TimeKind::real_time) {
      const double c = std::cos(angle);
      const Complex s(0.0, -std::sin(angle));
      psi[b.first] = c * u + s * v;
      psi[b.second] = s * u + c * v;
    } else {
      const double c = std::cosh(angle);
      const double s = -std::sinh(angle);
      psi[b.first] = c * u + s * v;
      psi[b.second] = s * u + c * v;
    }
  }
}

StateVector apply_exp_one_sparse(const OneSparseMatrix& m, double theta, TimeKind kind,
                                 const StateVector& psi) {
  StateVector out = psi;
  apply_exp_one_sparse_inplace(m, theta, kind, out);
  return out;
}

KineticPropagator::KineticPropagator(std::vector<KineticFactor> factors, double theta,
                                     TimeKind kind)
    : factors_(std::move(factors)), theta_(theta), kind_(kind) {
  if (factors_.empty()) {
    throw std::invalid_argument("kinetic propagator needs at least one factor");
  }
  if (!std::isfinite(theta)) {
    throw std::invalid_argument("kinetic propagator time step must be finite");
  }
}

Index KineticPropagator::dimension() const { return factors_.front().matrix.dimension(); }

void KineticPropagator::apply_inplace(StateVector& psi) const {
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    apply_exp_one_sparse_inplace(it->matrix, theta_, kind_, psi);
  }
}

StateVector KineticPropagator::apply(const StateVector& psi) const {
  StateVector out = psi;
  apply_inplace(out);
  return out;
}

void KineticPropagator::apply_adjoint_inplace(StateVector& psi) const {
  // Real-time factors are unitary (adjoint = negated time); imaginary-time
  // factors are real symmetric (self-adjoint).
  const double theta = kind_ == TimeKind::real_time ? -theta_ : theta_;
  for (const auto& f : factors_) {
    apply_exp_one_sparse_inplace(f.matrix, theta, kind_, psi);
  }
}

Eigen::MatrixXcd KineticPropagator::to_dense() const {
  const Index d = dimension();
  Eigen::MatrixXcd out(d, d);
  for (Index c = 0; c < d; ++c) {
    StateVector col = StateVector::Unit(d, c);
    apply_inplace(col);
    out.col(c) = col;
  }
  return out;
}

std::string KineticPropagator::ordering() {
  return "nu ascending, sigma 1 then 2, leftmost factor (nu=1,sigma=1); applied right to left";
}

KineticPropagator build_kinetic_propagator(const UniformGrid& grid, double mass, int ell,
                                           double theta, TimeKind kind) {
  const int d = static_cast<int>(grid.size());
  if (ell < 1 || ell > d) {
    throw std::invalid_argument("kept diagonals ell must lie in [1, D], got " +
                                std::to_string(ell));
  }
  const double k = dvr::kinetic_scale(mass, grid.spacing());
  std::vector<KineticFactor> factors;
  factors.reserve(static_cast<std::size_t>(2 * ell));
  for (int nu = 1; nu <= ell; ++nu) {
    auto parts = decompose_diagonal(d, nu, dvr::diagonal_value(nu, k));
    for (std::size_t s = 0; s < parts.size(); ++s) {
      factors.push_back(KineticFactor{nu, static_cast<int>(s) + 1, std::move(parts[s])});
    }
  }
  return KineticPropagator(std::move(factors), theta, kind);
}

}  // namespace hpimc

#include "hpimc/propagators.hpp"

#include "hpimc/dvr.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hpimc {

namespace {

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

int resolve_ell(int ell, Index d) {
  if (ell == 0) {
    return static_cast<int>(d);
  }
  if (ell < 1 || ell > d) {
    throw std::invalid_argument("kept diagonals ell=" + std::to_string(ell) +
                                " outside [1, D=" + std::to_string(d) + "]");
  }
  return ell;
}

}  // namespace

std::string to_string(KineticMethod m) { return m == KineticMethod::fourier ? "fourier" : "dvr"; }

std::string to_string(ImaginaryMethod m) {
  return m == ImaginaryMethod::trotter1 ? "trotter1" : "pite";
}

std::string to_string(PathDirection d) {
  return d == PathDirection::forward ? "forward" : "backward";
}

StepScheme::StepScheme(SchemeOptions options, double total_time, double beta, int steps)
    : options_(options), total_time_(total_time), beta_(beta), steps_(steps) {
  if (steps < 1) {
    throw std::invalid_argument("Trotter steps N must be >= 1");
  }
  if (!std::isfinite(total_time)) {
    throw std::invalid_argument("total time must be finite");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be finite and non-negative");
  }
  if (options.real_ell < 0 || options.imag_ell < 0) {
    throw std::invalid_argument("kept diagonals must be non-negative (0 keeps all)");
  }
  if (options.imag_method == ImaginaryMethod::pite &&
      !(options.pite_m0 > 0.0 && options.pite_m0 < 1.0)) {
    throw std::invalid_argument("PITE parameter m0 must lie in (0, 1)");
  }
}

std::string StepScheme::describe() const {
  std::ostringstream os;
  os << "real=trotter2_" << to_string(options_.real_kinetic);
  if (options_.real_kinetic == KineticMethod::dvr) {
    os << "(ell=" << options_.real_ell << ")";
  }
  os << ";imag=";
  if (options_.imag_method == ImaginaryMethod::pite) {
    os << "pite(m0=" << hex_double(options_.pite_m0) << ",ell=" << options_.imag_ell << ")";
  } else {
    os << "trotter1_" << to_string(options_.imag_kinetic);
    if (options_.imag_kinetic == KineticMethod::dvr) {
      os << "(ell=" << options_.imag_ell << ")";
    }
  }
  os << ";t=" << hex_double(total_time_) << ";beta=" << hex_double(beta_) << ";N=" << steps_
     << ";split=V/2.T.V/2;imag_split=V.T";
  return os.str();
}

void apply_potential_phase(const Eigen::VectorXd& potential, double theta, TimeKind kind,
                           StateVector& psi) {
  if (potential.size() != psi.size()) {
    throw std::invalid_argument("potential and state dimensions differ");
  }
  if (theta == 0.0) {
    return;
  }
  for (Index q = 0; q < psi.size(); ++q) {
    psi[q] *= kind == TimeKind::real_time ? std::polar(1.0, -potential[q] * theta)
                                          : Complex(std::exp(-potential[q] * theta), 0.0);
  }
}

StateVector potential_phase(const Eigen::VectorXd& potential, double theta, TimeKind kind,
                            const StateVector& psi) {
  StateVector out = psi;
  apply_potential_phase(potential, theta, kind, out);
  return out;
}

FourierKinetic::FourierKinetic(const UniformGrid& grid, double mass)
    : grid_(grid), mass_(mass), momenta_(grid.size()) {
  if (!(mass > 0.0)) {
    throw std::invalid_argument("mass must be positive");
  }
  const Index d = grid.size();
  const double dk = 2.0 * std::numbers::pi / grid.length();
  for (Index j = 0; j < d; ++j) {
    const Index k = j < d / 2 ? j : j - d;
    momenta_[j] = dk * static_cast<double>(k);
  }
}

void FourierKinetic::apply_inplace(double theta, TimeKind kind, StateVector& psi) const {
  if (psi.size() != grid_.size()) {
    throw std::invalid_argument("state dimension does not match grid");
  }
  if (theta == 0.0) {
    return;
  }
  thread_local Eigen::FFT<double> fft;
  StateVector spectrum(psi.size());
  fft.fwd(spectrum, psi);
  for (Index j = 0; j < spectrum.size(); ++j) {
    const double energy = momenta_[j] * momenta_[j] / (2.0 * mass_);
    spectrum[j] *= kind == TimeKind::real_time ? std::polar(1.0, -energy * theta)
                                               : Complex(std::exp(-energy * theta), 0.0);
  }
  fft.inv(psi, spectrum);
}

StateVector FourierKinetic::apply(double theta, TimeKind kind, const StateVector& psi) const {
  StateVector out = psi;
  apply_inplace(theta, kind, out);
  return out;
}

double pite_tau(double dbeta, double m0) {
  if (!(m0 > 0.0 && m0 < 1.0)) {
    throw std::invalid_argument("PITE parameter m0 must lie in (0, 1)");
  }
  const double s1 = m0 / std::sqrt(1.0 - m0 * m0);
  return s1 * dbeta / 2.0;
}

PiteResult pite_step(const Eigen::MatrixXd& hamiltonian, const StateVector& psi, double dbeta,
                     double m0) {
  const double tau = pite_tau(dbeta, m0);
  if (hamiltonian.rows() != psi.size() || hamiltonian.cols() != psi.size()) {
    throw std::invalid_argument("Hamiltonian and state dimensions differ");
  }
  StateVector success = m0 * (psi - tau * (hamiltonian.cast<Complex>() * psi));
  const double in_norm = psi.squaredNorm();
  const double probability = in_norm > 0.0 ? success.squaredNorm() / in_norm : 0.0;
  return PiteResult{std::move(success), probability};
}

PropagatorContext::PropagatorContext(const UniformGrid& grid, const PotentialSpec& potential,
                                     double mass, const StepScheme& scheme, double energy_shift)
    : grid_(grid),
      mass_(mass),
      scheme_(scheme),
      energy_shift_(energy_shift),
      potential_(potential_on_grid(potential, grid).array() - energy_shift),
      fourier_(grid, mass) {
  const auto& opt = scheme.options();
  const Index d = grid.size();
  if (opt.real_kinetic == KineticMethod::dvr) {
    real_dvr_.emplace(build_kinetic_propagator(grid, mass, resolve_ell(opt.real_ell, d),
                                               scheme.dt(), TimeKind::real_time));
  }
  if (opt.imag_method == ImaginaryMethod::pite) {
    Eigen::MatrixXd h = dvr_kinetic_matrix(grid, mass, resolve_ell(opt.imag_ell, d));
    h.diagonal() += potential_;
    pite_hamiltonian_.emplace(std::move(h));
  } else if (opt.imag_kinetic == KineticMethod::dvr) {
    imag_dvr_.emplace(build_kinetic_propagator(grid, mass, resolve_ell(opt.imag_ell, d),
                                               scheme.dbeta() / 2.0, TimeKind::imaginary_time));
  }
  forward_fingerprint_ = fingerprint_of(describe(PathDirection::forward));
  backward_fingerprint_ = fingerprint_of(describe(PathDirection::backward));
}

std::string PropagatorContext::describe(PathDirection direction) const {
  std::ostringstream os;
  os << "hpimc-element-v1;grid=L" << hex_double(grid_.length()) << ",n" << grid_.num_qubits()
     << ";mass=" << hex_double(mass_) << ";shift=" << hex_double(energy_shift_) << ";V=";
  for (Index q = 0; q < potential_.size(); ++q) {
    os << hex_double(potential_[q]) << ',';
  }
  os << ";scheme=" << scheme_.describe() << ";ordering=" << KineticPropagator::ordering()
     << ";direction=" << to_string(direction);
  return os.str();
}

const Fingerprint& PropagatorContext::fingerprint(PathDirection direction) const {
  return direction == PathDirection::forward ? forward_fingerprint_ : backward_fingerprint_;
}

void PropagatorContext::real_time_step(StateVector& psi) const {
  const double dt = scheme_.dt();
  if (dt == 0.0) {
    return;
  }
  apply_potential_phase(potential_, dt / 2.0, TimeKind::real_time, psi);
  if (real_dvr_) {
    real_dvr_->apply_inplace(psi);
  } else {
    fourier_.apply_inplace(dt, TimeKind::real_time, psi);
  }
  apply_potential_phase(potential_, dt / 2.0, TimeKind::real_time, psi);
}

void PropagatorContext::real_time_step_adjoint(StateVector& psi) const {
  const double dt = scheme_.dt();
  if (dt == 0.0) {
    return;
  }
  apply_potential_phase(potential_, -dt / 2.0, TimeKind::real_time, psi);
  if (real_dvr_) {
    real_dvr_->apply_adjoint_inplace(psi);
  } else {
    fourier_.apply_inplace(-dt, TimeKind::real_time, psi);
  }
  apply_potential_phase(potential_, -dt / 2.0, TimeKind::real_time, psi);
}

void PropagatorContext::imaginary_time_step(StateVector& psi) const {
  const double half = scheme_.dbeta() / 2.0;
  if (half == 0.0) {
    return;
  }
  if (pite_hamiltonian_) {
    // Success branch with the m0 amplitude divided out: (1 - H tau) psi.
    const double m0 = scheme_.options().pite_m0;
    psi = pite_step(*pite_hamiltonian_, psi, scheme_.dbeta(), m0).success / m0;
    return;
  }
  if (imag_dvr_) {
    imag_dvr_->apply_inplace(psi);
  } else {
    fourier_.apply_inplace(half, TimeKind::imaginary_time, psi);
  }
  apply_potential_phase(potential_, half, TimeKind::imaginary_time, psi);
}

StateVector PropagatorContext::column(Index col, PathDirection direction) const {
  StateVector psi = basis_state(grid_, col);
  imaginary_time_step(psi);
  if (direction == PathDirection::forward) {
    real_time_step(psi);
  } else {
    real_time_step_adjoint(psi);
  }
  return psi;
}

Complex PropagatorContext::element(Index row, Index col, PathDirection direction) const {
  if (row < 0 || row >= grid_.size()) {
    throw std::invalid_argument("row index out of range");
  }
  return column(col, direction)[row];
}

Eigen::MatrixXcd PropagatorContext::step_matrix(PathDirection direction,
                                                ElementCache* cache) const {
  const Index d = grid_.size();
  Eigen::MatrixXcd m(d, d);
  for (Index c = 0; c < d; ++c) {
    if (cache == nullptr) {
      m.col(c) = column(c, direction);
      continue;
    }
    for (Index r = 0; r < d; ++r) {
      m(r, c) = cached_element(*cache, r, c, *this, direction).value;
    }
  }
  return m;
}

Complex complex_time_element(Index row, Index col, const PropagatorContext& context,
                             PathDirection direction) {
  return context.element(row, col, direction);
}

CachedElement cached_element(ElementCache& cache, Index row, Index col,
                             const PropagatorContext& context, PathDirection direction) {
  cache.require(context.fingerprint(direction));
  if (row < 0 || row >= context.grid().size() || col < 0 || col >= context.grid().size()) {
    throw std::invalid_argument("element index out of range");
  }
  if (const auto hit = cache.lookup(row, col)) {
    cache.count_hit();
    return CachedElement{*hit, true};
  }
  cache.count_miss();
  const StateVector column = context.column(col, direction);
  const bool persisted = cache.store_column(col, column);
  return CachedElement{column[row], persisted};
}

}  // namespace hpimc

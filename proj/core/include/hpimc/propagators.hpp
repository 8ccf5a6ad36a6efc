#pragma once

#include "hpimc/element_cache.hpp"
#include "hpimc/grid.hpp"
#include "hpimc/hamiltonian.hpp"
#include "hpimc/sparse_decomp.hpp"

#include <Eigen/Dense>

#include <numbers>
#include <optional>
#include <string>

namespace hpimc {

enum class KineticMethod { fourier, dvr };
enum class ImaginaryMethod { trotter1, pite };

std::string to_string(KineticMethod m);
std::string to_string(ImaginaryMethod m);

struct SchemeOptions {
  // Real time: symmetric second-order split V/2 T V/2.
  KineticMethod real_kinetic = KineticMethod::fourier;
  int real_ell = 0;  // 0 keeps every diagonal
  // Imaginary time: first-order split e^{-(db/2)V} e^{-(db/2)T}, or one PITE step.
  KineticMethod imag_kinetic = KineticMethod::dvr;
  int imag_ell = 0;
  ImaginaryMethod imag_method = ImaginaryMethod::trotter1;
  double pite_m0 = std::numbers::sqrt2 / 2.0;
};

// Single-step scheme for a calculation of total real time t and inverse
// temperature beta split into N steps: dt = t/N, dbeta = beta/N.
class StepScheme {
 public:
  StepScheme(SchemeOptions options, double total_time, double beta, int steps);

  const SchemeOptions& options() const { return options_; }
  double total_time() const { return total_time_; }
  double beta() const { return beta_; }
  int steps() const { return steps_; }
  double dt() const { return total_time_ / steps_; }
  double dbeta() const { return beta_ / steps_; }

  // Canonical text used for fingerprints and output metadata.
  std::string describe() const;

 private:
  SchemeOptions options_;
  double total_time_;
  double beta_;
  int steps_;
};

// Multiplies amplitude q by exp(-i V_q theta) or exp(-V_q theta).
void apply_potential_phase(const Eigen::VectorXd& potential, double theta, TimeKind kind,
                           StateVector& psi);
StateVector potential_phase(const Eigen::VectorXd& potential, double theta, TimeKind kind,
                            const StateVector& psi);

// Kinetic exponential diagonalized by the discrete Fourier transform.
// DFT index j maps to k = j for j < D/2 and k = j - D otherwise, so
// k covers [-D/2, D/2) and p_k = 2 pi k / L.
class FourierKinetic {
 public:
  FourierKinetic(const UniformGrid& grid, double mass);

  const Eigen::VectorXd& momenta() const { return momenta_; }
  void apply_inplace(double theta, TimeKind kind, StateVector& psi) const;
  StateVector apply(double theta, TimeKind kind, const StateVector& psi) const;

 private:
  UniformGrid grid_;
  double mass_;
  Eigen::VectorXd momenta_;
};

struct PiteResult {
  StateVector success;         // unnormalized m0 (1 - H tau) psi
  double success_probability;  // |success|^2 / |psi|^2
};

// tau = s1 dbeta / 2, s1 = m0 / sqrt(1 - m0^2).
double pite_tau(double dbeta, double m0);
PiteResult pite_step(const Eigen::MatrixXd& hamiltonian, const StateVector& psi, double dbeta,
                     double m0);

enum class PathDirection { forward, backward };
std::string to_string(PathDirection d);

// Everything that determines one short-time complex-time propagator
// U(dt_c) = e^{-iH dt} e^{-(dbeta/2) H} (forward) or e^{+iH dt} e^{-(dbeta/2) H}
// (backward), both built from the same split factors. The potential is
// shifted by `energy_shift` (a scalar factor that cancels against Z).
class PropagatorContext {
 public:
  PropagatorContext(const UniformGrid& grid, const PotentialSpec& potential, double mass,
                    const StepScheme& scheme, double energy_shift = 0.0);

  const UniformGrid& grid() const { return grid_; }
  double mass() const { return mass_; }
  const StepScheme& scheme() const { return scheme_; }
  double energy_shift() const { return energy_shift_; }
  const Eigen::VectorXd& shifted_potential() const { return potential_; }

  // e^{-iV dt/2} e^{-iT dt} e^{-iV dt/2}
  void real_time_step(StateVector& psi) const;
  // Conjugate transpose of real_time_step.
  void real_time_step_adjoint(StateVector& psi) const;
  // e^{-(dbeta/2) V} e^{-(dbeta/2) T}, or (1 - H tau) for PITE.
  void imaginary_time_step(StateVector& psi) const;

  StateVector column(Index col, PathDirection direction) const;
  Complex element(Index row, Index col, PathDirection direction) const;
  // D x D step matrix, optionally filled through `cache`.
  Eigen::MatrixXcd step_matrix(PathDirection direction, ElementCache* cache = nullptr) const;

  const Fingerprint& fingerprint(PathDirection direction) const;
  std::string describe(PathDirection direction) const;

 private:
  UniformGrid grid_;
  double mass_;
  StepScheme scheme_;
  double energy_shift_;
  Eigen::VectorXd potential_;
  FourierKinetic fourier_;
  std::optional<KineticPropagator> real_dvr_;
  std::optional<KineticPropagator> imag_dvr_;
  std::optional<Eigen::MatrixXd> pite_hamiltonian_;
  Fingerprint forward_fingerprint_;
  Fingerprint backward_fingerprint_;
};

// Alias of PropagatorContext::element, the emulated Hadamard-test readout.
Complex complex_time_element(Index row, Index col, const PropagatorContext& context,
                             PathDirection direction = PathDirection::forward);

struct CachedElement {
  Complex value;
  bool cached;  // false when the value could not be persisted
};

// Hit: returns the stored value. Miss: propagates the whole column, stores
// all D elements, returns the requested one. StaleCacheError on fingerprint mismatch.
CachedElement cached_element(ElementCache& cache, Index row, Index col,
                             const PropagatorContext& context,
                             PathDirection direction = PathDirection::forward);

}  // namespace hpimc

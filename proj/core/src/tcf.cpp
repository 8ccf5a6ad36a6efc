#include "hpimc/tcf.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hpimc {

Eigen::VectorXd Observable::diagonal(const UniformGrid& grid) const {
  if (!values_) {
    return grid.positions();
  }
  if (static_cast<Index>(values_->size()) != grid.size()) {
    throw std::invalid_argument("tabulated observable length does not match grid");
  }
  return Eigen::Map<const Eigen::VectorXd>(values_->data(), grid.size());
}

void TcfSeries::validate() const {
  if (times.size() != values.size()) {
    throw std::invalid_argument("TCF times and values differ in length");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("TCF times must be strictly increasing");
    }
  }
}

TcfSeries normalize(const TcfSeries& series, Normalization mode) {
  series.validate();
  double scale = 0.0;
  for (const auto& v : series.values) {
    scale = std::max(scale, mode == Normalization::max_magnitude ? std::abs(v) : std::abs(v.real()));
  }
  if (!(scale > 0.0)) {
    throw std::invalid_argument("cannot normalize an identically zero TCF");
  }
  TcfSeries out = series;
  for (auto& v : out.values) {
    v /= scale;
  }
  out.normalized = true;
  out.metadata["normalization"] =
      mode == Normalization::max_magnitude ? "max_magnitude" : "max_real";
  return out;
}

double max_deviation(const TcfSeries& a, const TcfSeries& b) {
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("TCF series lengths differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.times[i] != b.times[i]) {
      throw std::invalid_argument("TCF series use different time grids");
    }
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  }
  return worst;
}

std::vector<double> uniform_times(double t_max, int count) {
  if (count < 2 || !(t_max > 0.0)) {
    throw std::invalid_argument("time grid needs t_max > 0 and at least two points");
  }
  std::vector<double> times(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    times[static_cast<std::size_t>(i)] = t_max * static_cast<double>(i) / (count - 1);
  }
  return times;
}

TcfSeries exact_tcf(const Spectrum& spectrum, const Eigen::VectorXd& a_diag,
                    const Eigen::VectorXd& b_diag, double beta, const std::vector<double>& times) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("beta must be positive");
  }
  const Index d = spectrum.size();
  if (a_diag.size() != d || b_diag.size() != d) {
    throw std::invalid_argument("observable length does not match spectrum");
  }
  const Eigen::MatrixXd& vecs = spectrum.eigenvectors;
  const Eigen::MatrixXd a = vecs.transpose() * a_diag.asDiagonal() * vecs;
  const Eigen::MatrixXd b = vecs.transpose() * b_diag.asDiagonal() * vecs;
  const Eigen::VectorXd shifted = spectrum.eigenvalues.array() - spectrum.eigenvalues[0];
  const Eigen::VectorXd half_boltzmann = (-0.5 * beta * shifted.array()).exp();
  const double z = half_boltzmann.squaredNorm();
  // A_mn B_nm weighted by the Boltzmann factors; only the phase depends on t.
  const Eigen::MatrixXd weight =
      (half_boltzmann.asDiagonal() * a * half_boltzmann.asDiagonal()).cwiseProduct(b.transpose());

  TcfSeries out;
  out.times = times;
  out.values.reserve(times.size());
  for (const double t : times) {
    const Eigen::VectorXcd phase =
        (Complex(0.0, t) * shifted.cast<Complex>().array()).exp().matrix();
    const Complex c = (phase.asDiagonal() * weight.cast<Complex>() * phase.conjugate()).sum();
    out.values.push_back(c / z);
  }
  out.metadata["method"] = "exact_spectral";
  out.validate();
  return out;
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& x, int n) {
  if (n < 0) {
    throw std::invalid_argument("matrix power must be non-negative");
  }
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(x.rows(), x.cols());
  Eigen::MatrixXcd base = x;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      if (first) {
        result = base;
        first = false;
      } else {
        result = (result * base).eval();
      }
    }
    n >>= 1;
    if (n > 0) {
      base = (base * base).eval();
    }
  }
  return result;
}

Complex trotterized_trace(const Eigen::MatrixXcd& forward, const Eigen::MatrixXcd& backward,
                          int steps, const Eigen::VectorXd& a_diag, const Eigen::VectorXd& b_diag,
                          double partition_function) {
  const Eigen::MatrixXcd uf = matrix_power(forward, steps);
  const Eigen::MatrixXcd ub = matrix_power(backward, steps);
  // Tr(Ub A Uf B) = sum_ij Ub_ij A_j Uf_ji B_i for diagonal A, B.
  const Eigen::MatrixXcd lhs = ub * a_diag.cast<Complex>().asDiagonal();
  const Eigen::MatrixXcd rhs = uf * b_diag.cast<Complex>().asDiagonal();
  return lhs.cwiseProduct(rhs.transpose()).sum() / partition_function;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::clamp(threads > 0 ? threads : hw, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) {
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

TcfSeries trotterized_tcf(const TrotterSetup& setup, const Eigen::VectorXd& a_diag,
                          const Eigen::VectorXd& b_diag, const std::vector<double>& times) {
  const Index d = setup.grid.size();
  if (a_diag.size() != d || b_diag.size() != d) {
    throw std::invalid_argument("observable length does not match grid");
  }
  if (times.empty()) {
    throw std::invalid_argument("empty time grid");
  }
  const Spectrum spectrum = eigendecompose(assemble_dense(setup.grid, setup.potential, setup.mass));
  const double shift = spectrum.eigenvalues[0];
  const double z = spectrum.partition_function(setup.beta, shift);

  TcfSeries out;
  out.times = times;
  out.values.assign(times.size(), Complex{});
  parallel_for(static_cast<int>(times.size()), setup.threads, [&](int i) {
    const StepScheme scheme(setup.options, times[static_cast<std::size_t>(i)], setup.beta,
                            setup.steps);
    const PropagatorContext context(setup.grid, setup.potential, setup.mass, scheme, shift);
    Eigen::MatrixXcd forward;
    Eigen::MatrixXcd backward;
    if (setup.cache_dir) {
      const auto dir = *setup.cache_dir;
      ElementCache fwd_cache(context.fingerprint(PathDirection::forward),
                             dir / (to_hex(context.fingerprint(PathDirection::forward)) + ".bin"));
      ElementCache bwd_cache(context.fingerprint(PathDirection::backward),
                             dir / (to_hex(context.fingerprint(PathDirection::backward)) + ".bin"));
      forward = context.step_matrix(PathDirection::forward, &fwd_cache);
      backward = context.step_matrix(PathDirection::backward, &bwd_cache);
    } else {
      forward = context.step_matrix(PathDirection::forward);
      backward = context.step_matrix(PathDirection::backward);
    }
    out.values[static_cast<std::size_t>(i)] =
        trotterized_trace(forward, backward, setup.steps, a_diag, b_diag, z);
  });
  out.metadata["method"] = "trotterized_quadrature";
  out.metadata["steps"] = std::to_string(setup.steps);
  out.metadata["scheme"] = StepScheme(setup.options, times.back(), setup.beta, setup.steps).describe();
  out.metadata["kinetic_factor_ordering"] = KineticPropagator::ordering();
  out.validate();
  return out;
}

}  // namespace hpimc

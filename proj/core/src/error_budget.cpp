#include "hpimc/error_budget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hpimc {

double trace_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues().sum();
}

double trace_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().sum();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

double tcf_error_bound(double norm1_a, double norm1_b, double norm1_thermal, double eps_u,
                       double partition_function) {
  if (norm1_a < 0.0 || norm1_b < 0.0 || norm1_thermal < 0.0 || eps_u < 0.0) {
    throw std::invalid_argument("norms and eps_U must be non-negative");
  }
  if (!(partition_function > 0.0)) {
    throw std::invalid_argument("partition function must be positive");
  }
  return 2.0 / partition_function * norm1_a * norm1_b * norm1_thermal * eps_u;
}

ErrorBudget error_budget(const BudgetInputs& in) {
  if (!(in.eps_total > 0.0) || !(in.split > 0.0 && in.split < 1.0)) {
    throw std::invalid_argument("need eps > 0 and 0 < split < 1");
  }
  if (in.k < 1) {
    throw std::invalid_argument("Suzuki order k must be >= 1");
  }
  if (!(in.norm_h1 > 0.0) || !(in.norm_h2 > 0.0) || !(in.tc_magnitude > 0.0) ||
      !(in.norm1_a > 0.0) || !(in.norm1_b > 0.0) || !(in.norm1_thermal > 0.0) ||
      !(in.partition_function > 0.0)) {
    throw std::invalid_argument("budget magnitudes must be positive");
  }
  const double eps_c = 2.0 * in.split * in.eps_total;
  const double eps_mc = 2.0 * (1.0 - in.split) * in.eps_total;
  const double omega = std::max(in.norm_h1, in.norm_h2);
  const double order = 2.0 * in.k + 1.0;
  const double bracket = in.norm1_a * in.norm1_b * in.norm1_thermal *
                         std::pow(omega * in.tc_magnitude, order) /
                         (in.partition_function * eps_c);
  const double n = std::ceil(std::pow(bracket, 1.0 / (2.0 * in.k)));
  const double m = std::ceil(1.0 / (eps_mc * eps_mc));
  return ErrorBudget{in.eps_total,
                     eps_c,
                     eps_mc,
                     static_cast<std::int64_t>(m),
                     std::max<std::int64_t>(1, static_cast<std::int64_t>(n)),
                     omega,
                     in.k};
}

double complex_time_magnitude(double t, double beta) { return std::hypot(t, beta / 2.0); }

CostModel cost_model(double m, double n, double p, int d, double q_u, double anc_u) {
  if (!(m > 0.0) || !(n > 0.0) || !(p >= 2.0) || d < 1 || !(q_u > 0.0) || anc_u < 0.0) {
    throw std::invalid_argument("cost model inputs out of range");
  }
  const double pd = std::pow(p, d);
  return CostModel{m * n + std::pow(p, 3.0 * d), pd * pd, m * n * q_u,
                   d * std::ceil(std::log2(p)) + anc_u};
}

}  // namespace hpimc

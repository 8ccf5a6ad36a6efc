#include "hpimc/dvr.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hpimc::dvr {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double kinetic_scale(double mass, double spacing) {
  require_positive(mass, "mass");
  require_positive(spacing, "grid spacing");
  return 1.0 / (mass * spacing * spacing);
}

double dvr_element(std::int64_t i, std::int64_t j, double kinetic_scale) {
  if (i < 0 || j < 0) {
    throw std::invalid_argument("DVR indices must be non-negative");
  }
  if (i == j) {
    return kinetic_scale * std::numbers::pi * std::numbers::pi / 6.0;
  }
  const std::int64_t d = i - j;
  const double sign = (d % 2 == 0) ? 1.0 : -1.0;
  return sign * kinetic_scale / static_cast<double>(d * d);
}

double diagonal_value(int nu, double kinetic_scale) {
  if (nu < 1) {
    throw std::invalid_argument("diagonal index nu must be >= 1");
  }
  return dvr_element(0, nu - 1, kinetic_scale);
}

DvrBand::DvrBand(double kinetic_scale, int num_points, int kept_diagonals)
    : kinetic_scale_(kinetic_scale), num_points_(num_points), kept_diagonals_(kept_diagonals) {
  require_positive(kinetic_scale, "kinetic scale K");
  if (num_points < 1) {
    throw std::invalid_argument("num_points must be positive");
  }
  if (kept_diagonals < 1 || kept_diagonals > num_points) {
    throw std::invalid_argument("kept diagonals ell must lie in [1, D], got " +
                                std::to_string(kept_diagonals));
  }
  values_.reserve(static_cast<std::size_t>(kept_diagonals));
  for (int nu = 1; nu <= kept_diagonals; ++nu) {
    values_.push_back(diagonal_value(nu, kinetic_scale));
  }
}

double DvrBand::value(int nu) const {
  if (nu < 1 || nu > kept_diagonals_) {
    throw std::invalid_argument("diagonal " + std::to_string(nu) + " not kept in band");
  }
  return values_[static_cast<std::size_t>(nu - 1)];
}

Eigen::MatrixXd DvrBand::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(num_points_, num_points_);
  for (int nu = 1; nu <= kept_diagonals_; ++nu) {
    m += extract_diagonal(*this, nu).to_dense();
  }
  return m;
}

Eigen::MatrixXd DiagonalDescriptor::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(num_points, num_points);
  const int offset = nu - 1;
  for (int j = 0; j + offset < num_points; ++j) {
    m(j, j + offset) = value;
    m(j + offset, j) = value;
  }
  return m;
}

DiagonalDescriptor extract_diagonal(const DvrBand& band, int nu) {
  if (nu < 1 || nu > band.kept_diagonals()) {
    throw std::invalid_argument("diagonal " + std::to_string(nu) + " outside [1, ell]");
  }
  return DiagonalDescriptor{band.value(nu), nu, band.num_points()};
}

int truncation_threshold(double delta, double kinetic_scale) {
  require_positive(delta, "error tolerance delta");
  require_positive(kinetic_scale, "kinetic scale K");
  const double ratio = 2.0 * kinetic_scale / delta;
  const double raw = std::cbrt(ratio * ratio);
  // Exact cubes such as 8^(2/3) = 4 must not floor to 3 through rounding.
  const double nearest = std::round(raw);
  const double value = std::abs(raw - nearest) <= 1e-12 * std::max(1.0, nearest) ? nearest
                                                                                 : std::floor(raw);
  if (value < 1.0) {
    return 1;
  }
  if (value > 2.0e9) {
    throw std::invalid_argument("delta too small: threshold overflows");
  }
  return static_cast<int>(value);
}

double exact_truncation_error(int ell, int num_points, double kinetic_scale) {
  require_positive(kinetic_scale, "kinetic scale K");
  if (ell < 1) {
    throw std::invalid_argument("ell must be >= 1");
  }
  if (ell >= num_points) {
    throw std::invalid_argument("ell >= D neglects nothing; truncation error undefined");
  }
  // Descending order: smallest terms first.
  double sum = 0.0;
  for (int nu = num_points; nu >= ell + 1; --nu) {
    const double off = static_cast<double>(nu - 1);
    sum += static_cast<double>(nu) / (off * off * off * off);
  }
  return std::sqrt(2.0 * sum) * kinetic_scale;
}

double error_upper_bound(int ell, double kinetic_scale) {
  require_positive(kinetic_scale, "kinetic scale K");
  if (ell < 1) {
    throw std::invalid_argument("ell must be >= 1");
  }
  const double l = static_cast<double>(ell);
  return std::numbers::sqrt2 * kinetic_scale * (std::sqrt(l) + 1.0) / (l * std::sqrt(l));
}

double error_upper_bound_simplified(int ell, double kinetic_scale) {
  require_positive(kinetic_scale, "kinetic scale K");
  if (ell < 1) {
    throw std::invalid_argument("ell must be >= 1");
  }
  return 2.0 * std::numbers::sqrt2 * kinetic_scale / static_cast<double>(ell);
}

double error_lower_bound(int ell, double kinetic_scale) {
  require_positive(kinetic_scale, "kinetic scale K");
  if (ell < 1) {
    throw std::invalid_argument("ell must be >= 1");
  }
  const double l = static_cast<double>(ell);
  return 2.0 * kinetic_scale / (l * std::sqrt(l));
}

double frobenius_truncation_error(int ell, int num_points, double kinetic_scale) {
  require_positive(kinetic_scale, "kinetic scale K");
  if (ell < 1 || ell >= num_points) {
    throw std::invalid_argument("ell must lie in [1, D)");
  }
  double sum = 0.0;
  for (int nu = num_points; nu >= ell + 1; --nu) {
    const double off = static_cast<double>(nu - 1);
    sum += 2.0 * static_cast<double>(num_points - nu + 1) / (off * off * off * off);
  }
  return std::sqrt(sum) * kinetic_scale;
}

}  // namespace hpimc::dvr

#include "hpimc/units.hpp"

#include <stdexcept>

namespace hpimc::units {

double wavenumber_to_hartree(double wavenumber) {
  if (!(wavenumber > 0.0)) {
    throw std::invalid_argument("wavenumber must be positive");
  }
  return wavenumber * kHartreePerWavenumber;
}

double kelvin_to_beta(double kelvin) {
  if (!(kelvin > 0.0)) {
    throw std::invalid_argument("temperature must be positive");
  }
  return 1.0 / (kelvin * kHartreePerKelvin);
}

}  // namespace hpimc::units

#pragma once

namespace hpimc::units {

// CODATA-derived conversion factors, atomic units throughout.
inline constexpr double kHartreePerWavenumber = 4.556335e-6;
inline constexpr double kHartreePerKelvin = 3.166812e-6;
inline constexpr double kProtonMass = 1836.0;

double wavenumber_to_hartree(double wavenumber);
// beta = 1 / (k_B T) in inverse hartree.
double kelvin_to_beta(double kelvin);

}  // namespace hpimc::units

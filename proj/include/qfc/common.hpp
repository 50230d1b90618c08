#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace qfc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLightNmPerS = 2.99792458e17;
inline constexpr double kHbarJs = 1.054571817e-34;

// The three interacting resonances: 1550-nm band signal, 1064-nm pump, and
// the visible sum-frequency.
enum class Band { signal, pump, sf };

// Bus-waveguide couplers of the double-pulley add-drop resonator. Signal and
// pump enter through A, the sum-frequency light exits through B.
enum class Port { A, B };

const char* to_string(Band band);
const char* to_string(Port port);
Band band_from_string(std::string_view name);
Port port_from_string(std::string_view name);

inline double omega_from_wavelength_nm(double lambda_nm) {
    return 2.0 * kPi * kSpeedOfLightNmPerS / lambda_nm;
}

inline double wavelength_nm_from_omega(double omega_rad_s) {
    return 2.0 * kPi * kSpeedOfLightNmPerS / omega_rad_s;
}

// Photon energy in joules for a vacuum wavelength in nm.
inline double photon_energy_j(double lambda_nm) {
    return kHbarJs * omega_from_wavelength_nm(lambda_nm);
}

inline double db_to_power_fraction(double loss_db) {
    return std::pow(10.0, -loss_db / 10.0);
}

inline double power_fraction_to_db(double fraction) {
    return -10.0 * std::log10(fraction);
}

} // namespace qfc

#pragma once

#include <numbers>

namespace polaron {

// Internal unit system: times in ps, angular frequencies and rates in 1/ps.
// Energies (meV) only appear at the configuration boundary.
struct PhysicalConstants {
  static constexpr double hbar = 0.6582119569;  // meV ps
  static constexpr double kB = 0.08617333;      // meV / K
};

inline constexpr double kPi = std::numbers::pi;

constexpr double energy_to_angular_frequency(double energy_mev) {
  return energy_mev / PhysicalConstants::hbar;
}

constexpr double angular_frequency_to_energy(double omega) {
  return omega * PhysicalConstants::hbar;
}

// k_B T / hbar in 1/ps.
constexpr double thermal_frequency(double temperature_k) {
  return PhysicalConstants::kB * temperature_k / PhysicalConstants::hbar;
}

}  // namespace polaron

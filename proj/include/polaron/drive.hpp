#pragma once

#include "polaron/config.hpp"

namespace polaron {

/// Omega(t) of the configured pulse (train): sum of Gaussians
/// Omega_p exp(-(t - c_n)^2 / tau_p^2) with c_n = center + n * train_period.
double pulse_envelope(double t, const DriveSpec& drive);

/// Bad-cavity mapping Omega_eff = g Omega_c / sqrt(kappa^2 + Delta_Lc^2).
/// Throws std::domain_error when kappa = 0 and Delta_Lc = 0.
double effective_drive(double omega_c, const CavityParams& cavity, double delta_lc);

/// Rabi frequency acting on the exciton: the pulse itself, or Omega_eff in
/// cavity mode.
double exciton_drive(double t, const DriveSpec& drive);

/// Detuning entering the phonon rate integrals (Delta_Lx, or Delta_cx when the
/// cavity sensitivity switch is set).
double rate_detuning(const DriveSpec& drive);

/// Center of the last pulse of the train.
double last_pulse_center(const DriveSpec& drive);

}  // namespace polaron

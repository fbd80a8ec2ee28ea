#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polaron {

/// Phonon bath parameters in internal units.
struct BathParams {
  double alpha_p = 0.0;      // ps^2
  double omega_b = 1.0;      // 1/ps
  double temperature = 4.2;  // K

  bool operator==(const BathParams&) const = default;
};

/// Zero-phonon-line processes, both in 1/ps.
struct SystemParams {
  double gamma = 0.0;
  double gamma_prime = 0.0;

  bool operator==(const SystemParams&) const = default;
};

enum class DriveMode { exciton, cavity };

/// Cavity parameters (angular frequencies in 1/ps). `purcell` is F_P and is
/// independent of g and kappa.
struct CavityParams {
  double g = 0.0;
  double kappa = 0.0;
  double delta_cx = 0.0;
  double purcell = 0.0;
  // Sensitivity switch: evaluate the phonon rate integrals at Delta_cx
  // instead of Delta_Lx in cavity-driven mode.
  bool detuning_in_rates = false;

  bool operator==(const CavityParams&) const = default;
};

/// Gaussian pulse Omega(t) = Omega_p exp(-(t - c)^2 / tau_p^2) repeated
/// `train_pulses` times with spacing `train_period`. In cavity mode the pulse
/// describes the cavity drive Omega_c and `theta` is Theta_c.
struct DriveSpec {
  double omega_p = 0.0;   // 1/ps
  double tau_p = 10.1;    // ps
  double theta = 0.0;     // rad, sqrt(pi) tau_p omega_p
  double delta_lx = 0.0;  // 1/ps
  double center = 0.0;    // ps
  DriveMode mode = DriveMode::exciton;
  std::optional<CavityParams> cavity;
  double train_period = 0.0;  // ps, 0 for a single pulse
  int train_pulses = 1;

  static DriveSpec from_area(double theta, double tau_p, double delta_lx);
  static DriveSpec from_peak(double omega_p, double tau_p, double delta_lx);

  void set_area(double area);
  void set_peak(double peak);

  /// Delta_Lc = Delta_Lx - Delta_cx (requires a cavity).
  double delta_lc() const;
  /// F_P, or 0 without a cavity.
  double purcell_factor() const { return cavity ? cavity->purcell : 0.0; }

  bool operator==(const DriveSpec&) const = default;
};

struct IntegratorSettings {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::optional<double> t_start;
  std::optional<double> t_end;
  double output_step = 0.1;  // ps

  bool operator==(const IntegratorSettings&) const = default;
};

struct QuadratureSettings {
  double omega_cutoff_factor = 8.0;
  double tau_step = 0.01;  // ps
  std::optional<double> tau_max;
  double kernel_tol = 1e-8;
  double quad_tol = 1e-13;

  bool operator==(const QuadratureSettings&) const = default;
};

struct SimulationConfig {
  BathParams bath;
  SystemParams system;
  DriveSpec drive;
  IntegratorSettings integrator;
  QuadratureSettings quadrature;
  // Which of the two pulse parameterizations the document used.
  bool drive_given_as_area = true;

  bool operator==(const SimulationConfig&) const = default;
};

/// Reference parameters of the InGaAs dot study: alpha_p = 0.03 ps^2,
/// omega_b = 1 meV, T = 4.2 K, gamma = gamma' = 2 ueV, 2 tau_p = 20.2 ps,
/// Delta_Lx = +0.83 meV, Theta = 16 pi.
SimulationConfig reference_config();

/// Parse and validate a configuration document (INI-style sections).
/// Throws ConfigError naming the offending key.
SimulationConfig load_config(std::string_view text);
SimulationConfig load_config_file(const std::filesystem::path& path);

/// Inverse of load_config, in file units.
std::string serialize_config(const SimulationConfig& cfg);

/// Throws ConfigError if an invariant is violated.
void validate(const SimulationConfig& cfg);

/// Assign a parameter by dotted path (e.g. "drive.detuning"), value in file
/// units. Unknown paths throw ConfigError.
void set_parameter(SimulationConfig& cfg, std::string_view path, double value);
bool is_parameter_path(std::string_view path);
std::vector<std::string> parameter_paths();

}  // namespace polaron

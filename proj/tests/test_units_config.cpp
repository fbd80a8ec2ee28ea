#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "polaron/config.hpp"
#include "polaron/errors.hpp"
#include "polaron/units.hpp"

using namespace polaron;

namespace {

const char* kReference = R"(
[bath]
alpha_p = 0.03
omega_b = 1.0
temperature = 4.2

[system]
gamma = 0.002
gamma_prime = 0.002

[drive]
tau_p = 10.1
pulse_area_pi = 16
detuning = 0.83
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

std::string error_key(const std::string& text) {
  try {
    load_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("energy conversion against hbar in meV ps") {
  const double hbar = 0.6582119569;
  CHECK(energy_to_angular_frequency(0.0) == 0.0);
  CHECK(energy_to_angular_frequency(hbar) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(energy_to_angular_frequency(1.85) == doctest::Approx(1.85 / hbar).epsilon(1e-14));
  CHECK(energy_to_angular_frequency(1.85) == doctest::Approx(2.8107).epsilon(1e-4));
  CHECK(thermal_frequency(4.2) == doctest::Approx(0.08617333 * 4.2 / hbar).epsilon(1e-14));
}

TEST_CASE("energy conversion round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int k = 0; k < 1000; ++k) {
    const double e = dist(rng);
    CHECK(close_rel(angular_frequency_to_energy(energy_to_angular_frequency(e)), e, 1e-12));
  }
}

TEST_CASE("reference document parses into internal units") {
  const auto cfg = load_config(kReference);
  CHECK(cfg.bath.alpha_p == 0.03);
  CHECK(cfg.bath.omega_b == doctest::Approx(1.0 / 0.6582119569).epsilon(1e-14));
  CHECK(cfg.bath.temperature == 4.2);
  CHECK(cfg.system.gamma == doctest::Approx(0.002 / 0.6582119569).epsilon(1e-14));
  CHECK(cfg.drive.theta == doctest::Approx(16.0 * kPi).epsilon(1e-15));
  CHECK(cfg.drive.delta_lx == doctest::Approx(0.83 / 0.6582119569).epsilon(1e-14));
  CHECK(cfg.drive.mode == DriveMode::exciton);
  CHECK_FALSE(cfg.drive.cavity.has_value());
  // Theta = sqrt(pi) tau_p Omega_p.
  CHECK(cfg.drive.omega_p == doctest::Approx(16.0 * kPi / (std::sqrt(kPi) * 10.1)).epsilon(1e-14));
  CHECK(cfg == reference_config());
}

TEST_CASE("16 pi over 2 tau_p = 20.2 ps peaks near 1.85 meV") {
  const auto cfg = reference_config();
  CHECK(angular_frequency_to_energy(cfg.drive.omega_p) == doctest::Approx(1.85).epsilon(0.005));
  const auto d = DriveSpec::from_area(7.24 * kPi, 10.1, 0.0);
  CHECK(d.omega_p == doctest::Approx(1.276).epsilon(0.005));
  CHECK(angular_frequency_to_energy(d.omega_p) == doctest::Approx(0.84).epsilon(0.01));
}

TEST_CASE("area and peak parameterizations are inverse") {
  const auto a = DriveSpec::from_area(5.3, 9.0, 0.1);
  const auto b = DriveSpec::from_peak(a.omega_p, 9.0, 0.1);
  CHECK(b.theta == doctest::Approx(5.3).epsilon(1e-14));
}

TEST_CASE("serialize and reload preserves every field") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int k = 0; k < 50; ++k) {
    SimulationConfig cfg = reference_config();
    cfg.bath.alpha_p = 0.01 * u(rng);
    cfg.bath.omega_b = u(rng);
    cfg.bath.temperature = 10.0 * u(rng);
    cfg.system.gamma = 0.01 * u(rng);
    cfg.system.gamma_prime = 0.01 * u(rng);
    cfg.drive.tau_p = 10.0 * u(rng);
    cfg.drive.set_area(10.0 * u(rng));
    cfg.drive.delta_lx = u(rng) - 1.5;
    cfg.drive.center = u(rng);
    if (k % 2 == 1) {
      cfg.drive.mode = DriveMode::cavity;
      cfg.drive.cavity = CavityParams{0.05 * u(rng), 0.2 * u(rng), u(rng), 10.0 * u(rng), k % 4 == 1};
      cfg.drive_given_as_area = false;
    }
    const auto back = load_config(serialize_config(cfg));
    CHECK(close_rel(back.bath.alpha_p, cfg.bath.alpha_p, 1e-14));
    CHECK(close_rel(back.bath.omega_b, cfg.bath.omega_b, 1e-14));
    CHECK(close_rel(back.bath.temperature, cfg.bath.temperature, 1e-14));
    CHECK(close_rel(back.system.gamma, cfg.system.gamma, 1e-14));
    CHECK(close_rel(back.system.gamma_prime, cfg.system.gamma_prime, 1e-14));
    CHECK(close_rel(back.drive.tau_p, cfg.drive.tau_p, 1e-14));
    CHECK(close_rel(back.drive.omega_p, cfg.drive.omega_p, 1e-14));
    CHECK(close_rel(back.drive.theta, cfg.drive.theta, 1e-14));
    CHECK(close_rel(back.drive.delta_lx, cfg.drive.delta_lx, 1e-14));
    CHECK(close_rel(back.drive.center, cfg.drive.center, 1e-14));
    CHECK(back.drive.mode == cfg.drive.mode);
    CHECK(back.drive.cavity.has_value() == cfg.drive.cavity.has_value());
    if (cfg.drive.cavity) {
      CHECK(close_rel(back.drive.cavity->g, cfg.drive.cavity->g, 1e-14));
      CHECK(close_rel(back.drive.cavity->kappa, cfg.drive.cavity->kappa, 1e-14));
      CHECK(close_rel(back.drive.cavity->delta_cx, cfg.drive.cavity->delta_cx, 1e-14));
      CHECK(close_rel(back.drive.cavity->purcell, cfg.drive.cavity->purcell, 1e-14));
      CHECK(back.drive.cavity->detuning_in_rates == cfg.drive.cavity->detuning_in_rates);
    }
    CHECK(back.drive_given_as_area == cfg.drive_given_as_area);
    CHECK(back.integrator == cfg.integrator);
    CHECK(back.quadrature == cfg.quadrature);
  }
}

TEST_CASE("validation names the offending key") {
  CHECK(error_key(replace(kReference, "temperature = 4.2\n", "")) == "bath.temperature");
  CHECK(error_key(replace(kReference, "gamma = 0.002", "gamma = -1")) == "system.gamma");
  CHECK(error_key(replace(kReference, "tau_p = 10.1", "tau_p = 0")) == "drive.tau_p");
  CHECK(error_key(replace(kReference, "alpha_p = 0.03", "alpha_p = abc")) == "bath.alpha_p");
  CHECK(error_key(replace(kReference, "alpha_p = 0.03", "alpha_p = -0.1")) == "bath.alpha_p");
  CHECK(error_key(replace(kReference, "omega_b = 1.0", "omega_b = 0")) == "bath.omega_b");
  CHECK(error_key(replace(kReference, "omega_b = 1.0", "omega_b = 1.0\nspeed = 3")) == "bath.speed");
  CHECK(error_key(replace(kReference, "pulse_area_pi = 16", "pulse_area_pi = 16\nomega_p = 1")) ==
        "drive.pulse_area_pi");
  CHECK(error_key(replace(kReference, "pulse_area_pi = 16", "")) == "drive.pulse_area_pi");
  CHECK(error_key(std::string(kReference) + "\n[drive]\nmode = laser\n") != "<no error>");
}

TEST_CASE("cavity mode requires cavity parameters") {
  const std::string cavity = replace(kReference, "detuning = 0.83", "detuning = 0.83\nmode = cavity");
  CHECK(error_key(cavity) != "<no error>");
  const auto cfg =
      load_config(cavity + "\n[cavity]\ng = 0.05\nkappa = 0.138\ndelta_cx = 0.83\npurcell = 0\n");
  REQUIRE(cfg.drive.cavity.has_value());
  CHECK(cfg.drive.cavity->kappa == doctest::Approx(0.138 / 0.6582119569).epsilon(1e-14));
  CHECK(cfg.drive.delta_lc() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("set_parameter uses file units and rejects unknown paths") {
  SimulationConfig cfg = reference_config();
  set_parameter(cfg, "drive.pulse_area_pi", 18.0);
  CHECK(cfg.drive.theta == doctest::Approx(18.0 * kPi).epsilon(1e-15));
  CHECK(cfg.drive.omega_p == doctest::Approx(18.0 * kPi / (std::sqrt(kPi) * 10.1)).epsilon(1e-14));
  set_parameter(cfg, "drive.detuning", -0.83);
  CHECK(cfg.drive.delta_lx == doctest::Approx(-0.83 / 0.6582119569).epsilon(1e-14));
  set_parameter(cfg, "bath.temperature", 10.0);
  CHECK(cfg.bath.temperature == 10.0);
  CHECK_THROWS_AS(set_parameter(cfg, "drive.colour", 1.0), ConfigError);
  CHECK(is_parameter_path("cavity.kappa"));
  CHECK_FALSE(is_parameter_path("drive"));
}

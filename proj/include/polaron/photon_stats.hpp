#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "polaron/dynamics.hpp"

namespace polaron {

enum class PhotonScheme { pi_pulse, phonon_assisted };

PhotonScheme parse_scheme(std::string_view name);
std::string to_string(PhotonScheme s);

/// Pulse train for the single-photon-source study. Pulses sit at 0, 2T, ...
struct PulseTrainSpec {
  double period = 612.0;    // 2T, ps
  double fullwidth = 18.0;  // 2 tau_p, ps
  int n_periods = 2;
  double tau_step = 0.5;    // ps, (t, tau) grid spacing
};

/// Configuration for a scheme: resonant pi pulse, or the phonon-assisted
/// pulse (Theta = 18.7 pi, Delta_Lx = 0.48 meV), with Purcell factor F_P.
SimulationConfig photon_source_config(const SimulationConfig& base, PhotonScheme scheme,
                                      double purcell, const PulseTrainSpec& train = {});

/// Keeps the pulse area and detuning of `cfg` and applies the train timing,
/// pulse width and Purcell factor.
SimulationConfig photon_train_config(const SimulationConfig& cfg, double purcell,
                                     const PulseTrainSpec& train = {});

/// G1(t, tau) = Tr[sigma- Lambda_{t -> t+tau}(rho(t) sigma+)] by a direct
/// integration of the regression equation.
std::complex<double> g1(const MasterEquation& me, const Op& rho_t, double t, double tau);

struct CorrelationSurface {
  std::vector<double> t;            // [-T, T]
  std::vector<double> tau;          // [0, 3T]
  std::vector<double> g2;           // row-major, t.size() x tau.size()
  std::vector<double> integrated;   // int G2(t, tau) dt over t
  std::vector<std::string> warnings;

  double at(std::size_t i, std::size_t j) const { return g2[i * tau.size() + j]; }
  double half_period() const { return t.back(); }
};

/// G2(t, tau) = 1/2 (N(t) N(t + tau) - |G1(t, tau)|^2) for t in [-T, T],
/// tau in [0, 3T], using step propagators on the train grid (rows in parallel).
CorrelationSurface g2_surface(const MasterEquation& me, const PulseTrainSpec& train);

namespace serial {
CorrelationSurface g2_surface(const MasterEquation& me, const PulseTrainSpec& train);
}  // namespace serial

/// I = 1 - int_{-T}^{T} G2 / int_{T}^{3T} G2. Throws NumericalError if the
/// side-peak area is below 1e-12.
double indistinguishability(const CorrelationSurface& s);
double center_peak_area(const CorrelationSurface& s);
double side_peak_area(const CorrelationSurface& s);

/// beta = F_P / (1 + F_P); throws std::domain_error for F_P < 0.
double efficiency(double purcell);

/// gamma_tilde int N_x dt over the trajectory. Throws NumericalError if the
/// final population has not decayed below 1e-6.
double emitted_photon_number(const Trajectory& traj, double gamma_tilde);

/// One isolated pulse of the train, integrated until the exciton has decayed.
Trajectory single_pulse_trajectory(const MasterEquation& me);

/// n_ems for one isolated pulse.
double photon_number(const MasterEquation& me);

struct PhotonSourceResult {
  double purcell = 0.0;
  double beta = 0.0;
  double n_ems = 0.0;
  double indistinguishability = 0.0;
  CorrelationSurface surface;
  Trajectory train;   // state under the train on the surface grid
  Trajectory single;  // isolated pulse used for n_ems
};

PhotonSourceResult photon_source(const SimulationConfig& base, PhotonScheme scheme, double purcell,
                                 std::shared_ptr<const PhononBath> bath, SolverOptions options = {},
                                 const PulseTrainSpec& train = {});

/// Figures of merit for a configuration already prepared by photon_train_config.
PhotonSourceResult evaluate_photon_source(const SimulationConfig& cfg,
                                          std::shared_ptr<const PhononBath> bath,
                                          SolverOptions options = {},
                                          const PulseTrainSpec& train = {});

}  // namespace polaron

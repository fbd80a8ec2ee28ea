#include "polaron/photon_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "polaron/errors.hpp"
#include "polaron/units.hpp"

namespace polaron {

PhotonScheme parse_scheme(std::string_view name) {
  if (name == "pi-pulse") return PhotonScheme::pi_pulse;
  if (name == "phonon-assisted") return PhotonScheme::phonon_assisted;
  throw ConfigError("scheme", "expected pi-pulse or phonon-assisted, got '" + std::string(name) + "'");
}

std::string to_string(PhotonScheme s) {
  return s == PhotonScheme::pi_pulse ? "pi-pulse" : "phonon-assisted";
}

SimulationConfig photon_train_config(const SimulationConfig& cfg, double purcell,
                                     const PulseTrainSpec& train) {
  SimulationConfig out = cfg;
  const double theta = cfg.drive.theta;
  out.drive.tau_p = 0.5 * train.fullwidth;
  out.drive.set_area(theta);
  out.drive.center = 0.0;
  CavityParams cavity = cfg.drive.cavity.value_or(CavityParams{});
  cavity.purcell = purcell;
  out.drive.cavity = cavity;
  out.drive.mode = DriveMode::exciton;
  out.drive.train_period = train.period;
  out.drive.train_pulses = train.n_periods;
  out.drive_given_as_area = true;
  out.integrator.t_start = -0.5 * train.period;
  out.integrator.t_end = train.n_periods * train.period;
  return out;
}

SimulationConfig photon_source_config(const SimulationConfig& base, PhotonScheme scheme,
                                      double purcell, const PulseTrainSpec& train) {
  SimulationConfig cfg = base;
  if (scheme == PhotonScheme::pi_pulse) {
    cfg.drive.set_area(kPi);
    cfg.drive.delta_lx = 0.0;
  } else {
    cfg.drive.set_area(18.7 * kPi);
    cfg.drive.delta_lx = energy_to_angular_frequency(0.48);
  }
  return photon_train_config(cfg, purcell, train);
}

std::complex<double> g1(const MasterEquation& me, const Op& rho_t, double t, double tau) {
  const Op x = rho_t * ops::sigma_plus();
  if (tau == 0.0) return x(1, 0);
  const auto traj = integrate(me, {t, t + tau}, x);
  return traj.states.back()(1, 0);
}

namespace {

double simpson_or_trapezoid(const std::vector<double>& y, std::size_t first, std::size_t last,
                            double h) {
  const std::size_t n = last - first;
  if (n == 0) return 0.0;
  if (n % 2 == 1) {
    double s = 0.5 * (y[first] + y[last]);
    for (std::size_t k = first + 1; k < last; ++k) s += y[k];
    return s * h;
  }
  double s = y[first] + y[last];
  for (std::size_t k = first + 1; k < last; ++k) s += ((k - first) % 2 == 1 ? 4.0 : 2.0) * y[k];
  return s * h / 3.0;
}

struct SurfacePlan {
  std::vector<double> grid;
  std::vector<Superop> props;
  Trajectory state;
  std::size_t nt = 0, ntau = 0;
};

SurfacePlan plan_surface(const MasterEquation& me, const PulseTrainSpec& train, bool parallel) {
  if (train.n_periods < 2) {
    throw NumericalError("g2_surface: need two periods to cover tau up to 3T", train.n_periods);
  }
  const double half = 0.5 * train.period;
  SurfacePlan p;
  p.grid = make_time_grid(-half, train.n_periods * train.period, train.tau_step);
  p.nt = static_cast<std::size_t>(std::llround(2.0 * half / train.tau_step));
  p.ntau = static_cast<std::size_t>(std::llround(3.0 * half / train.tau_step));
  if (p.grid.size() < p.nt + p.ntau + 1) throw NumericalError("g2_surface: insufficient horizon");
  p.props = parallel ? step_propagators(me, p.grid) : serial::step_propagators(me, p.grid);
  p.state = chain_propagators(p.props, p.grid, ground_state());
  return p;
}

void fill_row(const SurfacePlan& p, std::size_t i, double* row) {
  const Op& rho = p.state.states[i];
  const Op herm = 0.5 * (rho + rho.adjoint());
  const double n_t = herm(1, 1).real();
  VecRho x = vec(herm * ops::sigma_plus());
  for (std::size_t j = 0; j <= p.ntau; ++j) {
    if (j > 0) x = p.props[i + j - 1] * x;
    // Tr[sigma- X] picks the (e, g) element, vec index 1.
    const double n_later = j == 0 ? n_t : p.state.states[i + j](1, 1).real();
    row[j] = 0.5 * (n_t * n_later - std::norm(x(1)));
  }
}

CorrelationSurface finish(const SurfacePlan& p, const MasterEquation& me, const PulseTrainSpec& train,
                          std::vector<double> values) {
  CorrelationSurface s;
  s.t.assign(p.grid.begin(), p.grid.begin() + static_cast<long>(p.nt) + 1);
  s.tau.resize(p.ntau + 1);
  for (std::size_t j = 0; j <= p.ntau; ++j) s.tau[j] = train.tau_step * static_cast<double>(j);
  s.g2 = std::move(values);
  s.integrated.assign(p.ntau + 1, 0.0);
  std::vector<double> column(p.nt + 1);
  for (std::size_t j = 0; j <= p.ntau; ++j) {
    for (std::size_t i = 0; i <= p.nt; ++i) column[i] = s.g2[i * (p.ntau + 1) + j];
    s.integrated[j] = simpson_or_trapezoid(column, 0, p.nt, train.tau_step);
  }
  const double gamma = me.total_gamma();
  if (gamma <= 0.0 || 1.0 / gamma > train.period / 6.0) {
    s.warnings.push_back("radiative lifetime exceeds T/3; peaks may overlap");
  }
  return s;
}

template <bool Parallel>
CorrelationSurface surface(const SurfacePlan& p, const MasterEquation& me,
                           const PulseTrainSpec& train) {
  std::vector<double> values((p.nt + 1) * (p.ntau + 1));
  const auto rows = static_cast<long>(p.nt + 1);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < rows; ++i) {
      const auto k = static_cast<std::size_t>(i);
      fill_row(p, k, values.data() + k * (p.ntau + 1));
    }
  } else {
    for (long i = 0; i < rows; ++i) {
      const auto k = static_cast<std::size_t>(i);
      fill_row(p, k, values.data() + k * (p.ntau + 1));
    }
  }
  return finish(p, me, train, std::move(values));
}

}  // namespace

CorrelationSurface g2_surface(const MasterEquation& me, const PulseTrainSpec& train) {
  return surface<true>(plan_surface(me, train, true), me, train);
}

namespace serial {
CorrelationSurface g2_surface(const MasterEquation& me, const PulseTrainSpec& train) {
  return surface<false>(plan_surface(me, train, false), me, train);
}
}  // namespace serial

double center_peak_area(const CorrelationSurface& s) {
  const double h = s.tau[1] - s.tau[0];
  const auto last = static_cast<std::size_t>(std::llround(s.half_period() / h));
  // Symmetric about tau = 0.
  return 2.0 * simpson_or_trapezoid(s.integrated, 0, last, h);
}

double side_peak_area(const CorrelationSurface& s) {
  const double h = s.tau[1] - s.tau[0];
  const auto first = static_cast<std::size_t>(std::llround(s.half_period() / h));
  return simpson_or_trapezoid(s.integrated, first, s.integrated.size() - 1, h);
}

double indistinguishability(const CorrelationSurface& s) {
  const double side = side_peak_area(s);
  if (!(side >= 1e-12)) {
    throw NumericalError("indistinguishability: side-peak area vanishes", side);
  }
  return 1.0 - center_peak_area(s) / side;
}

double efficiency(double purcell) {
  if (purcell < 0.0) throw std::domain_error("efficiency: Purcell factor must be >= 0");
  return purcell / (1.0 + purcell);
}

double emitted_photon_number(const Trajectory& traj, double gamma_tilde) {
  if (gamma_tilde == 0.0) return 0.0;
  if (traj.n_x.size() < 2) throw NumericalError("emitted_photon_number: empty trajectory");
  if (std::abs(traj.n_x.back()) >= 1e-6) {
    throw NumericalError("emitted_photon_number: population has not decayed by the horizon",
                         traj.times.back());
  }
  double area = 0.0;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    area += 0.5 * (traj.n_x[k] + traj.n_x[k - 1]) * (traj.times[k] - traj.times[k - 1]);
  }
  return gamma_tilde * area;
}

Trajectory single_pulse_trajectory(const MasterEquation& me) {
  SimulationConfig cfg = me.config();
  cfg.drive.train_pulses = 1;
  cfg.integrator.t_start.reset();
  // e^-30 leaves a tail far below the 1e-6 check.
  cfg.integrator.t_end = cfg.drive.center + std::max(5.0 * cfg.drive.tau_p, 30.0 / me.total_gamma());
  cfg.integrator.output_step = 0.25;
  const MasterEquation single(cfg, me.bath_ptr(), me.options());
  return integrate(single);
}

double photon_number(const MasterEquation& me) {
  const double gamma_tilde = me.gamma_tilde();
  if (gamma_tilde == 0.0) return 0.0;
  return emitted_photon_number(single_pulse_trajectory(me), gamma_tilde);
}

PhotonSourceResult evaluate_photon_source(const SimulationConfig& cfg,
                                          std::shared_ptr<const PhononBath> bath,
                                          SolverOptions options, const PulseTrainSpec& train) {
  const MasterEquation me(cfg, std::move(bath), options);
  PhotonSourceResult r;
  r.purcell = cfg.drive.purcell_factor();
  r.beta = efficiency(r.purcell);
  r.single = single_pulse_trajectory(me);
  r.n_ems = emitted_photon_number(r.single, me.gamma_tilde());
  const SurfacePlan p = plan_surface(me, train, true);
  r.surface = surface<true>(p, me, train);
  r.train = p.state;
  r.indistinguishability = indistinguishability(r.surface);
  return r;
}

PhotonSourceResult photon_source(const SimulationConfig& base, PhotonScheme scheme, double purcell,
                                 std::shared_ptr<const PhononBath> bath, SolverOptions options,
                                 const PulseTrainSpec& train) {
  return evaluate_photon_source(photon_source_config(base, scheme, purcell, train), std::move(bath),
                                options, train);
}

}  // namespace polaron

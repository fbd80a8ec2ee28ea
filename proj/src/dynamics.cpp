#include "polaron/dynamics.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

#include "polaron/errors.hpp"

namespace polaron {

namespace odeint = boost::numeric::odeint;

// ---------------------------------------------------------------- drive

double pulse_envelope(double t, const DriveSpec& drive) {
  double out = 0.0;
  const int pulses = std::max(1, drive.train_pulses);
  for (int n = 0; n < pulses; ++n) {
    const double x = (t - drive.center - n * drive.train_period) / drive.tau_p;
    out += drive.omega_p * std::exp(-x * x);
  }
  return out;
}

double effective_drive(double omega_c, const CavityParams& cavity, double delta_lc) {
  if (cavity.kappa == 0.0 && delta_lc == 0.0) {
    throw std::domain_error("effective_drive: kappa and Delta_Lc both vanish");
  }
  return cavity.g * omega_c / std::hypot(cavity.kappa, delta_lc);
}

double exciton_drive(double t, const DriveSpec& drive) {
  const double pulse = pulse_envelope(t, drive);
  if (drive.mode == DriveMode::cavity) return effective_drive(pulse, *drive.cavity, drive.delta_lc());
  return pulse;
}

double rate_detuning(const DriveSpec& drive) {
  if (drive.mode == DriveMode::cavity && drive.cavity && drive.cavity->detuning_in_rates) {
    return drive.cavity->delta_cx;
  }
  return drive.delta_lx;
}

double last_pulse_center(const DriveSpec& drive) {
  return drive.center + (std::max(1, drive.train_pulses) - 1) * drive.train_period;
}

// ---------------------------------------------------------------- solver

Solver parse_solver(std::string_view name) {
  if (name == "analytic") return Solver::analytic;
  if (name == "direct") return Solver::direct;
  if (name == "effective") return Solver::effective;
  throw ConfigError("solver", "expected analytic, direct or effective, got '" + std::string(name) + "'");
}

std::string to_string(Solver s) {
  switch (s) {
    case Solver::analytic: return "analytic";
    case Solver::direct: return "direct";
    case Solver::effective: return "effective";
  }
  return "analytic";
}

MasterEquation::MasterEquation(SimulationConfig cfg, std::shared_ptr<const PhononBath> bath,
                               SolverOptions options)
    : cfg_(std::move(cfg)),
      bath_(std::move(bath)),
      options_(options),
      engine_(*bath_),
      rate_delta_(rate_detuning(cfg_.drive)) {
  terms_.gamma = cfg_.system.gamma * (1.0 + cfg_.drive.purcell_factor());
  terms_.gamma_prime = cfg_.system.gamma_prime;
  terms_.significant_only = options_.significant_only;
  terms_.drive_renormalization = options_.drive_renormalization;
  if (options_.solver == Solver::effective) effective_ = engine_.effective_integrals(rate_delta_);
  if (options_.rate_cache && options_.solver != Solver::direct) {
    const auto& d = cfg_.drive;
    // Beyond 6 tau_p from every center Omega_R is below the rate floor.
    cache_.emplace(d.center - 6.0 * d.tau_p, last_pulse_center(d) + 6.0 * d.tau_p,
                   RateCache::kDefaultStep, [this](double t) { return compute_rates(t); });
  }
}

RateSet MasterEquation::compute_rates(double t) const {
  const auto snap = DriveSnapshot::make(omega(t), engine_.b_avg(), rate_delta_);
  if (options_.solver != Solver::effective) return engine_.full(snap);
  RateSet r;
  if (snap.omega_r < RateEngine::kDriveFloor) return r;
  const double pre = 0.5 * snap.omega_r * snap.omega_r;
  r.gamma_sig_plus = pre * effective_.plus;
  r.gamma_sig_minus = pre * effective_.minus;
  r.gamma_cd = pre * effective_.cd;
  return r;
}

RateSet MasterEquation::rates(double t) const {
  if (cache_ && t >= cache_->t_begin() && t <= cache_->t_end()) return cache_->at(t);
  return compute_rates(t);
}

Superop MasterEquation::generator(double t) const {
  const double delta = cfg_.drive.delta_lx;
  const double om = omega(t);
  const double omega_r = engine_.b_avg() * om;
  switch (options_.solver) {
    case Solver::direct: {
      Superop l = zpl_generator(delta, omega_r, terms_);
      if (om != 0.0 && bath_->params().alpha_p != 0.0) {
        l += direct_phonon_dissipator(*bath_, om, rate_delta_);
      }
      return l;
    }
    case Solver::effective: return effective_generator(delta, omega_r, rates(t), terms_);
    case Solver::analytic: break;
  }
  return analytic_generator(delta, omega_r, rates(t), terms_);
}

double MasterEquation::t_start() const {
  if (cfg_.integrator.t_start) return *cfg_.integrator.t_start;
  return cfg_.drive.center - 5.0 * cfg_.drive.tau_p;
}

double MasterEquation::t_end() const {
  if (cfg_.integrator.t_end) return *cfg_.integrator.t_end;
  return last_pulse_center(cfg_.drive) + 5.0 * cfg_.drive.tau_p;
}

// ---------------------------------------------------------------- trajectory

Op ground_state() {
  Op rho = Op::Zero();
  rho(0, 0) = 1.0;
  return rho;
}

double Trajectory::population_at(double t) const {
  if (times.empty() || t < times.front() - 1e-12 || t > times.back() + 1e-12) {
    throw NumericalError("trajectory does not cover t = " + std::to_string(t), t);
  }
  const auto it = std::lower_bound(times.begin(), times.end(), t - 1e-12);
  auto i = static_cast<std::size_t>(it - times.begin());
  if (i < times.size() && std::abs(times[i] - t) <= 1e-12) return n_x[i];
  const std::size_t n = times.size();
  if (n < 4) {
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return (1.0 - w) * n_x[i - 1] + w * n_x[i];
  }
  std::size_t base = i >= 2 ? i - 2 : 0;
  if (base + 3 > n - 1) base = n - 4;
  double out = 0.0;
  for (std::size_t j = base; j < base + 4; ++j) {
    double w = 1.0;
    for (std::size_t m = base; m < base + 4; ++m) {
      if (m != j) w *= (t - times[m]) / (times[j] - times[m]);
    }
    out += w * n_x[j];
  }
  return out;
}

void update_defects(Trajectory& traj) {
  traj.max_trace_defect = 0.0;
  traj.max_hermiticity_defect = 0.0;
  for (const auto& rho : traj.states) {
    traj.max_trace_defect = std::max(traj.max_trace_defect, std::abs(rho.trace() - 1.0));
    traj.max_hermiticity_defect =
        std::max(traj.max_hermiticity_defect, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
  }
}

std::vector<double> make_time_grid(double t0, double t1, double step,
                                   const std::vector<double>& extra) {
  if (!(t1 > t0) || !(step > 0.0)) throw std::invalid_argument("make_time_grid: empty range");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / step * (1.0 + 1e-12)));
  grid.reserve(n + 2 + extra.size());
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(t0 + step * static_cast<double>(k));
  if (t1 - grid.back() > 1e-9 * step) grid.push_back(t1);
  grid.back() = std::max(grid.back(), t1);
  for (double e : extra) {
    if (e >= t0 && e <= t1) grid.push_back(e);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
             grid.end());
  return grid;
}

namespace {

template <int Cols>
struct LinearSystem {
  static constexpr std::size_t kSize = 8 * Cols;
  using State = std::array<double, kSize>;

  const MasterEquation* me;
  double* last_t;

  void operator()(const State& x, State& dx, double t) const {
    *last_t = t;
    using Block = Eigen::Matrix<cplx, 4, Cols>;
    Eigen::Map<const Block> in(reinterpret_cast<const cplx*>(x.data()));
    Eigen::Map<Block> out(reinterpret_cast<cplx*>(dx.data()));
    out.noalias() = me->generator(t) * in;
  }
};

double max_step(const MasterEquation& me) { return 0.25 * me.config().drive.tau_p; }

[[noreturn]] void rethrow_integration_failure(const std::exception& e, double t) {
  throw NumericalError(std::string("integration failed near t = ") + std::to_string(t) + " ps: " +
                           e.what(),
                       t);
}

Superop propagate_interval(const MasterEquation& me, double a, double b) {
  using Sys = LinearSystem<4>;
  Sys::State x{};
  Eigen::Map<Superop> p(reinterpret_cast<cplx*>(x.data()));
  p.setIdentity();
  double last_t = a;
  const auto& s = me.config().integrator;
  auto stepper = odeint::make_controlled(s.abs_tol, s.rel_tol, max_step(me),
                                         odeint::runge_kutta_dopri5<Sys::State>());
  try {
    odeint::integrate_adaptive(stepper, Sys{&me, &last_t}, x, a, b, std::min(0.05, b - a));
  } catch (const odeint::odeint_error& e) {
    rethrow_integration_failure(e, last_t);
  }
  return Eigen::Map<Superop>(reinterpret_cast<cplx*>(x.data()));
}

}  // namespace

Trajectory integrate(const MasterEquation& me, const std::vector<double>& times, const Op& rho0) {
  if (times.size() < 2) throw std::invalid_argument("integrate: need at least two output times");
  using Sys = LinearSystem<1>;
  Sys::State x{};
  Eigen::Map<VecRho>(reinterpret_cast<cplx*>(x.data())) = vec(rho0);

  Trajectory traj;
  traj.times.reserve(times.size());
  traj.states.reserve(times.size());
  traj.n_x.reserve(times.size());
  auto observer = [&](const Sys::State& s, double t) {
    const Op rho = unvec(Eigen::Map<const VecRho>(reinterpret_cast<const cplx*>(s.data())));
    traj.times.push_back(t);
    traj.states.push_back(rho);
    traj.n_x.push_back(rho(1, 1).real());
  };

  double last_t = times.front();
  const auto& st = me.config().integrator;
  auto stepper = odeint::make_dense_output(st.abs_tol, st.rel_tol, max_step(me),
                                           odeint::runge_kutta_dopri5<Sys::State>());
  try {
    odeint::integrate_times(stepper, Sys{&me, &last_t}, x, times.begin(), times.end(), 0.01,
                            observer, odeint::max_step_checker(1000000));
  } catch (const odeint::odeint_error& e) {
    rethrow_integration_failure(e, last_t);
  }
  update_defects(traj);
  return traj;
}

Trajectory integrate(const MasterEquation& me) {
  const auto& d = me.config().drive;
  const auto grid = make_time_grid(me.t_start(), me.t_end(), me.config().integrator.output_step,
                                   {d.center + 2.0 * d.tau_p});
  return integrate(me, grid, ground_state());
}

Trajectory integrate(const SimulationConfig& cfg, SolverOptions options) {
  auto bath = std::make_shared<const PhononBath>(tabulate_kernel(cfg.bath, cfg.quadrature));
  return integrate(MasterEquation(cfg, std::move(bath), options));
}

Trajectory integrate_direct_full_me(const SimulationConfig& cfg, SolverOptions options) {
  options.solver = Solver::direct;
  return integrate(cfg, options);
}

double population_metric(const Trajectory& traj, const DriveSpec& drive) {
  const double t = drive.center + 2.0 * drive.tau_p;
  if (traj.times.empty() || traj.times.back() < t - 1e-12) {
    throw NumericalError("population_metric: horizon ends before center + 2 tau_p", t);
  }
  return traj.population_at(t);
}

// ---------------------------------------------------------------- propagators

std::vector<Superop> step_propagators(const MasterEquation& me, const std::vector<double>& grid) {
  if (grid.size() < 2) return {};
  std::vector<Superop> out(grid.size() - 1);
  const auto n = static_cast<long>(out.size());
  bool failed = false;
  double failed_t = 0.0;
  std::string message;
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = propagate_interval(me, grid[k], grid[k + 1]);
    } catch (const NumericalError& e) {
#pragma omp critical(polaron_propagator_failure)
      {
        if (!failed || grid[k] < failed_t) {
          failed = true;
          failed_t = grid[k];
          message = e.what();
        }
      }
    }
  }
  if (failed) throw NumericalError(message, failed_t);
  return out;
}

namespace serial {
std::vector<Superop> step_propagators(const MasterEquation& me, const std::vector<double>& grid) {
  if (grid.size() < 2) return {};
  std::vector<Superop> out(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    out[k] = propagate_interval(me, grid[k], grid[k + 1]);
  }
  return out;
}
}  // namespace serial

Trajectory chain_propagators(const std::vector<Superop>& props, const std::vector<double>& grid,
                             const Op& rho0) {
  if (props.size() + 1 != grid.size()) {
    throw std::invalid_argument("chain_propagators: grid and propagator counts disagree");
  }
  Trajectory traj;
  traj.times = grid;
  traj.states.reserve(grid.size());
  traj.n_x.reserve(grid.size());
  VecRho v = vec(rho0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0) v = props[k - 1] * v;
    const Op rho = unvec(v);
    traj.states.push_back(rho);
    traj.n_x.push_back(rho(1, 1).real());
  }
  update_defects(traj);
  return traj;
}

}  // namespace polaron

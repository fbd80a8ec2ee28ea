#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polaron/config.hpp"
#include "polaron/drive.hpp"
#include "polaron/liouvillian.hpp"
#include "polaron/phonon_kernel.hpp"
#include "polaron/rates.hpp"

namespace polaron {

enum class Solver { analytic, direct, effective };

Solver parse_solver(std::string_view name);
std::string to_string(Solver s);

struct SolverOptions {
  Solver solver = Solver::analytic;
  bool significant_only = false;
  bool drive_renormalization = true;
  bool rate_cache = false;
};

/// Time-dependent generator L(t) for one configuration. Immutable; shares the
/// tabulated kernel with other instances.
class MasterEquation {
 public:
  MasterEquation(SimulationConfig cfg, std::shared_ptr<const PhononBath> bath,
                 SolverOptions options = {});

  const SimulationConfig& config() const { return cfg_; }
  const PhononBath& bath() const { return *bath_; }
  std::shared_ptr<const PhononBath> bath_ptr() const { return bath_; }
  const SolverOptions& options() const { return options_; }

  /// Rabi frequency acting on the exciton at t (bare, before <B>).
  double omega(double t) const { return exciton_drive(t, cfg_.drive); }
  /// Phonon rates at t for the configured solver (full rates for direct).
  RateSet rates(double t) const;
  Superop generator(double t) const;

  /// gamma (1 + F_P) and F_P gamma.
  double total_gamma() const { return terms_.gamma; }
  double gamma_tilde() const { return cfg_.system.gamma * cfg_.drive.purcell_factor(); }

  /// Default horizon: [first center - 5 tau_p, last center + 5 tau_p] unless
  /// overridden by the integrator settings.
  double t_start() const;
  double t_end() const;

 private:
  RateSet compute_rates(double t) const;

  SimulationConfig cfg_;
  std::shared_ptr<const PhononBath> bath_;
  SolverOptions options_;
  GeneratorTerms terms_;
  RateEngine engine_;
  double rate_delta_;
  RateEngine::EffectiveIntegrals effective_;
  std::optional<RateCache> cache_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Op> states;
  std::vector<double> n_x;
  double max_trace_defect = 0.0;
  double max_hermiticity_defect = 0.0;

  /// N_x(t) by cubic interpolation (exact at samples). Throws NumericalError
  /// outside the covered range.
  double population_at(double t) const;
};

/// Ground state |g><g|.
Op ground_state();

/// Uniform grid from t0 at `step`, ending exactly at t1, with `extra` times merged in.
std::vector<double> make_time_grid(double t0, double t1, double step,
                                   const std::vector<double>& extra = {});

/// Adaptive Dormand-Prince integration with dense output at `times`.
/// Throws NumericalError carrying t if the step size collapses.
Trajectory integrate(const MasterEquation& me, const std::vector<double>& times, const Op& rho0);

/// Default run: ground state, default horizon and output step, with the
/// population-metric time (center + 2 tau_p) sampled exactly.
Trajectory integrate(const MasterEquation& me);
Trajectory integrate(const SimulationConfig& cfg, SolverOptions options = {});

/// Oracle run using the directly evaluated phonon dissipator.
Trajectory integrate_direct_full_me(const SimulationConfig& cfg, SolverOptions options = {});

/// N_x one pulse full width (2 tau_p) after the first pulse center.
double population_metric(const Trajectory& traj, const DriveSpec& drive);

/// Propagators P_i with vec(rho(grid[i+1])) = P_i vec(rho(grid[i])), one
/// independent integration per interval (OpenMP over intervals).
std::vector<Superop> step_propagators(const MasterEquation& me, const std::vector<double>& grid);

namespace serial {
std::vector<Superop> step_propagators(const MasterEquation& me, const std::vector<double>& grid);
}  // namespace serial

/// States on `grid` obtained by chaining propagators from rho0.
Trajectory chain_propagators(const std::vector<Superop>& props, const std::vector<double>& grid,
                             const Op& rho0);

/// Records max |Tr rho - 1| and max |rho - rho^dag| over the stored states.
void update_defects(Trajectory& traj);

}  // namespace polaron

// polaron-sim: command-line front end for the polaron master-equation engine.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polaron/config.hpp"
#include "polaron/dynamics.hpp"
#include "polaron/errors.hpp"
#include "polaron/photon_stats.hpp"
#include "polaron/rates.hpp"
#include "polaron/sweep.hpp"
#include "polaron/units.hpp"

namespace {

using namespace polaron;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string config;
  std::string out;
  std::string solver = "analytic";
  int threads = 0;
  bool rate_cache = false;
  bool significant_only = false;
  bool no_renormalization = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_solver = true) {
  cmd->add_option("--config", o.config, "Configuration file (defaults to the reference parameters)");
  cmd->add_option("--out", o.out, "Output directory (stdout when omitted, where supported)");
  if (with_solver) {
    cmd->add_option("--solver", o.solver, "analytic | direct | effective")
        ->check(CLI::IsMember({"analytic", "direct", "effective"}));
  }
  cmd->add_option("--threads", o.threads, "Worker threads for parallel kernels")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--rate-cache", o.rate_cache, "Interpolate rates from a 0.05 ps grid");
  cmd->add_flag("--significant-rates-only", o.significant_only,
                "Drop Gamma_g, Gamma_sd and the detuning shift");
  cmd->add_flag("--no-drive-renormalization", o.no_renormalization,
                "Omit the coherent correction from the imaginary parts of Gamma_u and Gamma_g");
}

SimulationConfig load(const CommonOptions& o) {
  return o.config.empty() ? reference_config() : load_config_file(o.config);
}

SolverOptions solver_options(const CommonOptions& o) {
  SolverOptions s;
  s.solver = parse_solver(o.solver);
  s.rate_cache = o.rate_cache;
  s.significant_only = o.significant_only;
  s.drive_renormalization = !o.no_renormalization;
  return s;
}

void apply_threads(const CommonOptions& o) {
#ifdef _OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#else
  (void)o;
#endif
}

// Writes to <out>/<name>, or stdout when no directory was given.
template <class Writer>
void emit(const CommonOptions& o, const std::string& name, Writer&& write) {
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  fs::create_directories(o.out);
  std::ofstream f(fs::path(o.out) / name, std::ios::binary);
  if (!f) throw ConfigError("out", "cannot write " + (fs::path(o.out) / name).string());
  write(f);
}

std::string num(double v) { return format_number(v); }

void write_rate_rows(std::ostream& out, double t, const std::string& prefix, const RateSet& r,
                     bool full) {
  auto row = [&](const char* name, double v) {
    out << num(t) << ',' << prefix << name << ',' << num(v) << '\n';
  };
  if (full) {
    row("gamma_sig_plus", r.gamma_sig_plus);
    row("gamma_sig_minus", r.gamma_sig_minus);
    row("gamma_cd", r.gamma_cd);
    row("gamma_sd", r.gamma_sd);
    row("re_gamma_u", r.gamma_u.real());
    row("im_gamma_u", r.gamma_u.imag());
    row("re_gamma_g", r.gamma_g.real());
    row("im_gamma_g", r.gamma_g.imag());
    row("delta_shift", r.delta_shift);
  } else {
    row("gamma0_sig_plus", r.gamma_sig_plus);
    row("gamma0_sig_minus", r.gamma_sig_minus);
    row("gamma0_cd", r.gamma_cd);
  }
}

int run_rates(const CommonOptions& o, const std::string& kernel_csv) {
  const auto cfg = load(o);
  const auto bath = shared_bath(cfg);
  if (!kernel_csv.empty()) {
    std::ofstream f(kernel_csv, std::ios::binary);
    write_kernel_csv(f, *bath);
  }
  const RateEngine engine(*bath);
  const double delta = rate_detuning(cfg.drive);
  const auto& d = cfg.drive;
  emit(o, "rates_timeseries.csv", [&](std::ostream& out) {
    out << "t_ps,rate_name,value_per_ps\n";
    const auto grid = make_time_grid(d.center - 3.0 * d.tau_p, d.center + 3.0 * d.tau_p, 0.25);
    for (double t : grid) {
      const auto snap = DriveSnapshot::make(exciton_drive(t, d), engine.b_avg(), delta);
      write_rate_rows(out, t, "full.", engine.full(snap), true);
      write_rate_rows(out, t, "effective.", engine.effective(snap), false);
    }
  });
  if (!o.out.empty()) {
    emit(o, "rates_vs_detuning.csv", [&](std::ostream& out) {
      out << "detuning_meV,rate_name,value_per_ps\n";
      const SweepAxis axis{"drive.detuning", -1.5, 1.5, 61};
      for (double det : axis.values()) {
        DriveSpec dd = d;
        dd.delta_lx = energy_to_angular_frequency(det);
        if (dd.cavity) dd.cavity->detuning_in_rates = false;
        // rows reuse the time column for the detuning value
        write_rate_rows(out, det, "full.", averaged_rates(dd, *bath, RateModel::full), true);
        write_rate_rows(out, det, "effective.", averaged_rates(dd, *bath, RateModel::effective), false);
      }
    });
  }
  return 0;
}

int run_evolve(const CommonOptions& o) {
  const auto cfg = load(o);
  const MasterEquation me(cfg, shared_bath(cfg), solver_options(o));
  const auto traj = integrate(me);
  emit(o, "evolve.csv", [&](std::ostream& out) {
    out << "t_ps,rho_gg,re_rho_ge,im_rho_ge,rho_ee\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const Op& r = traj.states[k];
      out << num(traj.times[k]) << ',' << num(r(0, 0).real()) << ',' << num(r(0, 1).real()) << ','
          << num(r(0, 1).imag()) << ',' << num(r(1, 1).real()) << '\n';
    }
  });
  std::fprintf(stderr, "population_metric = %s\ntrace_defect = %.3g\nhermiticity_defect = %.3g\n",
               num(population_metric(traj, cfg.drive)).c_str(), traj.max_trace_defect,
               traj.max_hermiticity_defect);
  return 0;
}

SweepPlan custom_plan(const SimulationConfig& base, const std::vector<std::string>& axes,
                      const std::string& name) {
  SweepPlan p;
  p.name = name;
  p.base = base;
  for (const auto& a : axes) p.axes.push_back(SweepAxis::parse(a));
  p.series = {{"base", {}}};
  return p;
}

int finish_sweep(const CommonOptions& o, const SweepResult& r) {
  if (o.out.empty()) {
    write_csv(std::cout, r);
  } else {
    write_sweep_outputs(r, o.out, r.plan.name);
  }
  if (r.failures() > 0) {
    std::fprintf(stderr, "%zu of %zu points failed (see manifest)\n", r.failures(), r.points.size());
  }
  return 0;
}

int run_sweep_cmd(const CommonOptions& o, const std::string& panel, const std::vector<std::string>& axes) {
  const auto cfg = load(o);
  SweepPlan plan = panel.empty() ? custom_plan(cfg, axes, "sweep") : population_panel(panel, cfg);
  if (!panel.empty() && !axes.empty()) {
    for (std::size_t i = 0; i < axes.size() && i < plan.axes.size(); ++i) plan.axes[i] = SweepAxis::parse(axes[i]);
  }
  if (panel.empty() && axes.empty()) throw ConfigError("axis", "give --panel or at least one --axis");
  plan.options = solver_options(o);
  return finish_sweep(o, sweep_population(plan));
}

int run_cavity_cmd(const CommonOptions& o, const std::string& panel, const std::vector<std::string>& axes) {
  const auto cfg = load(o);
  SweepPlan plan = panel.empty() ? custom_plan(cfg, axes, "cavity_sweep") : cavity_panel(panel, cfg);
  if (!panel.empty() && !axes.empty()) {
    for (std::size_t i = 0; i < axes.size() && i < plan.axes.size(); ++i) plan.axes[i] = SweepAxis::parse(axes[i]);
  }
  if (panel.empty() && axes.empty()) throw ConfigError("axis", "give --panel or at least one --axis");
  plan.options = solver_options(o);
  return finish_sweep(o, sweep_cavity(plan));
}

int run_photons(const CommonOptions& o, const std::string& scheme, double purcell,
                const std::string& panel) {
  const auto cfg = load(o);
  if (!panel.empty()) {
    SweepPlan plan = photon_panel(panel, cfg);
    plan.options = solver_options(o);
    return finish_sweep(o, sweep_photon_source(plan));
  }
  const auto r = photon_source(cfg, parse_scheme(scheme), purcell, shared_bath(cfg), solver_options(o));
  emit(o, "g2_integrated.csv", [&](std::ostream& out) {
    out << "tau_ps,g2_integrated\n";
    const auto& s = r.surface;
    for (std::size_t j = s.tau.size(); j-- > 1;) out << num(-s.tau[j]) << ',' << num(s.integrated[j]) << '\n';
    for (std::size_t j = 0; j < s.tau.size(); ++j) out << num(s.tau[j]) << ',' << num(s.integrated[j]) << '\n';
  });
  const std::string summary = "scheme = " + scheme + "\nF_P = " + num(purcell) +
                              "\nindistinguishability = " + num(r.indistinguishability) +
                              "\nbeta = " + num(r.beta) + "\nn_ems = " + num(r.n_ems) + '\n';
  if (o.out.empty()) {
    std::cerr << summary;
  } else {
    emit(o, "photons_summary.txt", [&](std::ostream& out) { out << summary; });
  }
  for (const auto& w : r.surface.warnings) std::cerr << "warning: " << w << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polaron master-equation simulator for pulse-driven quantum dots"};
  app.set_version_flag("--version", std::string(POLARON_VERSION));
  app.require_subcommand(1);

  CommonOptions o;
  std::string kernel_csv, panel, scheme = "pi-pulse";
  std::vector<std::string> axes;
  double purcell = 10.0;

  auto* rates = app.add_subcommand("rates", "Instantaneous and pulse-averaged phonon rates");
  add_common(rates, o, false);
  rates->add_option("--dump-kernel", kernel_csv, "Write the tabulated phi(tau) as CSV");

  auto* evolve = app.add_subcommand("evolve", "Integrate rho(t) for one configuration");
  add_common(evolve, o);

  auto* sweep = app.add_subcommand("sweep", "Population sweep (panels 2a, 2b, 2c, 2d, 2f)");
  add_common(sweep, o);
  sweep->add_option("--panel", panel, "Preset panel")->check(CLI::IsMember({"2a", "2b", "2c", "2d", "2f"}));
  sweep->add_option("--axis", axes, "path:min:max:count (repeatable, up to two)");

  auto* cavity = app.add_subcommand("cavity-sweep", "Cavity-driven population sweep (panels 3a-3d)");
  add_common(cavity, o);
  cavity->add_option("--panel", panel, "Preset panel")->check(CLI::IsMember({"3a", "3b", "3c", "3d"}));
  cavity->add_option("--axis", axes, "path:min:max:count (repeatable, up to two)");

  auto* photons = app.add_subcommand("photons", "Single-photon-source figures of merit");
  add_common(photons, o);
  photons->add_option("--scheme", scheme, "pi-pulse | phonon-assisted")
      ->check(CLI::IsMember({"pi-pulse", "phonon-assisted"}));
  photons->add_option("--purcell", purcell, "Purcell factor F_P")->check(CLI::NonNegativeNumber);
  photons->add_option("--panel", panel, "Sweep preset instead of a single point")
      ->check(CLI::IsMember({"4c", "4d"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    apply_threads(o);
    if (*rates) return run_rates(o, kernel_csv);
    if (*evolve) return run_evolve(o);
    if (*sweep) return run_sweep_cmd(o, panel, axes);
    if (*cavity) return run_cavity_cmd(o, panel, axes);
    if (*photons) return run_photons(o, scheme, purcell, panel);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}

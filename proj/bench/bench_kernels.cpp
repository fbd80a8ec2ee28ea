// Serial reference vs OpenMP kernels: wall time, speedup and output agreement.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polaron/photon_stats.hpp"
#include "polaron/sweep.hpp"

using namespace polaron;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-18s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              identical ? "identical" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-18s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");

  const auto cfg = reference_config();
  {
    PhononBath a = serial::tabulate_kernel(cfg.bath), b = tabulate_kernel(cfg.bath);
    const double ts = best_of(repeats, [&] { a = serial::tabulate_kernel(cfg.bath); });
    const double tp = best_of(repeats, [&] { b = tabulate_kernel(cfg.bath); });
    row("tabulate_kernel", ts, tp, std::equal(a.table().begin(), a.table().end(), b.table().begin()));
  }

  const auto bath = std::make_shared<const PhononBath>(tabulate_kernel(cfg.bath));
  const PulseTrainSpec train;
  const MasterEquation me(photon_source_config(cfg, PhotonScheme::pi_pulse, 10.0, train), bath);
  {
    const auto grid = make_time_grid(-0.5 * train.period, train.n_periods * train.period, train.tau_step);
    std::vector<Superop> a, b;
    const double ts = best_of(repeats, [&] { a = serial::step_propagators(me, grid); });
    const double tp = best_of(repeats, [&] { b = step_propagators(me, grid); });
    row("step_propagators", ts, tp, a == b);
  }
  {
    CorrelationSurface a, b;
    const double ts = best_of(repeats, [&] { a = serial::g2_surface(me, train); });
    const double tp = best_of(repeats, [&] { b = g2_surface(me, train); });
    row("g2_surface", ts, tp, a.g2 == b.g2);
  }
  {
    SweepPlan plan;
    plan.name = "bench";
    plan.base = cfg;
    plan.axes = {{"drive.pulse_area_pi", 0.0, 40.0, 41}};
    plan.series = {{"blue", {{"drive.detuning", 0.83}}}};
    SweepResult a, b;
    const double ts = best_of(1, [&] { a = serial::run_sweep(plan, population_metric_columns()); });
    const double tp = best_of(1, [&] { b = run_sweep(plan, population_metric_columns()); });
    bool same = a.points.size() == b.points.size();
    for (std::size_t i = 0; same && i < a.points.size(); ++i) same = a.points[i].values == b.points[i].values;
    row("run_sweep (41 pts)", ts, tp, same);
  }
  return 0;
}

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polaron/dynamics.hpp"
#include "polaron/photon_stats.hpp"

namespace polaron {

/// Linear axis over a parameter path of SimulationConfig (file units).
struct SweepAxis {
  std::string path;
  double min = 0.0;
  double max = 0.0;
  int count = 2;

  std::vector<double> values() const;
  /// Parses "path:min:max:count".
  static SweepAxis parse(std::string_view spec);
};

/// One curve of a panel: parameter overrides applied before the axes.
struct SweepSeries {
  std::string label;
  std::vector<std::pair<std::string, double>> overrides;
};

struct SweepPlan {
  std::string name;
  SimulationConfig base;
  std::vector<SweepAxis> axes;      // one or two
  std::vector<SweepSeries> series;  // at least one
  SolverOptions options;

  /// Throws ConfigError for counts < 2, unknown paths or a bad axis count.
  void validate() const;
  std::size_t point_count() const;
  /// Canonical text of everything that determines the outputs.
  std::string canonical() const;
};

/// Evaluates one point. Columns name the returned values.
struct SweepMetric {
  std::vector<std::string> columns;
  std::function<std::vector<double>(const SimulationConfig&, std::shared_ptr<const PhononBath>,
                                    const SweepSeries&, const SolverOptions&)>
      eval;
};

SweepMetric population_metric_columns();
SweepMetric photon_source_metric(const PulseTrainSpec& train = {});

struct SweepPoint {
  std::size_t series = 0;
  std::vector<double> coords;
  std::vector<double> values;  // NaN when failed
  bool ok = true;
  std::string message;
};

struct SweepResult {
  SweepPlan plan;
  std::vector<std::string> columns;
  std::vector<SweepPoint> points;  // series-major, last axis fastest

  std::size_t failures() const;
};

/// Points run in parallel (dynamic schedule); results land in grid order.
SweepResult run_sweep(const SweepPlan& plan, const SweepMetric& metric);

namespace serial {
SweepResult run_sweep(const SweepPlan& plan, const SweepMetric& metric);
}  // namespace serial

SweepResult sweep_population(const SweepPlan& plan);
SweepResult sweep_cavity(const SweepPlan& plan);
SweepResult sweep_photon_source(const SweepPlan& plan, const PulseTrainSpec& train = {});

/// Panel presets; `base` supplies bath, system and integrator settings.
/// Population: 2a, 2b, 2c, 2d, 2f. Cavity: 3a, 3b, 3c, 3d. Photons: 4c, 4d.
SweepPlan population_panel(std::string_view panel, const SimulationConfig& base);
SweepPlan cavity_panel(std::string_view panel, const SimulationConfig& base);
SweepPlan photon_panel(std::string_view panel, const SimulationConfig& base);

/// FNV-1a 64-bit hash of the plan's canonical text, as 16 hex digits.
std::string config_hash(const SweepPlan& plan);

struct RunManifest {
  std::string panel;
  std::string config_hash;
  std::string version;
  std::string timestamp;
  std::string solver;
  std::vector<std::string> axes;
  std::vector<std::string> series;
  std::vector<std::string> point_status;

  static RunManifest from(const SweepResult& result, std::string timestamp);
  std::string text() const;
};

std::string utc_timestamp();

/// Fixed 9-significant-digit float formatting; NaN prints as "nan".
std::string format_number(double v);

void write_csv(std::ostream& out, const SweepResult& result);
std::string plot_script(const SweepResult& result, const std::string& csv_name);

/// Writes <stem>.csv, <stem>.manifest and <stem>_plot.py into `dir`.
void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir,
                         const std::string& stem);

/// Tabulated kernels keyed by bath and quadrature settings.
std::shared_ptr<const PhononBath> shared_bath(const SimulationConfig& cfg);

}  // namespace polaron

#include "polaron/sweep.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "polaron/errors.hpp"
#include "polaron/units.hpp"

#ifndef POLARON_VERSION
#define POLARON_VERSION "unknown"
#endif

namespace polaron {

// ---------------------------------------------------------------- plan

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] =
        i + 1 == count ? max : min + (max - min) * static_cast<double>(i) / (count - 1);
  }
  return v;
}

SweepAxis SweepAxis::parse(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 4) throw ConfigError("axis", "expected path:min:max:count");
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw ConfigError("axis", "not a number: '" + std::string(s) + "'");
    }
    return v;
  };
  SweepAxis a;
  a.path = std::string(parts[0]);
  a.min = number(parts[1]);
  a.max = number(parts[2]);
  const double c = number(parts[3]);
  if (c != std::floor(c)) throw ConfigError("axis", "count must be an integer");
  a.count = static_cast<int>(c);
  return a;
}

void SweepPlan::validate() const {
  if (axes.empty() || axes.size() > 2) throw ConfigError("axis", "a sweep needs one or two axes");
  for (const auto& a : axes) {
    if (!is_parameter_path(a.path)) throw ConfigError(a.path, "not a sweepable parameter");
    if (a.count < 2) throw ConfigError(a.path, "axis count must be >= 2");
  }
  if (series.empty()) throw ConfigError("series", "a sweep needs at least one series");
  for (const auto& s : series) {
    for (const auto& [path, value] : s.overrides) {
      if (!is_parameter_path(path)) throw ConfigError(path, "not a sweepable parameter");
    }
  }
  polaron::validate(base);
}

std::size_t SweepPlan::point_count() const {
  std::size_t n = series.size();
  for (const auto& a : axes) n *= static_cast<std::size_t>(std::max(a.count, 0));
  return n;
}

std::string SweepPlan::canonical() const {
  std::ostringstream s;
  s << "name=" << name << '\n' << serialize_config(base);
  s << "solver=" << to_string(options.solver) << " significant_only=" << options.significant_only
    << " drive_renormalization=" << options.drive_renormalization
    << " rate_cache=" << options.rate_cache << '\n';
  for (const auto& a : axes) {
    s << "axis=" << a.path << ':' << format_number(a.min) << ':' << format_number(a.max) << ':'
      << a.count << '\n';
  }
  for (const auto& se : series) {
    s << "series=" << se.label;
    for (const auto& [p, v] : se.overrides) s << ' ' << p << '=' << format_number(v);
    s << '\n';
  }
  return s.str();
}

std::size_t SweepResult::failures() const {
  std::size_t n = 0;
  for (const auto& p : points) n += p.ok ? 0 : 1;
  return n;
}

// ---------------------------------------------------------------- metrics

SweepMetric population_metric_columns() {
  SweepMetric m;
  m.columns = {"population"};
  m.eval = [](const SimulationConfig& cfg, std::shared_ptr<const PhononBath> bath,
              const SweepSeries&, const SolverOptions& opt) {
    const MasterEquation me(cfg, std::move(bath), opt);
    const auto traj = integrate(me);
    return std::vector<double>{population_metric(traj, cfg.drive)};
  };
  return m;
}

SweepMetric photon_source_metric(const PulseTrainSpec& train) {
  SweepMetric m;
  m.columns = {"beta", "n_ems", "indistinguishability"};
  m.eval = [train](const SimulationConfig& cfg, std::shared_ptr<const PhononBath> bath,
                   const SweepSeries& series, const SolverOptions& opt) {
    const double purcell = cfg.drive.purcell_factor();
    SimulationConfig prepared;
    if (series.label == "pi-pulse" || series.label == "phonon-assisted") {
      prepared = photon_source_config(cfg, parse_scheme(series.label), purcell, train);
    } else {
      prepared = photon_train_config(cfg, purcell, train);
    }
    const auto r = evaluate_photon_source(prepared, std::move(bath), opt, train);
    return std::vector<double>{r.beta, r.n_ems, r.indistinguishability};
  };
  return m;
}

// ---------------------------------------------------------------- execution

std::shared_ptr<const PhononBath> shared_bath(const SimulationConfig& cfg) {
  return std::make_shared<const PhononBath>(tabulate_kernel(cfg.bath, cfg.quadrature));
}

namespace {

struct PreparedPoint {
  SweepPoint point;
  SimulationConfig cfg;
  std::size_t bath = 0;
  bool valid = true;
};

struct Prepared {
  std::vector<PreparedPoint> points;
  std::vector<std::shared_ptr<const PhononBath>> baths;
};

// Configs and kernels are built serially so that only independent point
// evaluations run concurrently.
Prepared prepare(const SweepPlan& plan) {
  plan.validate();
  Prepared out;
  std::vector<std::pair<BathParams, QuadratureSettings>> keys;
  const auto a0 = plan.axes[0].values();
  const auto a1 = plan.axes.size() > 1 ? plan.axes[1].values() : std::vector<double>{};
  const std::size_t inner = plan.axes.size() > 1 ? a1.size() : 1;
  for (std::size_t s = 0; s < plan.series.size(); ++s) {
    for (std::size_t i = 0; i < a0.size(); ++i) {
      for (std::size_t j = 0; j < inner; ++j) {
        PreparedPoint pp;
        pp.point.series = s;
        pp.point.coords.push_back(a0[i]);
        if (plan.axes.size() > 1) pp.point.coords.push_back(a1[j]);
        pp.cfg = plan.base;
        try {
          for (const auto& [path, value] : plan.series[s].overrides) set_parameter(pp.cfg, path, value);
          for (std::size_t k = 0; k < plan.axes.size(); ++k) {
            set_parameter(pp.cfg, plan.axes[k].path, pp.point.coords[k]);
          }
          validate(pp.cfg);
          const auto key = std::make_pair(pp.cfg.bath, pp.cfg.quadrature);
          std::size_t b = 0;
          while (b < keys.size() && !(keys[b] == key)) ++b;
          if (b == keys.size()) {
            keys.push_back(key);
            out.baths.push_back(shared_bath(pp.cfg));
          }
          pp.bath = b;
        } catch (const std::exception& e) {
          pp.valid = false;
          pp.point.ok = false;
          pp.point.message = e.what();
        }
        out.points.push_back(std::move(pp));
      }
    }
  }
  return out;
}

void evaluate(const SweepPlan& plan, const SweepMetric& metric, const Prepared& prep,
              PreparedPoint& pp) {
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  if (pp.valid) {
    try {
      pp.point.values = metric.eval(pp.cfg, prep.baths[pp.bath], plan.series[pp.point.series],
                                    plan.options);
      return;
    } catch (const std::exception& e) {
      pp.point.ok = false;
      pp.point.message = e.what();
    }
  }
  pp.point.values.assign(metric.columns.size(), nan);
}

template <bool Parallel>
SweepResult run(const SweepPlan& plan, const SweepMetric& metric) {
  Prepared prep = prepare(plan);
  const auto n = static_cast<long>(prep.points.size());
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) evaluate(plan, metric, prep, prep.points[static_cast<std::size_t>(i)]);
  } else {
    for (long i = 0; i < n; ++i) evaluate(plan, metric, prep, prep.points[static_cast<std::size_t>(i)]);
  }
  SweepResult r;
  r.plan = plan;
  r.columns = metric.columns;
  r.points.reserve(prep.points.size());
  for (auto& pp : prep.points) r.points.push_back(std::move(pp.point));
  return r;
}

}  // namespace

SweepResult run_sweep(const SweepPlan& plan, const SweepMetric& metric) {
  return run<true>(plan, metric);
}

namespace serial {
SweepResult run_sweep(const SweepPlan& plan, const SweepMetric& metric) {
  return run<false>(plan, metric);
}
}  // namespace serial

SweepResult sweep_population(const SweepPlan& plan) {
  return run_sweep(plan, population_metric_columns());
}

SweepResult sweep_cavity(const SweepPlan& plan) {
  if (plan.base.drive.mode != DriveMode::cavity || !plan.base.drive.cavity) {
    throw ConfigError("drive.mode", "cavity sweep requires mode = cavity and a [cavity] section");
  }
  return run_sweep(plan, population_metric_columns());
}

SweepResult sweep_photon_source(const SweepPlan& plan, const PulseTrainSpec& train) {
  return run_sweep(plan, photon_source_metric(train));
}

// ---------------------------------------------------------------- presets

namespace {

SweepAxis area_axis(double max_pi, int count) { return {"drive.pulse_area_pi", 0.0, max_pi, count}; }
SweepAxis detuning_axis(double lo, double hi, int count) { return {"drive.detuning", lo, hi, count}; }

constexpr int k1d = 81;
constexpr int k2d = 61;

}  // namespace

SweepPlan population_panel(std::string_view panel, const SimulationConfig& base) {
  SweepPlan p;
  p.name = "fig" + std::string(panel);
  p.base = base;
  p.base.drive.mode = DriveMode::exciton;
  if (panel == "2a") {
    p.axes = {area_axis(40.0, k1d)};
    p.series = {{"detuning=-0.83meV", {{"drive.detuning", -0.83}}},
                {"detuning=0meV", {{"drive.detuning", 0.0}}},
                {"detuning=+0.83meV", {{"drive.detuning", 0.83}}}};
  } else if (panel == "2b") {
    p.axes = {detuning_axis(-1.5, 1.5, k1d)};
    p.series = {{"area=1pi", {{"drive.pulse_area_pi", 1.0}}},
                {"area=7.2pi", {{"drive.pulse_area_pi", 7.2}}},
                {"area=18.7pi", {{"drive.pulse_area_pi", 18.7}}}};
  } else if (panel == "2c") {
    p.axes = {area_axis(40.0, k1d)};
    const double alpha = base.bath.alpha_p;
    p.series = {
        {"T=4K,gp=2ueV,phonons", {{"drive.detuning", 0.83}, {"bath.temperature", 4.0}, {"system.gamma_prime", 0.002}, {"bath.alpha_p", alpha}}},
        {"T=4K,gp=2ueV,no-phonons", {{"drive.detuning", 0.83}, {"bath.temperature", 4.0}, {"system.gamma_prime", 0.002}, {"bath.alpha_p", 0.0}}},
        {"T=10K,gp=10ueV,phonons", {{"drive.detuning", 0.83}, {"bath.temperature", 10.0}, {"system.gamma_prime", 0.010}, {"bath.alpha_p", alpha}}},
        {"T=10K,gp=10ueV,no-phonons", {{"drive.detuning", 0.83}, {"bath.temperature", 10.0}, {"system.gamma_prime", 0.010}, {"bath.alpha_p", 0.0}}}};
  } else if (panel == "2d") {
    p.axes = {area_axis(40.0, k2d), detuning_axis(-1.5, 1.5, k2d)};
    p.series = {{"T=4K", {{"bath.temperature", 4.0}, {"system.gamma_prime", 0.002}}}};
  } else if (panel == "2f") {
    p.axes = {area_axis(25.0, k2d), detuning_axis(0.0, 1.5, k2d)};
    p.series = {{"T=4K", {{"bath.temperature", 4.0}, {"system.gamma_prime", 0.002}}}};
  } else {
    throw ConfigError("panel", "unknown population panel '" + std::string(panel) + "'");
  }
  return p;
}

SweepPlan cavity_panel(std::string_view panel, const SimulationConfig& base) {
  SweepPlan p;
  p.name = "fig" + std::string(panel);
  p.base = base;
  p.base.drive.mode = DriveMode::cavity;
  CavityParams cavity = base.drive.cavity.value_or(CavityParams{});
  cavity.g = energy_to_angular_frequency(0.050);
  cavity.delta_cx = energy_to_angular_frequency(0.83);
  const bool high_q = panel == "3a" || panel == "3c";
  cavity.kappa = energy_to_angular_frequency(high_q ? 0.138 : 0.620);
  p.base.drive.cavity = cavity;
  if (panel == "3a" || panel == "3b") {
    p.axes = {detuning_axis(-1.0, 2.0, k1d)};
    const std::vector<double> areas = high_q ? std::vector<double>{18.0, 35.5, 57.0}
                                             : std::vector<double>{21.0, 129.0, 255.0};
    for (double a : areas) {
      char label[32];
      std::snprintf(label, sizeof label, "area_c=%gpi", a);
      p.series.push_back({label, {{"drive.pulse_area_pi", a}}});
    }
  } else if (panel == "3c" || panel == "3d") {
    p.axes = {area_axis(high_q ? 80.0 : 300.0, k2d), detuning_axis(-1.0, 2.0, k2d)};
    p.series = {{high_q ? "Q=9000" : "Q=2000", {}}};
  } else {
    throw ConfigError("panel", "unknown cavity panel '" + std::string(panel) + "'");
  }
  return p;
}

SweepPlan photon_panel(std::string_view panel, const SimulationConfig& base) {
  SweepPlan p;
  p.name = "fig" + std::string(panel);
  p.base = base;
  p.base.drive.mode = DriveMode::exciton;
  if (panel == "4c") {
    p.axes = {{"cavity.purcell", 1.0, 50.0, 50}};
    p.series = {{"pi-pulse", {}}, {"phonon-assisted", {}}};
  } else if (panel == "4d") {
    p.axes = {{"drive.pulse_area_pi", 0.5, 25.0, k2d}, detuning_axis(-0.5, 1.5, k2d)};
    p.series = {{"F_P=25", {{"cavity.purcell", 25.0}}}};
  } else {
    throw ConfigError("panel", "unknown photon panel '" + std::string(panel) + "'");
  }
  return p;
}

// ---------------------------------------------------------------- output

std::string config_hash(const SweepPlan& plan) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : plan.canonical()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

RunManifest RunManifest::from(const SweepResult& result, std::string timestamp) {
  RunManifest m;
  m.panel = result.plan.name;
  m.config_hash = polaron::config_hash(result.plan);
  m.version = POLARON_VERSION;
  m.timestamp = std::move(timestamp);
  m.solver = to_string(result.plan.options.solver);
  for (const auto& a : result.plan.axes) {
    m.axes.push_back(a.path + ':' + format_number(a.min) + ':' + format_number(a.max) + ':' +
                     std::to_string(a.count));
  }
  for (const auto& s : result.plan.series) m.series.push_back(s.label);
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    std::string line = std::to_string(i) + " series=" + std::to_string(p.series);
    for (double c : p.coords) line += ' ' + format_number(c);
    line += p.ok ? " ok" : " failed: " + p.message;
    m.point_status.push_back(std::move(line));
  }
  return m;
}

std::string RunManifest::text() const {
  std::ostringstream s;
  s << "panel = " << panel << '\n'
    << "config_hash = " << config_hash << '\n'
    << "version = " << version << '\n'
    << "timestamp = " << timestamp << '\n'
    << "solver = " << solver << '\n';
  for (std::size_t i = 0; i < axes.size(); ++i) s << "axis." << i << " = " << axes[i] << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) s << "series." << i << " = " << series[i] << '\n';
  std::size_t failed = 0;
  for (const auto& p : point_status) failed += p.find(" failed: ") != std::string::npos;
  s << "points = " << point_status.size() << '\n' << "failed = " << failed << '\n';
  for (const auto& p : point_status) s << "point." << p << '\n';
  return s.str();
}

void write_csv(std::ostream& out, const SweepResult& result) {
  out << "series";
  for (const auto& a : result.plan.axes) out << ',' << a.path;
  for (const auto& c : result.columns) out << ',' << c;
  out << '\n';
  for (const auto& p : result.points) {
    out << result.plan.series[p.series].label;
    for (double c : p.coords) out << ',' << format_number(c);
    for (double v : p.values) out << ',' << format_number(v);
    out << '\n';
  }
}

std::string plot_script(const SweepResult& result, const std::string& csv_name) {
  const auto& axes = result.plan.axes;
  const std::string value = result.columns.front();
  std::ostringstream s;
  s << "# Convenience plot for " << csv_name << "; the CSV is the data of record.\n"
    << "import csv\nimport collections\nimport matplotlib\nmatplotlib.use('Agg')\n"
    << "import matplotlib.pyplot as plt\n\n"
    << "rows = collections.defaultdict(list)\n"
    << "with open('" << csv_name << "') as f:\n"
    << "    for r in csv.DictReader(f):\n"
    << "        rows[r['series']].append(r)\n\n";
  if (axes.size() == 1) {
    s << "fig, ax = plt.subplots()\n"
      << "for label, rs in rows.items():\n"
      << "    ax.plot([float(r['" << axes[0].path << "']) for r in rs], [float(r['" << value
      << "']) for r in rs], label=label)\n"
      << "ax.set_xlabel('" << axes[0].path << "')\nax.set_ylabel('" << value << "')\n"
      << "ax.legend()\n";
  } else {
    s << "import numpy as np\n"
      << "label, rs = next(iter(rows.items()))\n"
      << "x = sorted({float(r['" << axes[0].path << "']) for r in rs})\n"
      << "y = sorted({float(r['" << axes[1].path << "']) for r in rs})\n"
      << "z = np.full((len(y), len(x)), np.nan)\n"
      << "for r in rs:\n"
      << "    z[y.index(float(r['" << axes[1].path << "'])), x.index(float(r['" << axes[0].path
      << "']))] = float(r['" << value << "'])\n"
      << "fig, ax = plt.subplots()\n"
      << "m = ax.pcolormesh(x, y, z, shading='auto')\nfig.colorbar(m, label='" << value << "')\n"
      << "ax.set_xlabel('" << axes[0].path << "')\nax.set_ylabel('" << axes[1].path << "')\n"
      << "ax.set_title(label)\n";
  }
  const std::string png = csv_name.substr(0, csv_name.rfind('.')) + ".png";
  s << "fig.savefig('" << png << "', dpi=150)\n";
  return s.str();
}

void write_sweep_outputs(const SweepResult& result, const std::filesystem::path& dir,
                         const std::string& stem) {
  std::filesystem::create_directories(dir);
  const std::string csv_name = stem + ".csv";
  {
    std::ofstream out(dir / csv_name, std::ios::binary);
    write_csv(out, result);
  }
  {
    std::ofstream out(dir / (stem + ".manifest"), std::ios::binary);
    out << RunManifest::from(result, utc_timestamp()).text();
  }
  {
    std::ofstream out(dir / (stem + "_plot.py"), std::ios::binary);
    out << plot_script(result, csv_name);
  }
}

}  // namespace polaron

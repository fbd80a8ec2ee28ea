#include "polaron/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "polaron/errors.hpp"
#include "polaron/units.hpp"

namespace polaron {

namespace pt = boost::property_tree;

DriveSpec DriveSpec::from_area(double theta, double tau_p, double delta_lx) {
  DriveSpec d;
  d.tau_p = tau_p;
  d.delta_lx = delta_lx;
  d.set_area(theta);
  return d;
}

DriveSpec DriveSpec::from_peak(double omega_p, double tau_p, double delta_lx) {
  DriveSpec d;
  d.tau_p = tau_p;
  d.delta_lx = delta_lx;
  d.set_peak(omega_p);
  return d;
}

void DriveSpec::set_area(double area) {
  theta = area;
  omega_p = area / (std::sqrt(kPi) * tau_p);
}

void DriveSpec::set_peak(double peak) {
  omega_p = peak;
  theta = std::sqrt(kPi) * tau_p * peak;
}

double DriveSpec::delta_lc() const {
  if (!cavity) throw ConfigError("cavity", "Delta_Lc requested without a cavity");
  return delta_lx - cavity->delta_cx;
}

SimulationConfig reference_config() {
  SimulationConfig cfg;
  cfg.bath = {0.03, energy_to_angular_frequency(1.0), 4.2};
  cfg.system = {energy_to_angular_frequency(0.002), energy_to_angular_frequency(0.002)};
  cfg.drive = DriveSpec::from_area(16.0 * kPi, 10.1, energy_to_angular_frequency(0.83));
  return cfg;
}

namespace {

// Allowed keys per section; anything else is rejected so typos surface.
const std::map<std::string, std::set<std::string>, std::less<>>& schema() {
  static const std::map<std::string, std::set<std::string>, std::less<>> s = {
      {"bath", {"alpha_p", "omega_b", "temperature"}},
      {"system", {"gamma", "gamma_prime"}},
      {"drive",
       {"mode", "tau_p", "pulse_area_pi", "omega_p", "detuning", "center", "train_period",
        "train_pulses"}},
      {"cavity", {"g", "kappa", "delta_cx", "purcell", "detuning_in_rates"}},
      {"integrator", {"rel_tol", "abs_tol", "t_start", "t_end", "output_step"}},
      {"quadrature", {"omega_cutoff_factor", "tau_step", "tau_max", "kernel_tol", "quad_tol"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (v.empty() || ec != std::errc{} || ptr != last || !std::isfinite(out)) {
    throw ConfigError(key, "expected a finite number, got '" + v + "'");
  }
  return out;
}

class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

  std::optional<double> number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return parse_number(name_ + "." + key, tree_->get<std::string>(key));
  }

  double required(const std::string& key) const {
    auto v = number(key);
    if (!v) throw ConfigError(name_ + "." + key, "required field is missing");
    return *v;
  }

  double number_or(const std::string& key, double fallback) const {
    return number(key).value_or(fallback);
  }

  std::optional<std::string> text(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return trim(tree_->get<std::string>(key));
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
};

void require(bool ok, const std::string& key, const std::string& bound) {
  if (!ok) throw ConfigError(key, "violates bound " + bound);
}

std::string fmt(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

void validate(const SimulationConfig& cfg) {
  require(cfg.bath.alpha_p >= 0.0, "bath.alpha_p", ">= 0");
  require(cfg.bath.omega_b > 0.0, "bath.omega_b", "> 0");
  require(cfg.bath.temperature > 0.0, "bath.temperature", "> 0");
  require(cfg.system.gamma >= 0.0, "system.gamma", ">= 0");
  require(cfg.system.gamma_prime >= 0.0, "system.gamma_prime", ">= 0");
  const auto& d = cfg.drive;
  require(d.tau_p > 0.0, "drive.tau_p", "> 0");
  require(d.omega_p >= 0.0, "drive.omega_p", ">= 0");
  require(d.train_pulses >= 1, "drive.train_pulses", ">= 1");
  require(d.train_period >= 0.0, "drive.train_period", ">= 0");
  require(d.train_pulses == 1 || d.train_period > 0.0, "drive.train_period",
          "> 0 when train_pulses > 1");
  if (d.mode == DriveMode::cavity) {
    require(d.cavity.has_value(), "cavity", "present in cavity-driven mode");
  }
  if (d.cavity) {
    require(d.cavity->g >= 0.0, "cavity.g", ">= 0");
    require(d.cavity->kappa >= 0.0, "cavity.kappa", ">= 0");
    require(d.cavity->purcell >= 0.0, "cavity.purcell", ">= 0");
  }
  const auto& in = cfg.integrator;
  require(in.rel_tol > 0.0, "integrator.rel_tol", "> 0");
  require(in.abs_tol > 0.0, "integrator.abs_tol", "> 0");
  require(in.output_step > 0.0, "integrator.output_step", "> 0");
  if (in.t_start && in.t_end) require(*in.t_end > *in.t_start, "integrator.t_end", "> t_start");
  const auto& q = cfg.quadrature;
  require(q.omega_cutoff_factor > 0.0, "quadrature.omega_cutoff_factor", "> 0");
  require(q.tau_step > 0.0, "quadrature.tau_step", "> 0");
  require(q.kernel_tol > 0.0, "quadrature.kernel_tol", "> 0");
  require(q.quad_tol > 0.0, "quadrature.quad_tol", "> 0");
  if (q.tau_max) require(*q.tau_max >= 2.0 * q.tau_step, "quadrature.tau_max", ">= 2 tau_step");
}

SimulationConfig load_config(std::string_view text) {
  // Comments start with ';' or '#' anywhere on a line.
  std::string stripped;
  {
    std::istringstream lines{std::string(text)};
    for (std::string line; std::getline(lines, line);) {
      const auto cut = line.find_first_of(";#");
      stripped += line.substr(0, cut) + "\n";
    }
  }
  pt::ptree tree;
  {
    std::istringstream in{stripped};
    try {
      pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError("", "parse error at line " + std::to_string(e.line()) + ": " + e.message());
    }
  }

  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) {
      if (!body.data().empty()) throw ConfigError(section, "key outside of any section");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }

  auto section = [&](const std::string& name) {
    auto it = tree.find(name);
    return Section(name, it == tree.not_found() ? nullptr : &it->second);
  };

  SimulationConfig cfg;
  const Section bath = section("bath");
  cfg.bath.alpha_p = bath.required("alpha_p");
  cfg.bath.omega_b = energy_to_angular_frequency(bath.required("omega_b"));
  cfg.bath.temperature = bath.required("temperature");

  const Section system = section("system");
  cfg.system.gamma = energy_to_angular_frequency(system.required("gamma"));
  cfg.system.gamma_prime = energy_to_angular_frequency(system.required("gamma_prime"));

  const Section drive = section("drive");
  DriveSpec& d = cfg.drive;
  d.tau_p = drive.required("tau_p");
  if (d.tau_p <= 0.0) throw ConfigError("drive.tau_p", "violates bound > 0");
  const bool has_area = drive.has("pulse_area_pi");
  const bool has_peak = drive.has("omega_p");
  if (has_area == has_peak) {
    throw ConfigError("drive.pulse_area_pi", "exactly one of pulse_area_pi or omega_p is required");
  }
  if (has_area) {
    d.set_area(drive.required("pulse_area_pi") * kPi);
  } else {
    d.set_peak(energy_to_angular_frequency(drive.required("omega_p")));
  }
  cfg.drive_given_as_area = has_area;
  d.delta_lx = energy_to_angular_frequency(drive.number_or("detuning", 0.0));
  d.center = drive.number_or("center", 0.0);
  d.train_period = drive.number_or("train_period", 0.0);
  const double pulses = drive.number_or("train_pulses", 1.0);
  if (pulses != std::floor(pulses)) throw ConfigError("drive.train_pulses", "expected an integer");
  d.train_pulses = static_cast<int>(pulses);
  if (auto mode = drive.text("mode")) {
    if (*mode == "exciton") {
      d.mode = DriveMode::exciton;
    } else if (*mode == "cavity") {
      d.mode = DriveMode::cavity;
    } else {
      throw ConfigError("drive.mode", "expected 'exciton' or 'cavity', got '" + *mode + "'");
    }
  }

  if (tree.find("cavity") != tree.not_found()) {
    const Section cav = section("cavity");
    CavityParams c;
    c.g = energy_to_angular_frequency(cav.number_or("g", 0.0));
    c.kappa = energy_to_angular_frequency(cav.number_or("kappa", 0.0));
    c.delta_cx = energy_to_angular_frequency(cav.number_or("delta_cx", 0.0));
    c.purcell = cav.number_or("purcell", 0.0);
    if (auto flag = cav.text("detuning_in_rates")) {
      if (*flag == "true") {
        c.detuning_in_rates = true;
      } else if (*flag != "false") {
        throw ConfigError("cavity.detuning_in_rates", "expected true or false");
      }
    }
    d.cavity = c;
  }

  const Section integ = section("integrator");
  cfg.integrator.rel_tol = integ.number_or("rel_tol", cfg.integrator.rel_tol);
  cfg.integrator.abs_tol = integ.number_or("abs_tol", cfg.integrator.abs_tol);
  cfg.integrator.t_start = integ.number("t_start");
  cfg.integrator.t_end = integ.number("t_end");
  cfg.integrator.output_step = integ.number_or("output_step", cfg.integrator.output_step);

  const Section quad = section("quadrature");
  auto& q = cfg.quadrature;
  q.omega_cutoff_factor = quad.number_or("omega_cutoff_factor", q.omega_cutoff_factor);
  q.tau_step = quad.number_or("tau_step", q.tau_step);
  q.tau_max = quad.number("tau_max");
  q.kernel_tol = quad.number_or("kernel_tol", q.kernel_tol);
  q.quad_tol = quad.number_or("quad_tol", q.quad_tol);

  validate(cfg);
  return cfg;
}

SimulationConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string serialize_config(const SimulationConfig& cfg) {
  auto meV = [](double w) { return fmt(angular_frequency_to_energy(w)); };
  std::ostringstream out;
  out << "[bath]\n"
      << "alpha_p = " << fmt(cfg.bath.alpha_p) << "\n"
      << "omega_b = " << meV(cfg.bath.omega_b) << "\n"
      << "temperature = " << fmt(cfg.bath.temperature) << "\n\n";
  out << "[system]\n"
      << "gamma = " << meV(cfg.system.gamma) << "\n"
      << "gamma_prime = " << meV(cfg.system.gamma_prime) << "\n\n";
  const auto& d = cfg.drive;
  out << "[drive]\n"
      << "mode = " << (d.mode == DriveMode::cavity ? "cavity" : "exciton") << "\n"
      << "tau_p = " << fmt(d.tau_p) << "\n";
  if (cfg.drive_given_as_area) {
    out << "pulse_area_pi = " << fmt(d.theta / kPi) << "\n";
  } else {
    out << "omega_p = " << meV(d.omega_p) << "\n";
  }
  out << "detuning = " << meV(d.delta_lx) << "\n"
      << "center = " << fmt(d.center) << "\n"
      << "train_period = " << fmt(d.train_period) << "\n"
      << "train_pulses = " << d.train_pulses << "\n\n";
  if (d.cavity) {
    const auto& c = *d.cavity;
    out << "[cavity]\n"
        << "g = " << meV(c.g) << "\n"
        << "kappa = " << meV(c.kappa) << "\n"
        << "delta_cx = " << meV(c.delta_cx) << "\n"
        << "purcell = " << fmt(c.purcell) << "\n"
        << "detuning_in_rates = " << (c.detuning_in_rates ? "true" : "false") << "\n\n";
  }
  const auto& in = cfg.integrator;
  out << "[integrator]\n"
      << "rel_tol = " << fmt(in.rel_tol) << "\n"
      << "abs_tol = " << fmt(in.abs_tol) << "\n";
  if (in.t_start) out << "t_start = " << fmt(*in.t_start) << "\n";
  if (in.t_end) out << "t_end = " << fmt(*in.t_end) << "\n";
  out << "output_step = " << fmt(in.output_step) << "\n\n";
  const auto& q = cfg.quadrature;
  out << "[quadrature]\n"
      << "omega_cutoff_factor = " << fmt(q.omega_cutoff_factor) << "\n"
      << "tau_step = " << fmt(q.tau_step) << "\n";
  if (q.tau_max) out << "tau_max = " << fmt(*q.tau_max) << "\n";
  out << "kernel_tol = " << fmt(q.kernel_tol) << "\n"
      << "quad_tol = " << fmt(q.quad_tol) << "\n";
  return out.str();
}

namespace {

CavityParams& ensure_cavity(SimulationConfig& cfg) {
  if (!cfg.drive.cavity) cfg.drive.cavity = CavityParams{};
  return *cfg.drive.cavity;
}

using Setter = void (*)(SimulationConfig&, double);

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> s = {
      {"bath.alpha_p", [](SimulationConfig& c, double v) { c.bath.alpha_p = v; }},
      {"bath.omega_b",
       [](SimulationConfig& c, double v) { c.bath.omega_b = energy_to_angular_frequency(v); }},
      {"bath.temperature", [](SimulationConfig& c, double v) { c.bath.temperature = v; }},
      {"system.gamma",
       [](SimulationConfig& c, double v) { c.system.gamma = energy_to_angular_frequency(v); }},
      {"system.gamma_prime",
       [](SimulationConfig& c, double v) {
         c.system.gamma_prime = energy_to_angular_frequency(v);
       }},
      {"drive.tau_p",
       [](SimulationConfig& c, double v) {
         c.drive.tau_p = v;
         if (c.drive_given_as_area) {
           c.drive.set_area(c.drive.theta);
         } else {
           c.drive.set_peak(c.drive.omega_p);
         }
       }},
      {"drive.pulse_area_pi",
       [](SimulationConfig& c, double v) {
         c.drive.set_area(v * kPi);
         c.drive_given_as_area = true;
       }},
      {"drive.omega_p",
       [](SimulationConfig& c, double v) {
         c.drive.set_peak(energy_to_angular_frequency(v));
         c.drive_given_as_area = false;
       }},
      {"drive.detuning",
       [](SimulationConfig& c, double v) { c.drive.delta_lx = energy_to_angular_frequency(v); }},
      {"drive.center", [](SimulationConfig& c, double v) { c.drive.center = v; }},
      {"cavity.g",
       [](SimulationConfig& c, double v) { ensure_cavity(c).g = energy_to_angular_frequency(v); }},
      {"cavity.kappa",
       [](SimulationConfig& c, double v) {
         ensure_cavity(c).kappa = energy_to_angular_frequency(v);
       }},
      {"cavity.delta_cx",
       [](SimulationConfig& c, double v) {
         ensure_cavity(c).delta_cx = energy_to_angular_frequency(v);
       }},
      {"cavity.purcell", [](SimulationConfig& c, double v) { ensure_cavity(c).purcell = v; }},
  };
  return s;
}

}  // namespace

void set_parameter(SimulationConfig& cfg, std::string_view path, double value) {
  auto it = setters().find(path);
  if (it == setters().end()) throw ConfigError(std::string(path), "not a sweepable parameter");
  it->second(cfg, value);
}

bool is_parameter_path(std::string_view path) { return setters().contains(path); }

std::vector<std::string> parameter_paths() {
  std::vector<std::string> out;
  for (const auto& [k, v] : setters()) out.push_back(k);
  return out;
}

}  // namespace polaron

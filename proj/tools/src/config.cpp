#include "config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <toml.hpp>

#include "nanotalbot/error.hpp"
#include "nanotalbot/phase_space.hpp"
#include "nanotalbot/serialize.hpp"

namespace nanotalbot::cli {

namespace {

using Schema = std::map<std::string, std::set<std::string>>;

const Schema& schema() {
  static const Schema s{
      {"run", {"name", "seed"}},
      {"sphere", {"radius_nm", "density_kg_m3", "dielectric_constant"}},
      {"trap", {"frequency_Hz", "temperature_K"}},
      {"grating", {"period_um", "intensity_kW_m2", "pulse_duration_us", "wavelength_um"}},
      {"timing", {"t0_s", "t1_s", "total_fall_s"}},
      {"fringe",
       {"acceleration_m_s2", "acceleration_a_pi", "initial_momentum_sigma", "grid_points",
        "half_width_sigmas"}},
      {"oracle",
       {"min_points", "forced_points", "half_width_um", "linf_tolerance", "phase_tolerance_pi"}},
      {"wall",
       {"separation_um", "coating_density_kg_m3", "coating_thickness_nm", "section_width_um",
        "density_a_kg_m3", "density_b_kg_m3", "section_depth_um", "section_height_m",
        "section_pairs"}},
      {"yukawa",
       {"alpha", "lambda_um", "lambdas_um", "lambda_min_um", "lambda_max_um", "lambda_points",
        "y_offset_um", "y_scan_min_um", "y_scan_max_um", "y_scan_points"}},
      {"budget", {"shots", "contrast", "detector_noise_pm", "phase_resolution_pi"}},
      {"beta",
       {"masses_M0", "mass_min_M0", "mass_max_M0", "mass_points", "temperatures_K",
        "fall_time_s"}},
      {"shots", {"count", "repeats", "bins", "scaling_counts"}},
      {"systematics",
       {"tilt_ppm", "vibration_um_rtHz", "patch_mV", "patch_scale_um", "cp_separation_min_um",
        "cp_separation_max_um", "cp_points"}},
  };
  return s;
}

class Reader {
 public:
  Reader(const toml::table& root, std::string origin) : root_(root), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(origin_ + ": " + key + ": " + what);
  }

  const toml::node* find(const std::string& section, const std::string& key) const {
    const auto* tbl = root_[section].as_table();
    return tbl ? tbl->get(key) : nullptr;
  }

  bool has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const toml::node* n = find(section, key);
    if (!n) return fallback;
    return as_number(*n, section + "." + key);
  }

  std::size_t count(const std::string& section, const std::string& key,
                    std::size_t fallback) const {
    const toml::node* n = find(section, key);
    if (!n) return fallback;
    const auto v = n->value_exact<std::int64_t>();
    if (!v) fail(section + "." + key, "expected an integer");
    if (*v < 0) fail(section + "." + key, "must be >= 0");
    return static_cast<std::size_t>(*v);
  }

  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) const {
    const toml::node* n = find(section, key);
    if (!n) return fallback;
    const auto v = n->value_exact<std::string>();
    if (!v) fail(section + "." + key, "expected a string");
    return *v;
  }

  std::vector<double> numbers(const std::string& section, const std::string& key) const {
    const toml::node* n = find(section, key);
    if (!n) return {};
    const auto* arr = n->as_array();
    if (!arr) fail(section + "." + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& el : *arr) out.push_back(as_number(el, section + "." + key));
    return out;
  }

 private:
  double as_number(const toml::node& n, const std::string& where) const {
    if (auto f = n.value_exact<double>()) return *f;
    if (auto i = n.value_exact<std::int64_t>()) return static_cast<double>(*i);
    fail(where, "expected a number");
  }

  const toml::table& root_;
  std::string origin_;
};

void check_schema(const toml::table& root, const std::string& origin) {
  for (const auto& [section_key, node] : root) {
    const std::string section(section_key.str());
    const auto it = schema().find(section);
    if (it == schema().end())
      throw ConfigError(origin + ": unknown section [" + section + "]");
    const auto* tbl = node.as_table();
    if (!tbl) throw ConfigError(origin + ": [" + section + "] must be a table");
    for (const auto& [key, value] : *tbl) {
      (void)value;
      if (!it->second.count(std::string(key.str())))
        throw ConfigError(origin + ": unknown key " + section + "." + std::string(key.str()));
    }
  }
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) return {lo};
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) return {lo};
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

std::vector<double> scaled(std::vector<double> v, double factor) {
  for (auto& x : v) x *= factor;
  return v;
}

std::string normalized(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text)
    if (c != '\r') out.push_back(c);
  return out;
}

}  // namespace

double ExperimentConfig::resolved_t0() const {
  return t0 > 0 ? t0 : talbot_time(sphere_mass(sphere), grating.period);
}

double ExperimentConfig::resolved_t1() const {
  return t1 > 0 ? t1 : talbot_time(sphere_mass(sphere), grating.period);
}

double ExperimentConfig::phase_resolution() const {
  if (phase_resolution_override > 0) return phase_resolution_override;
  return nanotalbot::phase_resolution(budget, grating.period);
}

double ExperimentConfig::total_acceleration() const {
  return acceleration + acceleration_a_pi * a_pi(resolved_t0(), resolved_t1(), grating.period);
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& origin) {
  const std::string where = origin.string();
  toml::table root;
  try {
    root = toml::parse(text, where);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << where << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  check_schema(root, where);
  const Reader r(root, where);

  ExperimentConfig c;
  c.path = origin;
  c.content_hash = fnv1a_hex(normalized(text));
  c.name = r.text("run", "name", origin.stem().string());
  const double seed = r.number("run", "seed", 1.0);
  if (seed < 0 || seed != std::floor(seed)) r.fail("run.seed", "must be a nonnegative integer");
  c.seed = static_cast<std::uint64_t>(seed);

  c.sphere.radius = r.number("sphere", "radius_nm", c.sphere.radius * 1e9) * 1e-9;
  c.sphere.density = r.number("sphere", "density_kg_m3", c.sphere.density);
  c.sphere.dielectric_constant =
      r.number("sphere", "dielectric_constant", c.sphere.dielectric_constant);

  c.trap.omega = 2.0 * constants::pi * r.number("trap", "frequency_Hz", 100.0);
  c.trap.temperature = r.number("trap", "temperature_K", 0.0);

  c.grating.period = r.number("grating", "period_um", 0.25) * 1e-6;
  c.grating.intensity = r.number("grating", "intensity_kW_m2", 55.0) * 1e3;
  c.grating.pulse_duration = r.number("grating", "pulse_duration_us", 1.0) * 1e-6;
  c.grating.wavelength = r.number("grating", "wavelength_um", 0.0) * 1e-6;

  const double fall = r.number("timing", "total_fall_s", 0.0);
  if (fall > 0 && (r.has("timing", "t0_s") || r.has("timing", "t1_s")))
    r.fail("timing.total_fall_s", "give either total_fall_s or t0_s/t1_s, not both");
  c.t0 = fall > 0 ? 0.5 * fall : r.number("timing", "t0_s", 0.0);
  c.t1 = fall > 0 ? 0.5 * fall : r.number("timing", "t1_s", 0.0);
  if (c.t0 < 0 || c.t1 < 0) r.fail("timing", "times must be >= 0");

  c.acceleration = r.number("fringe", "acceleration_m_s2", 0.0);
  c.acceleration_a_pi = r.number("fringe", "acceleration_a_pi", 0.0);
  c.initial_momentum_sigma = r.number("fringe", "initial_momentum_sigma", 0.0);
  c.grid_points = r.count("fringe", "grid_points", c.grid_points);
  c.half_width_sigmas = r.number("fringe", "half_width_sigmas", c.half_width_sigmas);
  if (c.grid_points < 16) r.fail("fringe.grid_points", "need at least 16 points");
  if (c.half_width_sigmas <= 0) r.fail("fringe.half_width_sigmas", "must be > 0");

  c.oracle_grid.min_points = r.count("oracle", "min_points", c.oracle_grid.min_points);
  c.oracle_grid.forced_points = r.count("oracle", "forced_points", 0);
  c.oracle_grid.half_width = r.number("oracle", "half_width_um", 0.0) * 1e-6;
  c.oracle_linf_tolerance = r.number("oracle", "linf_tolerance", c.oracle_linf_tolerance);
  c.oracle_phase_tolerance_pi =
      r.number("oracle", "phase_tolerance_pi", c.oracle_phase_tolerance_pi);

  WallGeometry& w = c.wall;
  w.separation = r.number("wall", "separation_um", w.separation * 1e6) * 1e-6;
  w.coating_density = r.number("wall", "coating_density_kg_m3", w.coating_density);
  w.coating_thickness = r.number("wall", "coating_thickness_nm", w.coating_thickness * 1e9) * 1e-9;
  w.section_width = r.number("wall", "section_width_um", w.section_width * 1e6) * 1e-6;
  w.density_a = r.number("wall", "density_a_kg_m3", w.density_a);
  w.density_b = r.number("wall", "density_b_kg_m3", w.density_b);
  w.section_depth = r.number("wall", "section_depth_um", w.section_depth * 1e6) * 1e-6;
  w.section_height = r.number("wall", "section_height_m", w.section_height);
  w.section_pairs = static_cast<int>(
      r.count("wall", "section_pairs", static_cast<std::size_t>(w.section_pairs)));

  c.yukawa.alpha = r.number("yukawa", "alpha", c.yukawa.alpha);
  c.yukawa.range = r.number("yukawa", "lambda_um", c.yukawa.range * 1e6) * 1e-6;
  if (r.has("yukawa", "lambdas_um")) {
    if (r.has("yukawa", "lambda_points"))
      r.fail("yukawa.lambdas_um", "give either lambdas_um or a lambda_min/max/points range");
    c.lambdas = scaled(r.numbers("yukawa", "lambdas_um"), 1e-6);
    if (c.lambdas.empty()) r.fail("yukawa.lambdas_um", "empty lambda grid");
  } else if (r.has("yukawa", "lambda_points")) {
    const std::size_t n = r.count("yukawa", "lambda_points", 0);
    if (n == 0) r.fail("yukawa.lambda_points", "empty lambda grid");
    const double lo = r.number("yukawa", "lambda_min_um", 1.0);
    const double hi = r.number("yukawa", "lambda_max_um", 100.0);
    if (!(lo > 0 && hi >= lo)) r.fail("yukawa", "need 0 < lambda_min_um <= lambda_max_um");
    c.lambdas = scaled(log_grid(lo, hi, n), 1e-6);
  }
  for (double l : c.lambdas)
    if (!(l > 0)) r.fail("yukawa", "lambda values must be > 0");
  c.y_offset = r.number("yukawa", "y_offset_um", 0.0) * 1e-6;
  {
    const std::size_t n = r.count("yukawa", "y_scan_points", 161);
    const double lo = r.number("yukawa", "y_scan_min_um", -80.0);
    const double hi = r.number("yukawa", "y_scan_max_um", 80.0);
    if (n == 0 || hi < lo) r.fail("yukawa", "invalid y scan range");
    c.y_scan = scaled(linear_grid(lo, hi, n), 1e-6);
  }

  c.budget.shots = r.count("budget", "shots", c.budget.shots);
  c.budget.contrast = r.number("budget", "contrast", c.budget.contrast);
  c.budget.detector_noise = r.number("budget", "detector_noise_pm", 0.0) * 1e-12;
  c.phase_resolution_override = r.number("budget", "phase_resolution_pi", 0.0) * constants::pi;
  if (c.phase_resolution_override < 0) r.fail("budget.phase_resolution_pi", "must be >= 0");

  if (r.has("beta", "masses_M0")) {
    c.masses_m0 = r.numbers("beta", "masses_M0");
  } else {
    const std::size_t n = r.count("beta", "mass_points", 41);
    const double lo = r.number("beta", "mass_min_M0", 0.25);
    const double hi = r.number("beta", "mass_max_M0", 256.0);
    if (n == 0 || !(lo > 0 && hi >= lo)) r.fail("beta", "invalid mass grid");
    c.masses_m0 = log_grid(lo, hi, n);
  }
  if (c.masses_m0.empty()) r.fail("beta.masses_M0", "empty mass grid");
  for (double m : c.masses_m0)
    if (!(m > 0)) r.fail("beta.masses_M0", "masses must be > 0");
  c.temperatures = r.has("beta", "temperatures_K") ? r.numbers("beta", "temperatures_K")
                                                   : std::vector<double>{0.0};
  if (c.temperatures.empty()) r.fail("beta.temperatures_K", "empty temperature list");
  for (double t : c.temperatures)
    if (!(t >= 0)) r.fail("beta.temperatures_K", "temperatures must be >= 0");
  c.fall_time = r.number("beta", "fall_time_s", c.fall_time);
  if (!(c.fall_time > 0)) r.fail("beta.fall_time_s", "must be > 0");

  c.shot_count = r.count("shots", "count", c.shot_count);
  c.repeats = r.count("shots", "repeats", c.repeats);
  c.bins = r.count("shots", "bins", c.bins);
  if (r.has("shots", "scaling_counts")) {
    for (double v : r.numbers("shots", "scaling_counts")) {
      if (!(v >= 1) || v != std::floor(v)) r.fail("shots.scaling_counts", "need positive integers");
      c.scaling_counts.push_back(static_cast<std::size_t>(v));
    }
  }
  if (c.shot_count == 0) r.fail("shots.count", "must be >= 1");
  if (c.repeats < 2) r.fail("shots.repeats", "must be >= 2");
  if (c.bins < 2) r.fail("shots.bins", "must be >= 2");

  c.tilt = r.number("systematics", "tilt_ppm", c.tilt * 1e6) * 1e-6;
  c.vibration_asd = r.number("systematics", "vibration_um_rtHz", c.vibration_asd * 1e6) * 1e-6;
  c.patch.amplitude = r.number("systematics", "patch_mV", c.patch.amplitude * 1e3) * 1e-3;
  c.patch.scale = r.number("systematics", "patch_scale_um", c.patch.scale * 1e6) * 1e-6;
  {
    const std::size_t n = r.count("systematics", "cp_points", 16);
    const double lo = r.number("systematics", "cp_separation_min_um", 5.0);
    const double hi = r.number("systematics", "cp_separation_max_um", 20.0);
    if (n == 0 || !(lo > 0 && hi >= lo)) r.fail("systematics", "invalid separation scan");
    c.cp_separations = scaled(linear_grid(lo, hi, n), 1e-6);
  }

  try {
    c.sphere.validate();
    c.trap.validate();
    c.grating.validate();
    c.wall.validate();
    c.yukawa.validate();
    c.budget.validate();
    c.patch.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace nanotalbot::cli

#include "nanotalbot/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "nanotalbot/error.hpp"
#include "nanotalbot/parallel.hpp"
#include "nanotalbot/phase_space.hpp"
#include "nanotalbot/sampling.hpp"
#include "nanotalbot/serialize.hpp"

namespace nanotalbot {

using constants::pi;
using detail::require;

void ShotBudget::validate() const {
  require(shots >= 1, "ShotBudget: need at least one shot");
  require(contrast > 0 && contrast <= 1, "ShotBudget: contrast must lie in (0, 1]");
  require(detector_noise >= 0, "ShotBudget: detector noise must be >= 0");
}

double phase_resolution(const ShotBudget& budget, double period) {
  budget.validate();
  const double root_n = std::sqrt(static_cast<double>(budget.shots));
  const double shot = pi / (budget.contrast * root_n);
  if (budget.detector_noise == 0.0 || period <= 0) return shot;
  const double detector = pi / period * budget.detector_noise / root_n;
  return std::hypot(shot, detector);
}

double min_detectable_accel(double resolution, double t0, double t1, double period) {
  require(t0 > 0 && t1 > 0 && period > 0, "min_detectable_accel: inputs must be > 0");
  require(resolution >= 0, "min_detectable_accel: resolution must be >= 0");
  return resolution * period / (pi * t0 * t1);
}

double ExclusionScenario::resolved_t0() const {
  return t0 > 0 ? t0 : talbot_time(sphere_mass(sphere), grating.period);
}

double ExclusionScenario::resolved_t1() const {
  return t1 > 0 ? t1 : talbot_time(sphere_mass(sphere), grating.period);
}

std::string ExclusionScenario::hash() const {
  std::string key = name + ';';
  for (double v : {sphere.radius, sphere.density, sphere.dielectric_constant, trap.omega,
                   trap.temperature, grating.period, grating.intensity, grating.pulse_duration,
                   wall.separation, wall.coating_density, wall.coating_thickness,
                   wall.section_width, wall.density_a, wall.density_b, wall.section_depth,
                   wall.section_height, static_cast<double>(wall.section_pairs),
                   phase_resolution, t0, t1, y0})
    key += format_number(v) + ';';
  return fnv1a_hex(key);
}

ExclusionCurve exclusion_curve(const ExclusionScenario& scenario,
                               const std::vector<double>& ranges, int jobs) {
  require(!ranges.empty(), "exclusion_curve: empty lambda grid");
  require(scenario.phase_resolution > 0, "exclusion_curve: phase resolution must be > 0");
  scenario.wall.validate();

  ExclusionCurve curve;
  curve.ranges = ranges;
  curve.min_accel = min_detectable_accel(scenario.phase_resolution, scenario.resolved_t0(),
                                         scenario.resolved_t1(), scenario.grating.period);
  curve.config_hash = scenario.hash();
  curve.signal_per_alpha.assign(ranges.size(), 0.0);
  curve.alpha_min.assign(ranges.size(), 0.0);

  parallel_for(ranges.size(), jobs, [&](std::size_t i) {
    const DifferentialSignal sig =
        differential_accel(scenario.wall, {1.0, ranges[i]}, scenario.y0);
    curve.signal_per_alpha[i] = sig.yukawa;
  });
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (curve.signal_per_alpha[i] == 0.0)
      throw NumericalError("exclusion_curve: zero differential signal at lambda = " +
                           format_number(ranges[i]) + " (degenerate wall)");
    curve.alpha_min[i] = curve.min_accel / std::abs(curve.signal_per_alpha[i]);
  }
  return curve;
}

double ballistic_sigma_v(double mass, double omega) {
  require(mass > 0 && omega > 0, "ballistic_sigma_v: inputs must be > 0");
  return std::sqrt(constants::hbar * omega / (2.0 * mass));
}

double ballistic_accel_resolution(double sigma_v, double fall_time, std::size_t shots) {
  require(sigma_v > 0 && fall_time > 0 && shots >= 1,
          "ballistic_accel_resolution: inputs must be positive");
  return 2.0 * sigma_v / (fall_time * std::sqrt(static_cast<double>(shots)));
}

ImprovementPoint improvement_factor(double mass, double temperature, double fall_time,
                                    const ImprovementSetup& setup) {
  require(fall_time > 0, "improvement_factor: fall time must be > 0");
  const PipelineCore core{mass,          setup.omega,      temperature, setup.period,
                          setup.phase_amplitude, 0.5 * fall_time, 0.5 * fall_time};
  const FringePattern pattern = simulate_pipeline(core, setup.grid_points);
  const PhaseReadout readout = extract_phase(pattern, 2.0 * setup.period, setup.fit);

  ImprovementPoint p;
  p.mass = mass;
  p.temperature = temperature;
  p.fall_time = fall_time;
  p.contrast = readout.contrast;
  p.sigma_v = thermal_spreads(mass, setup.omega, temperature).sigma_p / mass;
  p.fringes = readout.fringes_detected;
  p.beta = p.fringes ? p.contrast * p.sigma_v * fall_time / setup.period : 0.0;
  return p;
}

BallisticComparison beta_sweep(const std::vector<double>& masses,
                               const std::vector<double>& temperatures, double fall_time,
                               const ImprovementSetup& setup, int jobs) {
  require(!masses.empty() && !temperatures.empty(), "beta_sweep: grids must be nonempty");
  BallisticComparison out{masses, temperatures, fall_time, {}};
  out.points.resize(masses.size() * temperatures.size());
  parallel_for(out.points.size(), jobs, [&](std::size_t k) {
    const std::size_t it = k / masses.size();
    const std::size_t im = k % masses.size();
    out.points[k] = improvement_factor(masses[im], temperatures[it], fall_time, setup);
  });
  return out;
}

PhaseNoiseEstimate monte_carlo_phase_noise(const FringePattern& pattern, double period,
                                           std::size_t shots, std::size_t repeats,
                                           std::uint64_t seed, std::size_t bins, int jobs) {
  require(shots >= 1 && repeats >= 2, "monte_carlo_phase_noise: need shots >= 1, repeats >= 2");
  const PhaseReadout reference = extract_phase(pattern, period);
  require(reference.fringes_detected, "monte_carlo_phase_noise: reference pattern has no fringes");

  std::vector<std::uint64_t> seeds(repeats);
  Rng stream(seed);
  for (auto& s : seeds) s = stream.next();

  PhaseNoiseEstimate out;
  out.shots = shots;
  out.repeats = repeats;
  out.contrast = reference.contrast;
  out.predicted = phase_resolution({shots, std::min(1.0, reference.contrast), 0.0});
  out.phases.assign(repeats, 0.0);
  parallel_for(repeats, jobs, [&](std::size_t r) {
    const auto positions = sample_positions(pattern, shots, seeds[r]);
    const FringePattern hist = histogram_pattern(positions, pattern, bins);
    out.phases[r] = wrap_phase(extract_phase(hist, period).phase - reference.phase);
  });

  double sum = 0;
  for (double p : out.phases) sum += p;
  out.mean_offset = sum / static_cast<double>(repeats);
  double ss = 0;
  for (double p : out.phases) ss += (p - out.mean_offset) * (p - out.mean_offset);
  out.phase_std = std::sqrt(ss / static_cast<double>(repeats - 1));
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::flag: return "FLAG";
    default: return "FAIL";
  }
}

BudgetReport error_budget(const BudgetConfig& c) {
  const DerivedSphere ds = derive(c.sphere, c.trap, c.grating);
  const double t0 = c.t0 > 0 ? c.t0 : ds.talbot_time;
  const double t1 = c.t1 > 0 ? c.t1 : ds.talbot_time;
  require(c.phase_resolution > 0, "error_budget: phase resolution must be > 0");
  const double a_min = min_detectable_accel(c.phase_resolution, t0, t1, c.grating.period);

  BudgetReport report;
  report.min_accel = a_min;
  WallGeometry wall = c.wall;
  wall.separation = c.separation;
  report.yukawa_signal = std::abs(differential_accel(wall, c.reference_signal).yukawa);

  // Vertical misalignment projects g onto the transverse axis.
  const double tilt_accel = constants::g * c.tilt;
  report.entries.push_back(
      {"alignment", c.tilt * 1e6, "ppm", alignment_threshold * 1e6, "ppm", tilt_accel, "m/s^2",
       tilt_accel > a_min ? Verdict::flag : Verdict::pass,
       "g*theta offset is common to both wall sections; shot-to-shot tilt jitter must stay "
       "below the threshold or it enters as phase noise"});

  // Mirror motion between grating pulse and detection shifts the fringes by
  // twice the grating displacement, i.e. 2 pi x / d of phase.
  const double bandwidth = 1.0 / (t0 + t1);
  const double phase_noise = 2.0 * pi * c.vibration_asd * std::sqrt(bandwidth) / c.grating.period;
  const double required_asd = c.phase_resolution * c.grating.period / (2.0 * pi * std::sqrt(bandwidth));
  report.entries.push_back(
      {"vibration", c.vibration_asd * 1e6, "um/sqrt(Hz)", vibration_threshold * 1e6,
       "um/sqrt(Hz)", phase_noise, "rad/shot",
       c.vibration_asd <= vibration_threshold ? Verdict::pass : Verdict::fail,
       "model requirement for per-shot phase noise below the target resolution: " +
           format_number(required_asd * 1e6) + " um/sqrt(Hz)"});

  const double wavelength = c.grating.laser_wavelength();
  const ScatteringEstimate scat = rayleigh_scattering(c.sphere, c.grating.intensity, wavelength);
  report.entries.push_back(
      {"decoherence", scat.decoherence_time, "s", c.grating.pulse_duration, "s",
       c.grating.pulse_duration * scat.rate, "scattered photons per pulse",
       scat.decoherence_time > 10.0 * c.grating.pulse_duration ? Verdict::pass : Verdict::fail,
       "Rayleigh scattering from the grating light; decoherence time is one scattering event"});

  const double patch = patch_accel_estimate(c.patch, ds, c.separation);
  report.entries.push_back(
      {"patch_potential", patch, "m/s^2", a_min, "m/s^2", patch, "m/s^2",
       patch > a_min ? Verdict::flag : Verdict::pass,
       "order-of-magnitude estimate; separable from the mass signal by its lack of the "
       "2 w_y periodicity in a y scan"});

  const double cp = casimir_polder_accel(ds, c.separation);
  report.entries.push_back({"casimir_polder", cp, "m/s^2", a_min, "m/s^2", cp, "m/s^2",
                            cp > a_min ? Verdict::flag : Verdict::pass,
                            "uniform coating makes this common to both sections"});
  return report;
}

std::string BudgetReport::to_json() const {
  nlohmann::ordered_json j;
  j["min_detectable_accel_m_s2"] = min_accel;
  j["yukawa_reference_signal_m_s2"] = yukawa_signal;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    j["entries"].push_back({{"name", e.name},
                            {"value", e.value},
                            {"unit", e.unit},
                            {"threshold", e.threshold},
                            {"threshold_unit", e.threshold_unit},
                            {"effect", e.effect},
                            {"effect_unit", e.effect_unit},
                            {"verdict", to_string(e.verdict)},
                            {"note", e.note}});
  }
  return j.dump(2);
}

std::string BudgetReport::to_text() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "a_min = %.3e m/s^2 (%.3e g), Yukawa reference signal %.3e m/s^2\n",
                min_accel, min_accel / constants::g, yukawa_signal);
  out << line;
  for (const auto& e : entries) {
    std::snprintf(line, sizeof line, "%-16s %-5s value %.3e %s | threshold %.3e %s | effect %.3e %s\n",
                  e.name.c_str(), to_string(e.verdict).c_str(), e.value, e.unit.c_str(),
                  e.threshold, e.threshold_unit.c_str(), e.effect, e.effect_unit.c_str());
    out << line << "    " << e.note << '\n';
  }
  return out.str();
}

}  // namespace nanotalbot

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "nanotalbot/error.hpp"
#include "nanotalbot/fringe_fit.hpp"
#include "nanotalbot/sampling.hpp"
#include "nanotalbot/sensitivity.hpp"
#include "nanotalbot/serialize.hpp"
#include "nanotalbot/wave_oracle.hpp"
#include "run_dir.hpp"
#include "svg.hpp"

namespace nanotalbot::cli {

namespace {

using json = nlohmann::ordered_json;
using constants::pi;

ExperimentConfig single_config(const GlobalOptions& g) {
  if (g.configs.size() != 1)
    throw ConfigError("this command takes exactly one --config file");
  return load_config(g.configs.front());
}

std::vector<std::string> path_strings(const GlobalOptions& g) {
  std::vector<std::string> out;
  for (const auto& p : g.configs) out.push_back(p.string());
  return out;
}

std::string csv_text(const CsvTable& t) {
  std::ostringstream o;
  write_csv(o, t);
  return o.str();
}

std::string pattern_text(const FringePattern& p) {
  std::ostringstream o;
  write_pattern_csv(o, p);
  return o.str();
}

json readout_json(const PhaseReadout& r) {
  return {{"phase_rad", r.phase},
          {"contrast", r.contrast},
          {"amplitude", r.amplitude},
          {"residual", r.residual},
          {"centroid_m", r.centroid},
          {"envelope_center_m", r.envelope_center},
          {"envelope_sigma_m", r.envelope_sigma},
          {"fringes_detected", r.fringes_detected},
          {"fit_accepted", r.fit_accepted}};
}

std::vector<double> scaled(const std::vector<double>& v, double f) {
  std::vector<double> out(v);
  for (auto& x : out) x *= f;
  return out;
}

Series pattern_series(const FringePattern& p, const std::string& label, bool dashed) {
  Series s{label, scaled(p.grid.points(), 1e6), scaled(p.density, 1e-6), dashed, false};
  return s;
}

char* fmt(char* buf, std::size_t n, const char* f, double v) {
  std::snprintf(buf, n, f, v);
  return buf;
}

FringePattern subsample(const FringePattern& p, std::size_t stride) {
  FringePattern out = p;
  out.grid = p.grid.strided(stride);
  out.density.clear();
  for (std::size_t i = 0; i < out.grid.count; ++i) out.density.push_back(p.density[i * stride]);
  return out;
}

}  // namespace

PipelineRequest pipeline_request(const ExperimentConfig& c, double acceleration) {
  PipelineRequest r;
  r.sphere = c.sphere;
  r.trap = c.trap;
  r.grating = c.grating;
  r.t0 = c.resolved_t0();
  r.t1 = c.resolved_t1();
  r.acceleration = acceleration;
  const double mass = sphere_mass(c.sphere);
  r.initial_momentum =
      c.initial_momentum_sigma * thermal_spreads(mass, c.trap.omega, c.trap.temperature).sigma_p;
  r.grid_points = c.grid_points;
  r.grid_half_width_sigmas = c.half_width_sigmas;
  return r;
}

ExclusionScenario exclusion_scenario(const ExperimentConfig& c) {
  ExclusionScenario s;
  s.name = c.name;
  s.sphere = c.sphere;
  s.trap = c.trap;
  s.grating = c.grating;
  s.wall = c.wall;
  s.phase_resolution = c.phase_resolution();
  s.t0 = c.t0;
  s.t1 = c.t1;
  s.y0 = c.y_offset;
  return s;
}

BudgetConfig budget_config(const ExperimentConfig& c) {
  BudgetConfig b;
  b.sphere = c.sphere;
  b.trap = c.trap;
  b.grating = c.grating;
  b.separation = c.wall.separation;
  b.t0 = c.t0;
  b.t1 = c.t1;
  b.phase_resolution = c.phase_resolution();
  b.tilt = c.tilt;
  b.vibration_asd = c.vibration_asd;
  b.patch = c.patch;
  b.reference_signal = c.yukawa;
  b.wall = c.wall;
  return b;
}

int cmd_fringe(const GlobalOptions& g, const FringeOptions& opts, std::ostream& log) {
  const ExperimentConfig c = single_config(g);
  const double period = c.grating.period;
  RunDirectory run(g.out, opts.compare ? "fringe --compare" : "fringe", path_strings(g),
                   c.content_hash, g.seed.value_or(c.seed));
  json summary;
  summary["a_pi_m_s2"] = a_pi(c.resolved_t0(), c.resolved_t1(), period);

  if (!opts.compare) {
    const FringePattern p = simulate_pipeline(pipeline_request(c, c.total_acceleration()));
    const PhaseReadout r = extract_phase(p, 2.0 * period);
    run.write("fringe.csv", pattern_text(p));
    run.write("fringe.json", pattern_metadata_json(p) + "\n");
    PlotSpec plot{"Fringe pattern W3(x)", "x [um]", "density [1/um]", false, false,
                  {pattern_series(p, "", false)}};
    run.write("fringe.svg", render_svg(plot));
    summary["readout"] = readout_json(r);
    log << "phase " << r.phase << " rad, contrast " << r.contrast << ", residual " << r.residual
        << '\n';
  } else {
    const double api = a_pi(c.resolved_t0(), c.resolved_t1(), period);
    const FringePattern p0 = simulate_pipeline(pipeline_request(c, 0.0));
    const FringePattern pp = simulate_pipeline(pipeline_request(c, api), p0.grid);
    const PhaseReadout r0 = extract_phase(p0, 2.0 * period);
    const PhaseReadout rp = extract_phase(pp, 2.0 * period);
    run.write("fringe_a0.csv", pattern_text(p0));
    run.write("fringe_a0.json", pattern_metadata_json(p0) + "\n");
    run.write("fringe_api.csv", pattern_text(pp));
    run.write("fringe_api.json", pattern_metadata_json(pp) + "\n");
    PlotSpec plot{"Fringe lineouts at t1 = T_T", "x [um]", "density [1/um]", false, false,
                  {pattern_series(p0, "a = 0", false), pattern_series(pp, "a = a_pi", true)}};
    run.write("fringe_compare.svg", render_svg(plot));
    const double dphi = wrap_phase(rp.phase - r0.phase);
    summary["readout_a0"] = readout_json(r0);
    summary["readout_api"] = readout_json(rp);
    summary["phase_difference_rad"] = dphi;
    log << "phase(a=0) " << r0.phase << " rad, phase(a_pi) " << rp.phase
        << " rad, difference " << dphi / pi << " pi\n";
  }
  run.write("summary.json", summary.dump(2) + "\n");
  run.finish();
  log << "wrote " << run.path().string() << '\n';
  return exit_ok;
}

int cmd_oracle_check(const GlobalOptions& g, std::ostream& log) {
  const ExperimentConfig c = single_config(g);
  if (c.trap.temperature != 0.0)
    throw ConfigError(c.path.string() + ": oracle-check needs trap.temperature_K = 0");
  RunDirectory run(g.out, "oracle-check", path_strings(g), c.content_hash,
                   g.seed.value_or(c.seed));
  const double period = c.grating.period;
  const double api = a_pi(c.resolved_t0(), c.resolved_t1(), period);
  const double tol_phase = c.oracle_phase_tolerance_pi * pi;

  json report;
  report["linf_tolerance"] = c.oracle_linf_tolerance;
  report["phase_tolerance_rad"] = tol_phase;
  bool ok = true;
  double phase_ps[2] = {0, 0}, phase_or[2] = {0, 0};
  const double accels[2] = {0.0, api};
  const char* tags[2] = {"a0", "api"};

  for (int k = 0; k < 2; ++k) {
    const PipelineRequest req = pipeline_request(c, accels[k]);
    OracleRequest oreq{c.sphere, c.trap, c.grating, req.t0, req.t1, accels[k],
                       req.initial_momentum, c.oracle_grid};
    FringePattern oracle;
    try {
      oracle = oracle_fringe(oreq);
    } catch (const std::exception& e) {
      log << "FAIL oracle did not converge (" << tags[k] << "): " << e.what() << '\n';
      report["diagnostic"] = e.what();
      report["verdict"] = "FAIL";
      run.write("oracle_check.json", report.dump(2) + "\n");
      run.finish();
      return exit_failure;
    }
    const std::size_t stride = oracle.grid.count > 8192 ? oracle.grid.count / 8192 : 1;
    const FringePattern osub = subsample(oracle, stride);
    const FringePattern ps = simulate_pipeline(req, osub.grid);

    double linf = 0;
    for (std::size_t i = 0; i < ps.density.size(); ++i)
      linf = std::max(linf, std::abs(ps.density[i] - osub.density[i]));
    const double rel = linf / ps.peak();
    phase_ps[k] = extract_phase(ps, 2.0 * period).phase;
    phase_or[k] = extract_phase(osub, 2.0 * period).phase;
    const double engine_gap = wrap_phase(phase_ps[k] - phase_or[k]);
    const bool pass = rel <= c.oracle_linf_tolerance && std::abs(engine_gap) <= tol_phase;
    ok = ok && pass;

    CsvTable t{{"x_m", "phase_space_per_m", "oracle_per_m"}, {}};
    for (std::size_t i = 0; i < ps.density.size(); ++i)
      t.rows.push_back({ps.grid.at(i), ps.density[i], osub.density[i]});
    run.write(std::string("oracle_") + tags[k] + ".csv", csv_text(t));
    report[tags[k]] = {{"acceleration_m_s2", accels[k]},
                       {"oracle_points", oracle.grid.count},
                       {"compared_points", osub.grid.count},
                       {"linf_over_peak", rel},
                       {"phase_space_phase_rad", phase_ps[k]},
                       {"oracle_phase_rad", phase_or[k]},
                       {"engine_phase_gap_rad", engine_gap},
                       {"verdict", pass ? "PASS" : "FAIL"}};
    log << (pass ? "PASS" : "FAIL") << ' ' << tags[k] << ": Linf/peak " << rel
        << ", engine phase gap " << engine_gap << " rad\n";
  }
  const double shift = wrap_phase(phase_or[1] - phase_or[0] - pi);
  const bool shift_ok = std::abs(shift) <= tol_phase;
  ok = ok && shift_ok;
  report["oracle_api_shift_error_rad"] = shift;
  report["verdict"] = ok ? "PASS" : "FAIL";
  log << (shift_ok ? "PASS" : "FAIL") << " a_pi shift: error " << shift / pi << " pi\n";
  run.write("oracle_check.json", report.dump(2) + "\n");
  run.finish();
  log << "wrote " << run.path().string() << '\n';
  return ok ? exit_ok : exit_failure;
}

int cmd_exclusion(const GlobalOptions& g, std::ostream& log) {
  if (g.configs.empty()) throw ConfigError("exclusion needs at least one --config file");
  std::vector<ExperimentConfig> configs;
  std::string joint;
  for (const auto& p : g.configs) {
    configs.push_back(load_config(p));
    if (configs.back().lambdas.empty())
      throw ConfigError(p.string() + ": yukawa lambda grid is empty or missing");
    joint += configs.back().content_hash;
  }
  const std::string hash = configs.size() == 1 ? joint : fnv1a_hex(joint);
  RunDirectory run(g.out, "exclusion", path_strings(g), hash,
                   g.seed.value_or(configs.front().seed));

  PlotSpec plot{"Yukawa exclusion (alpha_min at SNR 1)", "lambda [um]", "alpha_min", true, true,
                {}};
  json meta = json::array();
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const ExperimentConfig& c = configs[k];
    const ExclusionScenario sc = exclusion_scenario(c);
    const ExclusionCurve curve = exclusion_curve(sc, c.lambdas, g.jobs);
    std::string name = c.name;
    for (std::size_t j = 0; j < k; ++j)
      if (configs[j].name == c.name) name += "_" + std::to_string(k);

    CsvTable t{{"lambda_m", "alpha_min", "signal_per_alpha_m_s2"}, {}};
    for (std::size_t i = 0; i < curve.ranges.size(); ++i)
      t.rows.push_back({curve.ranges[i], curve.alpha_min[i], curve.signal_per_alpha[i]});
    run.write("exclusion_" + name + ".csv", csv_text(t));
    plot.series.push_back({name, scaled(curve.ranges, 1e6), curve.alpha_min, k % 2 == 1, false});

    const double t0 = sc.resolved_t0(), t1 = sc.resolved_t1();
    meta.push_back({{"name", name},
                    {"config_hash", curve.config_hash},
                    {"separation_m", c.wall.separation},
                    {"phase_resolution_rad", sc.phase_resolution},
                    {"t0_s", t0},
                    {"t1_s", t1},
                    {"min_accel_m_s2", curve.min_accel},
                    {"min_accel_g", curve.min_accel / constants::g},
                    {"min_accel_a_pi", curve.min_accel / a_pi(t0, t1, c.grating.period)}});
    log << name << ": a_min " << curve.min_accel << " m/s^2, " << curve.ranges.size()
        << " lambda points\n";
  }
  run.write("exclusion.json", meta.dump(2) + "\n");
  run.write("exclusion.svg", render_svg(plot));
  run.finish();
  log << "wrote " << run.path().string() << '\n';
  return exit_ok;
}

int cmd_beta(const GlobalOptions& g, std::ostream& log) {
  const ExperimentConfig c = single_config(g);
  RunDirectory run(g.out, "beta", path_strings(g), c.content_hash, g.seed.value_or(c.seed));
  const DerivedSphere ds = c.derived();
  const double phi0 = eikonal_phase_amplitude(ds.polarizability, c.grating.intensity,
                                              c.grating.pulse_duration);
  const ImprovementSetup setup{c.grating.period, phi0, c.trap.omega, c.grid_points, {}};
  const std::vector<double> masses = scaled(c.masses_m0, ds.mass);
  const BallisticComparison b = beta_sweep(masses, c.temperatures, c.fall_time, setup, g.jobs);

  CsvTable t{{"mass_kg", "mass_M0", "temperature_K", "mean_occupation", "contrast",
              "sigma_v_m_s", "beta", "fringes"},
             {}};
  PlotSpec plot{"Improvement factor beta, t = " + format_number(c.fall_time) + " s",
                "M / M0", "beta", true, false, {}};
  for (std::size_t it = 0; it < c.temperatures.size(); ++it) {
    Series s;
    char buf[64];
    const double T = c.temperatures[it];
    const double nbar = mean_occupation(c.trap.omega, T);
    s.label = T == 0 ? std::string("T = 0") : std::string(fmt(buf, sizeof buf, "T = %.3g K", T));
    s.dashed = it % 2 == 1;
    s.markers = true;
    for (std::size_t im = 0; im < masses.size(); ++im) {
      const ImprovementPoint& p = b.at(it, im);
      t.rows.push_back({p.mass, c.masses_m0[im], T, nbar, p.contrast, p.sigma_v, p.beta,
                        p.fringes ? 1.0 : 0.0});
      s.x.push_back(c.masses_m0[im]);
      s.y.push_back(p.beta);
    }
    plot.series.push_back(std::move(s));
  }
  run.write("beta.csv", csv_text(t));
  run.write("beta.svg", render_svg(plot));
  run.finish();
  log << "wrote " << t.rows.size() << " beta rows to " << run.path().string() << '\n';
  return exit_ok;
}

int cmd_forces(const GlobalOptions& g, std::ostream& log) {
  const ExperimentConfig c = single_config(g);
  RunDirectory run(g.out, "forces", path_strings(g), c.content_hash, g.seed.value_or(c.seed));
  const DerivedSphere ds = c.derived();

  CsvTable cp{{"separation_m", "accel_m_s2", "accel_g"}, {}};
  Series cps{"Casimir-Polder", {}, {}, false, true};
  for (double s : c.cp_separations) {
    const double a = casimir_polder_accel(ds, s);
    cp.rows.push_back({s, a, a / constants::g});
    cps.x.push_back(s * 1e6);
    cps.y.push_back(a);
  }
  run.write("casimir_polder.csv", csv_text(cp));
  run.write("casimir_polder.svg", render_svg({"Casimir-Polder acceleration", "separation [um]",
                                              "a [m/s^2]", true, true, {cps}}));

  const auto scan = scan_y(c.wall, c.yukawa, c.y_scan, g.jobs);
  CsvTable ys{{"y_m", "a_x_m_per_s2"}, {}};
  Series yss{"alpha = " + format_number(c.yukawa.alpha), {}, {}, false, false};
  for (const auto& p : scan) {
    ys.rows.push_back({p.y, p.accel});
    yss.x.push_back(p.y * 1e6);
    yss.y.push_back(p.accel);
  }
  run.write("y_scan.csv", csv_text(ys));
  run.write("y_scan.svg", render_svg({"Wall attraction along y", "y [um]", "a_x [m/s^2]", false,
                                      false, {yss}}));

  const DifferentialSignal d = differential_accel(c.wall, c.yukawa, c.y_offset);
  json diff{{"alpha", c.yukawa.alpha},
            {"lambda_m", c.yukawa.range},
            {"y0_m", c.y_offset},
            {"newtonian_m_s2", d.newtonian},
            {"yukawa_m_s2", d.yukawa},
            {"coating_m_s2", d.coating},
            {"total_m_s2", d.total()}};
  run.write("differential.json", diff.dump(2) + "\n");

  const BudgetReport report = error_budget(budget_config(c));
  run.write("budget.json", report.to_json() + "\n");
  run.write("budget.txt", report.to_text());
  run.finish();
  log << report.to_text() << "wrote " << run.path().string() << '\n';
  return exit_ok;
}

int cmd_shots(const GlobalOptions& g, const ShotsOptions& opts, std::ostream& log) {
  const ExperimentConfig c = single_config(g);
  const std::uint64_t seed = g.seed.value_or(c.seed);
  RunDirectory run(g.out, "shots", path_strings(g), c.content_hash, seed);
  const std::size_t n = opts.shots.value_or(c.shot_count);
  const std::size_t repeats = opts.repeats.value_or(c.repeats);
  if (n == 0) throw ConfigError("--shots must be >= 1");
  if (repeats < 2) throw ConfigError("--repeats must be >= 2");
  const double period = 2.0 * c.grating.period;

  const FringePattern pattern = simulate_pipeline(pipeline_request(c, c.total_acceleration()));
  Rng stream(seed);
  const auto positions = sample_positions(pattern, n, stream.next());
  {
    std::ostringstream o;
    o << "x_m\r\n";
    for (double x : positions) o << format_number(x) << "\r\n";
    run.write("positions.csv", o.str());
  }
  const FringePattern hist = histogram_pattern(positions, pattern, c.bins);
  run.write("histogram.csv", pattern_text(hist));
  const PhaseReadout reference = extract_phase(pattern, period);
  const PhaseReadout fit = extract_phase(hist, period);

  std::vector<std::size_t> counts = c.scaling_counts;
  if (counts.empty()) counts.push_back(n);
  CsvTable t{{"shots", "repeats", "phase_std_rad", "predicted_rad", "ratio", "std_sqrt_shots"},
             {}};
  Series measured{"Monte Carlo", {}, {}, false, true};
  Series predicted{"pi / (chi sqrt N)", {}, {}, true, false};
  for (std::size_t k : counts) {
    const PhaseNoiseEstimate e =
        monte_carlo_phase_noise(pattern, period, k, repeats, stream.next(), c.bins, g.jobs);
    const double root = std::sqrt(static_cast<double>(k));
    t.rows.push_back({static_cast<double>(k), static_cast<double>(repeats), e.phase_std,
                      e.predicted, e.phase_std / e.predicted, e.phase_std * root});
    measured.x.push_back(static_cast<double>(k));
    measured.y.push_back(e.phase_std);
    predicted.x.push_back(static_cast<double>(k));
    predicted.y.push_back(e.predicted);
    log << "N = " << k << ": phase std " << e.phase_std << " rad, predicted " << e.predicted
        << " rad\n";
  }
  run.write("shots_scaling.csv", csv_text(t));
  run.write("shots_scaling.svg", render_svg({"Phase uncertainty vs shot count", "shots N",
                                             "phase std [rad]", true, true,
                                             {measured, predicted}}));
  json summary{{"shots", n},
               {"fit", readout_json(fit)},
               {"reference", readout_json(reference)},
               {"phase_offset_rad", wrap_phase(fit.phase - reference.phase)},
               {"predicted_resolution_rad",
                phase_resolution({n, std::min(1.0, reference.contrast), 0.0})}};
  run.write("shots.json", summary.dump(2) + "\n");
  run.finish();
  log << "wrote " << run.path().string() << '\n';
  return exit_ok;
}

}  // namespace nanotalbot::cli

// Acceptance checks. Each criterion prints one "[PASS]" or "[FAIL]" line with
// the measured numbers; the exit status is nonzero if any selected check fails.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli_run.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "nanotalbot/forces.hpp"
#include "nanotalbot/fringe_fit.hpp"
#include "nanotalbot/phase_space.hpp"
#include "nanotalbot/sensitivity.hpp"
#include "nanotalbot/wave_oracle.hpp"

using namespace nanotalbot;
using constants::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const SphereSpec table1_sphere{6.5e-9, 2300.0, 2.0};
const TrapSpec table1_trap{2 * pi * 100, 0.0};
const GratingSpec table1_grating{0.25e-6, 55e3, 1e-6};

int jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

bool within_rel(double value, double target, double tol) {
  return std::abs(value - target) <= tol * std::abs(target);
}

bool within_factor(double value, double target, double factor) {
  return value >= target / factor && value <= target * factor;
}

PipelineRequest table1_request(double a = 0, double p0 = 0) {
  const double tt = derive(table1_sphere, table1_trap, table1_grating).talbot_time;
  PipelineRequest r{table1_sphere, table1_trap, table1_grating, tt, tt, a, p0};
  return r;
}

cli::ExperimentConfig preset(const char* name) {
  return cli::load_config(fs::path(NANOTALBOT_PRESET_DIR) / name);
}

Outcome criterion1() {
  const DerivedSphere d = derive(table1_sphere, table1_trap, table1_grating);
  const double phi0 = eikonal_phase_amplitude(d.polarizability, 55e3, 1e-6);
  const bool ok = within_rel(d.sigma_x, 6e-9, 0.10) && within_rel(d.talbot_time, 0.25, 0.02) &&
                  within_rel(phi0, 1.5, 0.05);
  return {ok, "sigma_x " + num(d.sigma_x) + " m (6e-9 +-10%), T_T " + num(d.talbot_time) +
                  " s (0.25 +-2%), phi0 " + num(phi0) + " (1.5 +-5%)"};
}

Outcome criterion2() {
  const PipelineRequest r0 = table1_request();
  const double api = a_pi(r0.t0, r0.t1, table1_grating.period);
  const FringePattern p0 = simulate_pipeline(r0);
  const FringePattern pp = simulate_pipeline(table1_request(api), p0.grid);
  const double d = 2 * table1_grating.period;
  const double dphi = wrap_phase(extract_phase(pp, d).phase - extract_phase(p0, d).phase);
  // pi and -pi are the same shift
  const double err = std::abs(std::abs(dphi) - pi);
  return {err <= 0.01 * pi, "phase difference " + num(dphi / pi) + " pi (pi +-1%)"};
}

Outcome criterion3() {
  const PipelineRequest r0 = table1_request();
  const double api = a_pi(r0.t0, r0.t1, table1_grating.period);
  double worst = 0;
  std::size_t compared = 0;
  for (double a : {0.0, api}) {
    const PipelineRequest req = table1_request(a);
    const OracleRequest oreq{table1_sphere, table1_trap, table1_grating, req.t0, req.t1, a, 0.0,
                             {}};
    const FringePattern oracle = oracle_fringe(oreq);
    const std::size_t stride = std::max<std::size_t>(1, oracle.grid.count / 8192);
    const SampleGrid sub = oracle.grid.strided(stride);
    const FringePattern ps = simulate_pipeline(req, sub);
    double linf = 0;
    for (std::size_t i = 0; i < sub.count; ++i)
      linf = std::max(linf, std::abs(ps.density[i] - oracle.density[i * stride]));
    worst = std::max(worst, linf / ps.peak());
    compared = sub.count;
  }
  return {worst <= 1e-4 && compared == 8192,
          "max Linf/peak " + num(worst) + " over a in {0, a_pi} on " + std::to_string(compared) +
              " points (<= 1e-4)"};
}

Outcome criterion4() {
  const FringePattern p = simulate_pipeline(table1_request());
  const double d = table1_grating.period;
  const std::size_t n = p.density.size();
  const double span = p.grid.spacing * static_cast<double>(n);
  const double df = 1.0 / span;
  double mean = 0;
  for (double v : p.density) mean += v;
  mean /= static_cast<double>(n);
  double best_f = 0, best_power = -1;
  // DFT bins above the envelope band, up to 4/d
  for (std::size_t k = static_cast<std::size_t>(std::ceil(1.0 / (4 * d) / df));
       k * df <= 4.0 / d; ++k) {
    std::complex<double> s = 0;
    const double w = 2 * pi * static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
      s += (p.density[i] - mean) * std::polar(1.0, -w * static_cast<double>(i));
    if (std::norm(s) > best_power) {
      best_power = std::norm(s);
      best_f = static_cast<double>(k) * df;
    }
  }
  const double target = 1.0 / (2 * d);
  return {std::abs(best_f - target) <= df,
          "dominant frequency " + num(best_f) + " 1/m, expected 1/(2d) = " + num(target) +
              " (bin width " + num(df) + ")"};
}

Outcome criterion5() {
  const DerivedSphere ds = derive(table1_sphere, table1_trap, table1_grating);
  const double sigma_p = thermal_spreads(ds.mass, table1_trap.omega, 0.0).sigma_p;
  const double d = 2 * table1_grating.period;
  const double ref = extract_phase(simulate_pipeline(table1_request()), d).phase;
  double worst = 0;
  for (int k = -5; k <= 5; ++k) {
    if (k == 0) continue;
    const double ph = extract_phase(simulate_pipeline(table1_request(0, k * sigma_p)), d).phase;
    worst = std::max(worst, std::abs(wrap_phase(ph - ref)));
  }
  return {worst < 1e-3, "max phase change " + num(worst) + " rad over p0 in [-5, 5] sigma_p (< 1e-3)"};
}

Outcome criterion6() {
  const PipelineRequest r0 = table1_request();
  const double api = a_pi(r0.t0, r0.t1, table1_grating.period);
  const FringePattern base = simulate_pipeline(r0);
  const double d = 2 * table1_grating.period;
  const int n = 21;
  std::vector<double> a(n), phi(n);
  for (int i = 0; i < n; ++i) {
    a[i] = api * (-1.0 + 2.0 * i / (n - 1));
    phi[i] = extract_phase(simulate_pipeline(table1_request(a[i]), base.grid), d).phase;
    if (i > 0) phi[i] = phi[i - 1] + wrap_phase(phi[i] - phi[i - 1]);
  }
  double ma = 0, mp = 0;
  for (int i = 0; i < n; ++i) {
    ma += a[i] / n;
    mp += phi[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (int i = 0; i < n; ++i) {
    sxy += (a[i] - ma) * (phi[i] - mp);
    sxx += (a[i] - ma) * (a[i] - ma);
  }
  const double slope = sxy / sxx;
  const double expected = phase_prediction(1.0, r0.t0, r0.t1, table1_grating.period);
  // the sign depends only on the phase convention
  return {within_rel(std::abs(slope), expected, 0.01),
          "slope " + num(slope) + " rad s^2/m, expected magnitude " + num(expected) + " (1%)"};
}

Outcome criterion7() {
  const DerivedSphere b = derive(table1_sphere, table1_trap, table1_grating);
  const double cp = casimir_polder_accel(b, 10e-6);
  const SphereSpec small{5e-9, 2300.0, 2.0};
  const DerivedSphere a = derive(small, table1_trap, table1_grating);
  const double phase = phase_prediction(casimir_polder_accel(a, 6e-6), a.talbot_time,
                                        a.talbot_time, table1_grating.period);
  const double target = 4e-7 * constants::g;
  return {within_rel(cp, target, 0.10) && within_rel(phase, 3 * pi, 0.30),
          "a_CP(6.5 nm, 10 um) " + num(cp / constants::g) + " g (4e-7 g +-10%), phase(5 nm, 6 um) " +
              num(phase / pi) + " pi (3 pi +-30%)"};
}

Outcome criterion8() {
  const double s = 10e-6, t = 20e-6, rho = materials::gold_density;
  double worst = 0;
  std::string parts;
  for (double lambda : {1e-6, 5e-6, 25e-6}) {
    const YukawaParams yk{1.0, lambda};
    const double half = 1.0;  // far beyond any e-folding reach
    const Box box{s, s + t, -half, half, -half, half};
    const double q = yukawa_accel_box(box, rho, yk, {0, 0, 0});
    const double slab = yukawa_accel_slab_inf(rho, yk, s, t);
    const double rel = std::abs(q - slab) / std::abs(slab);
    worst = std::max(worst, rel);
    parts += " " + num(rel);
  }
  return {worst <= 1e-3, "relative deviation at lambda = 1, 5, 25 um:" + parts + " (<= 1e-3)"};
}

Outcome criterion9() {
  const auto a_cfg = preset("curveA.toml");
  const auto b_cfg = preset("curveB.toml");
  std::vector<double> ranges = b_cfg.lambdas;
  ranges.push_back(5e-6);
  std::sort(ranges.begin(), ranges.end());
  ranges.erase(std::unique(ranges.begin(), ranges.end()), ranges.end());
  const ExclusionCurve ca = exclusion_curve(cli::exclusion_scenario(a_cfg), ranges, jobs());
  const ExclusionCurve cb = exclusion_curve(cli::exclusion_scenario(b_cfg), ranges, jobs());
  double alpha5 = 0;
  bool below = true;
  double worst_ratio = 0;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (ranges[i] == 5e-6) alpha5 = cb.alpha_min[i];
    if (ranges[i] <= 4e-6 * (1 + 1e-12)) {
      worst_ratio = std::max(worst_ratio, ca.alpha_min[i] / cb.alpha_min[i]);
      below = below && ca.alpha_min[i] < cb.alpha_min[i];
    }
  }
  const bool anchor = within_factor(alpha5, 400.0, 3.0);
  return {anchor && below, "curve B alpha_min(5 um) " + num(alpha5) +
                               " (400 within x3: " + (anchor ? "yes" : "no") +
                               "), max A/B ratio for lambda <= 4 um " + num(worst_ratio) +
                               " (< 1: " + (below ? "yes" : "no") + ")"};
}

Outcome criterion10() {
  const FringePattern p = simulate_pipeline(table1_request());
  const std::size_t counts[3] = {1000, 10000, 100000};
  double stds[3] = {0, 0, 0}, predicted = 0;
  for (int k = 0; k < 3; ++k) {
    const PhaseNoiseEstimate e =
        monte_carlo_phase_noise(p, 2 * table1_grating.period, counts[k], 100, 2024, 1024, jobs());
    stds[k] = e.phase_std;
    predicted = e.predicted;
  }
  const double root10 = std::sqrt(10.0);
  const double r1 = stds[0] / stds[1], r2 = stds[1] / stds[2];
  const bool level = within_rel(stds[2], predicted, 0.20);
  const bool scaling = within_rel(r1, root10, 0.20) && within_rel(r2, root10, 0.20);
  return {level && scaling,
          "N=1e5 std " + num(stds[2]) + " rad vs pi/(chi sqrt N) " + num(predicted) + " (ratio " +
              num(stds[2] / predicted) + ", need 0.8..1.2); scaling ratios " + num(r1) + ", " +
              num(r2) + " vs " + num(root10) + " (+-20%)"};
}

Outcome criterion11() {
  const auto c = preset("fig4.toml");
  const DerivedSphere ds = c.derived();
  const double phi0 = eikonal_phase_amplitude(ds.polarizability, c.grating.intensity,
                                              c.grating.pulse_duration);
  const ImprovementSetup setup{c.grating.period, phi0, c.trap.omega, c.grid_points, {}};
  std::vector<double> masses;
  for (double m : c.masses_m0) masses.push_back(m * ds.mass);
  const BallisticComparison b = beta_sweep(masses, c.temperatures, c.fall_time, setup, jobs());
  const std::size_t nm = masses.size();
  const std::size_t i_m0 = static_cast<std::size_t>(
      std::min_element(c.masses_m0.begin(), c.masses_m0.end(),
                       [](double x, double y) { return std::abs(std::log(x)) < std::abs(std::log(y)); }) -
      c.masses_m0.begin());

  std::ostringstream msg;
  bool ok = true;
  double peak_mass_prev = 0;
  for (std::size_t it = 0; it < c.temperatures.size(); ++it) {
    const double T = c.temperatures[it];
    if (T == 0) {
      const double b0 = b.at(it, i_m0).beta, bmax = b.at(it, nm - 1).beta;
      const bool good = b0 > 1 && bmax < 0.05 * b0;
      ok = ok && good;
      msg << "T=0: beta(M0) " << num(b0) << ", beta(" << num(c.masses_m0.back()) << " M0) "
          << num(bmax) << (good ? "" : " [bad]") << "; ";
      continue;
    }
    std::size_t ip = 0;
    for (std::size_t im = 0; im < nm; ++im)
      if (b.at(it, im).beta > b.at(it, ip).beta) ip = im;
    const double peak = b.at(it, ip).beta;
    const bool shape = ip > 0 && ip + 1 < nm && b.at(it, 0).beta < 0.5 * peak &&
                       b.at(it, nm - 1).beta < 0.5 * peak;
    const double pm = c.masses_m0[ip];
    const bool order = pm >= peak_mass_prev;
    peak_mass_prev = pm;
    ok = ok && shape && order;
    msg << "T=" << num(T) << " K (n " << num(mean_occupation(c.trap.omega, T)) << "): peak "
        << num(peak) << " at " << num(pm) << " M0" << (shape ? "" : " [no rise-peak-fall]")
        << (order ? "" : " [peak mass decreased]") << "; ";
  }
  return {ok, msg.str()};
}

Outcome criterion12() {
  const BudgetReport r = error_budget(cli::budget_config(preset("table1.toml")));
  const BudgetEntry* dec = nullptr;
  const BudgetEntry* patch = nullptr;
  const BudgetEntry* align = nullptr;
  const BudgetEntry* vib = nullptr;
  for (const auto& e : r.entries) {
    if (e.name == "decoherence") dec = &e;
    if (e.name == "patch_potential") patch = &e;
    if (e.name == "alignment") align = &e;
    if (e.name == "vibration") vib = &e;
  }
  if (!dec || !patch || !align || !vib) return {false, "budget is missing entries"};
  const bool dec_ok = within_factor(dec->value, 1e-3, 5.0);
  const bool patch_ok = within_factor(patch->value, 1e-7 * constants::g, 10.0);
  const bool align_ok = std::abs(align->threshold - 0.5) < 1e-12 && align->threshold_unit == "ppm";
  const bool vib_ok =
      std::abs(vib->threshold - 1e-3) < 1e-15 && vib->threshold_unit == "um/sqrt(Hz)";
  return {dec_ok && patch_ok && align_ok && vib_ok,
          "decoherence " + num(dec->value) + " s (1 ms x/5: " + (dec_ok ? "yes" : "no") +
              "), patch " + num(patch->value / constants::g) + " g (1e-7 g x/10: " +
              (patch_ok ? "yes" : "no") + "), alignment threshold " + num(align->threshold) + " " +
              align->threshold_unit + ", vibration threshold " + num(vib->threshold) + " " +
              vib->threshold_unit};
}

Outcome criterion13() {
  using namespace test_support;
  const fs::path work = scratch_dir("determinism");
  const fs::path cfg = work / "config.toml";
  write_file(cfg, small_config());
  const std::string base = "--config " + quote(cfg.string()) + " --jobs " +
                           std::to_string(jobs()) + " --seed 5 ";
  const char* verbs[] = {"fringe", "fringe --compare", "oracle-check", "exclusion",
                         "beta",   "forces",           "shots"};
  std::size_t files = 0;
  std::string bad;
  for (const char* v : verbs) {
    const CliResult a = run_cli(NANOTALBOT_CLI_PATH, base + v, work);
    const CliResult b = run_cli(NANOTALBOT_CLI_PATH, base + v, work);
    if (a.exit_code != 0 || b.exit_code != 0 || a.run_dir.empty()) {
      bad += std::string(" ") + v + "(exit " + std::to_string(a.exit_code) + ")";
      continue;
    }
    std::size_t here = 0;
    for (const auto& e : fs::directory_iterator(a.run_dir)) {
      if (e.path().extension() != ".csv") continue;
      ++here;
      const fs::path other = b.run_dir / e.path().filename();
      if (!fs::exists(other) || slurp(e.path()) != slurp(other))
        bad += " " + e.path().filename().string();
    }
    if (here == 0) bad += std::string(" ") + v + "(no csv)";
    files += here;
  }
  std::error_code ec;
  fs::remove_all(work, ec);
  return {bad.empty(), std::to_string(files) + " CSV files compared across " +
                           std::to_string(std::size(verbs)) + " commands" +
                           (bad.empty() ? ", all byte-identical" : "; mismatches:" + bad)};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
    {"reference parameter consistency", criterion1},
    {"a_pi phase identity", criterion2},
    {"oracle equivalence", criterion3},
    {"fringe doubling", criterion4},
    {"momentum-kick invariance", criterion5},
    {"phase linearity", criterion6},
    {"Casimir-Polder anchors", criterion7},
    {"Yukawa quadrature vs slab", criterion8},
    {"exclusion anchor", criterion9},
    {"shot-noise law", criterion10},
    {"improvement factor properties", criterion11},
    {"systematics report", criterion12},
    {"CLI determinism", criterion13},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nanotalbot acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-13); default runs all")
      ->check(CLI::Range(1, static_cast<int>(criteria.size())));
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << " ("
              << criteria[i].first << "): " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

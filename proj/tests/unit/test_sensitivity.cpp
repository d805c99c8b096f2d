#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "nanotalbot/error.hpp"
#include "nanotalbot/phase_space.hpp"
#include "nanotalbot/sensitivity.hpp"

using namespace nanotalbot;
using constants::pi;
using doctest::Approx;

namespace {

const SphereSpec sphere{6.5e-9, 2300.0, 2.0};
const TrapSpec ground{2 * pi * 100, 0.0};
const GratingSpec grating{0.25e-6, 55e3, 1e-6};

ExclusionScenario scenario_b() {
  ExclusionScenario s;
  s.name = "B";
  s.sphere = sphere;
  s.trap = ground;
  s.grating = grating;
  s.wall = WallGeometry::gold_silicon(10e-6);
  s.phase_resolution = pi / 300;
  return s;
}

ImprovementSetup setup() {
  const DerivedSphere d = derive(sphere, ground, grating);
  return {grating.period, eikonal_phase_amplitude(d.polarizability, 55e3, 1e-6), ground.omega};
}

}  // namespace

TEST_SUITE("sensitivity") {
  TEST_CASE("phase resolution") {
    CHECK(phase_resolution({100000, 1.0}) == Approx(pi / 300).epsilon(0.10));
    CHECK(phase_resolution({100000, 1.0}) == Approx(pi / std::sqrt(1e5)).epsilon(1e-15));
    CHECK(phase_resolution({400, 1.0}) == Approx(phase_resolution({100, 1.0}) / 2).epsilon(1e-15));
    CHECK(phase_resolution({100, 0.5}) == Approx(2 * phase_resolution({100, 1.0})).epsilon(1e-15));
    const double with_noise = phase_resolution({100, 1.0, 1e-12}, 0.5e-6);
    CHECK(with_noise == Approx(std::hypot(pi / 10, pi / 0.5e-6 * 1e-12 / 10)).epsilon(1e-14));
    CHECK(phase_resolution({100, 1.0, 1e-12}) == phase_resolution({100, 1.0}));
    CHECK_THROWS_AS(phase_resolution({0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(phase_resolution({10, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(phase_resolution({10, 1.5}), InvalidArgument);
  }

  TEST_CASE("minimum detectable acceleration") {
    CHECK(min_detectable_accel(pi, 0.25, 0.25, 0.25e-6) == Approx(4e-6).epsilon(1e-14));
    const double tt = derive(sphere, ground, grating).talbot_time;
    CHECK(min_detectable_accel(pi / 300, tt, tt, 0.25e-6) == Approx(1.3e-8).epsilon(0.5));
    CHECK(min_detectable_accel(0.0, tt, tt, 0.25e-6) == 0.0);
    CHECK_THROWS_AS(min_detectable_accel(pi, 0.0, 0.25, 0.25e-6), InvalidArgument);
  }

  TEST_CASE("exclusion curve basics") {
    const std::vector<double> lambdas{1e-6, 2e-6, 5e-6, 20e-6};
    const auto c = exclusion_curve(scenario_b(), lambdas, 2);
    REQUIRE(c.alpha_min.size() == lambdas.size());
    for (double a : c.alpha_min) {
      CHECK(a > 0);
      CHECK(std::isfinite(a));
    }
    // diverges toward small lambda
    for (std::size_t i = 1; i < lambdas.size(); ++i) CHECK(c.alpha_min[i - 1] > c.alpha_min[i]);
    CHECK(c.alpha_min[0] > 1e3 * c.alpha_min[2]);
    CHECK(c.min_accel == Approx(min_detectable_accel(pi / 300, c.min_accel > 0 ? derive(sphere, ground, grating).talbot_time : 0, derive(sphere, ground, grating).talbot_time, 0.25e-6)).epsilon(1e-14));
    CHECK(c.config_hash.size() == 16);
    // jobs do not change the result
    const auto serial = exclusion_curve(scenario_b(), lambdas, 1);
    CHECK(serial.alpha_min == c.alpha_min);
  }

  TEST_CASE("exclusion linearity") {
    const std::vector<double> lambdas{2e-6, 5e-6, 12e-6};
    ExclusionScenario doubled = scenario_b();
    doubled.wall.density_a *= 2;
    doubled.wall.density_b *= 2;
    doubled.wall.coating_density *= 2;
    const auto base = exclusion_curve(scenario_b(), lambdas);
    const auto twice = exclusion_curve(doubled, lambdas);
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      CHECK(twice.alpha_min[i] == Approx(base.alpha_min[i] / 2).epsilon(1e-12));
  }

  TEST_CASE("degenerate wall is an error") {
    ExclusionScenario s = scenario_b();
    s.wall.density_b = s.wall.density_a;
    CHECK_THROWS_AS(exclusion_curve(s, {5e-6}), NumericalError);
    CHECK_THROWS_AS(exclusion_curve(scenario_b(), {}), InvalidArgument);
  }

  TEST_CASE("ballistic spreads") {
    const DerivedSphere d = derive(sphere, ground, grating);
    CHECK(ballistic_sigma_v(d.mass, ground.omega) == Approx(3.5e-6).epsilon(0.02));
    CHECK(ballistic_sigma_v(d.mass, ground.omega) == Approx(ground.omega * d.sigma_x).epsilon(1e-14));
    const double m100 = sphere_mass({100e-9, 2300, 2});
    CHECK(m100 == Approx(9.6e-18).epsilon(0.01));
    CHECK(ballistic_sigma_v(m100, ground.omega) == Approx(5.8e-8).epsilon(0.02));
  }

  TEST_CASE("ballistic acceleration resolution") {
    const double sv = ballistic_sigma_v(sphere_mass({100e-9, 2300, 2}), ground.omega);
    const double a = ballistic_accel_resolution(sv, 0.5, 100000);
    CHECK(a > 1.5e-10);
    CHECK(a < 1.5e-8);
    CHECK(a == Approx(1.5e-9).epsilon(0.5));
    CHECK(ballistic_accel_resolution(sv, 0.5, 400000) == Approx(a / 2).epsilon(1e-14));
    CHECK(ballistic_accel_resolution(sv, 1.0, 100000) == Approx(a / 2).epsilon(1e-14));
  }

  TEST_CASE("improvement factor") {
    const DerivedSphere d = derive(sphere, ground, grating);
    const auto p = improvement_factor(d.mass, 0.0, 0.5, setup());
    CHECK(p.fringes);
    CHECK(p.beta > 1.0);
    CHECK(p.beta == Approx(p.contrast * p.sigma_v * 0.5 / grating.period).epsilon(1e-14));
    CHECK(p.beta == Approx(7.06).epsilon(0.02));
    const auto heavy = improvement_factor(256 * d.mass, 0.0, 0.5, setup());
    CHECK(heavy.beta < 0.02 * p.beta);
    CHECK_THROWS_AS(improvement_factor(d.mass, 0.0, 0.0, setup()), InvalidArgument);
  }

  TEST_CASE("beta sweep shape and determinism") {
    const DerivedSphere d = derive(sphere, ground, grating);
    const auto single = beta_sweep({d.mass}, {0.0}, 0.5, setup());
    REQUIRE(single.points.size() == 1);
    CHECK(single.points[0].beta == improvement_factor(d.mass, 0.0, 0.5, setup()).beta);

    const std::vector<double> masses{d.mass, 2 * d.mass, 4 * d.mass};
    const std::vector<double> temps{0.0, 1e-6};
    const auto a = beta_sweep(masses, temps, 0.5, setup(), 1);
    const auto b = beta_sweep(masses, temps, 0.5, setup(), 3);
    CHECK(a.points.size() == masses.size() * temps.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      CHECK(a.points[i].beta == b.points[i].beta);
      CHECK(a.points[i].beta >= 0);
    }
    CHECK(a.at(1, 2).temperature == 1e-6);
    CHECK(a.at(1, 2).mass == 4 * d.mass);
  }

  TEST_CASE("beta is zero when contrast vanishes") {
    const DerivedSphere d = derive(sphere, ground, grating);
    // half-Talbot fall: the 2d fringes cancel
    const auto p = improvement_factor(0.5 * d.mass, 1e-6, 0.5, setup());
    CHECK_FALSE(p.fringes);
    CHECK(p.beta == 0.0);
  }

  TEST_CASE("beta matches the ratio of the two acceleration resolutions") {
    const DerivedSphere d = derive(sphere, ground, grating);
    const double t = 0.5;
    const std::size_t n = 100000;
    const auto p = improvement_factor(d.mass, 0.0, t, setup());
    const double ballistic = ballistic_accel_resolution(p.sigma_v, t, n);
    const double interferometric =
        min_detectable_accel(phase_resolution({n, p.contrast}), t / 2, t / 2, grating.period);
    // ratio = chi sigma_v t / 2d = beta / 2 with the conventions used here
    CHECK(2 * ballistic / interferometric == Approx(p.beta).epsilon(0.10));
  }

  TEST_CASE("Monte Carlo phase noise is deterministic and job-independent") {
    const double tt = derive(sphere, ground, grating).talbot_time;
    const FringePattern p = simulate_pipeline(PipelineRequest{sphere, ground, grating, tt, tt, 0.0});
    const auto a = monte_carlo_phase_noise(p, 0.5e-6, 2000, 20, 99, 1024, 1);
    const auto b = monte_carlo_phase_noise(p, 0.5e-6, 2000, 20, 99, 1024, 3);
    CHECK(a.phases == b.phases);
    CHECK(a.phase_std > 0);
    CHECK(std::abs(a.mean_offset) < 4 * a.phase_std / std::sqrt(20.0));
    CHECK(a.predicted == Approx(pi / (a.contrast * std::sqrt(2000.0))).epsilon(1e-12));
    CHECK_THROWS_AS(monte_carlo_phase_noise(p, 0.5e-6, 10, 1, 1), InvalidArgument);
  }

  TEST_CASE("error budget") {
    BudgetConfig c;
    c.sphere = sphere;
    c.trap = ground;
    c.grating = grating;
    c.phase_resolution = pi / 300;
    const BudgetReport r = error_budget(c);
    REQUIRE(r.entries.size() >= 4);
    auto find = [&](const std::string& name) -> const BudgetEntry& {
      for (const auto& e : r.entries)
        if (e.name == name) return e;
      FAIL("missing entry " << name);
      throw;
    };
    const auto& align = find("alignment");
    CHECK(align.threshold == Approx(0.5).epsilon(1e-12));
    CHECK(align.threshold_unit == "ppm");
    CHECK(align.effect == Approx(4.9e-6).epsilon(0.01));
    CHECK(align.verdict == Verdict::flag);
    const auto& vib = find("vibration");
    CHECK(vib.threshold == Approx(1e-3).epsilon(1e-12));
    CHECK(vib.threshold_unit == "um/sqrt(Hz)");
    const auto& dec = find("decoherence");
    CHECK(dec.verdict == Verdict::pass);
    CHECK(dec.threshold == 1e-6);
    const auto& patch = find("patch_potential");
    CHECK(patch.verdict == Verdict::flag);
    CHECK(patch.value > r.min_accel);

    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["entries"].size() == r.entries.size());
    CHECK(j["entries"][0].contains("verdict"));
    CHECK(r.to_text().find("alignment") != std::string::npos);
    CHECK(to_string(Verdict::fail) == "FAIL");
  }
}

#include <doctest.h>

#include <cmath>

#include "nanotalbot/error.hpp"
#include "nanotalbot/fringe_fit.hpp"
#include "nanotalbot/phase_space.hpp"

using namespace nanotalbot;
using constants::pi;

namespace {

FringePattern synthetic(double phase, double depth, double period, double center = 0.3e-6,
                        double sigma = 2e-6, std::size_t n = 4096) {
  FringePattern p;
  p.grid = SampleGrid::centered(0.0, 8 * sigma, n);
  p.nominal_period = period;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = p.grid.at(i);
    const double env = std::exp(-0.5 * std::pow((x - center) / sigma, 2));
    p.density.push_back(env * (1 + depth * std::cos(2 * pi * x / period - phase)));
  }
  return p;
}

}  // namespace

TEST_SUITE("fringe_fit") {
  TEST_CASE("recovers a known phase") {
    for (double phase : {0.7, -2.0, 3.0, 0.0}) {
      const auto r = extract_phase(synthetic(phase, 0.8, 0.5e-6), 0.5e-6);
      CAPTURE(phase);
      CHECK(std::abs(wrap_phase(r.phase - phase)) < 1e-6);
      CHECK(r.amplitude == doctest::Approx(0.8).epsilon(1e-6));
      CHECK(r.residual < 1e-8);
      CHECK(r.fringes_detected);
      CHECK(r.fit_accepted);
      CHECK(r.envelope_center == doctest::Approx(0.3e-6).epsilon(1e-6));
      CHECK(r.envelope_sigma == doctest::Approx(2e-6).epsilon(1e-6));
    }
  }

  TEST_CASE("contrast is the visibility over the central fringes") {
    const auto r = extract_phase(synthetic(0.4, 0.5, 0.5e-6, 0.0, 20e-6, 16384), 0.5e-6);
    CHECK(r.contrast == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(r.contrast >= 0.0);
    CHECK(r.contrast <= 1.0);
  }

  TEST_CASE("flat pattern flags no fringes") {
    const auto r = extract_phase(synthetic(0.0, 0.0, 0.5e-6), 0.5e-6);
    CHECK_FALSE(r.fringes_detected);
    CHECK(r.contrast < 0.01);
  }

  TEST_CASE("symmetric Talbot pattern sits on the 0 / pi lattice") {
    const SphereSpec s{6.5e-9, 2300, 2};
    const TrapSpec t{2 * pi * 100, 0};
    const GratingSpec g{0.25e-6, 55e3, 1e-6};
    const double tt = derive(s, t, g).talbot_time;
    const auto r = extract_phase(simulate_pipeline(PipelineRequest{s, t, g, tt, tt, 0.0}),
                                 0.5e-6);
    CHECK(std::abs(std::remainder(r.phase, pi)) < 1e-3);
    CHECK(r.residual < FitOptions{}.residual_threshold);
  }

  TEST_CASE("undersampled pattern is rejected") {
    CHECK_THROWS_AS(extract_phase(synthetic(0.0, 0.5, 0.5e-6, 0.0, 2e-6, 128), 0.5e-6),
                    InvalidArgument);
  }

  TEST_CASE("wrap_phase range") {
    CHECK(wrap_phase(pi) == doctest::Approx(pi));
    CHECK(wrap_phase(-pi) == doctest::Approx(pi));
    CHECK(wrap_phase(3 * pi + 0.1) == doctest::Approx(-pi + 0.1));
    CHECK(wrap_phase(0.2) == doctest::Approx(0.2));
  }

  TEST_CASE("fit is deterministic") {
    const auto p = synthetic(1.1, 0.6, 0.5e-6);
    const auto a = extract_phase(p, 0.5e-6);
    const auto b = extract_phase(p, 0.5e-6);
    CHECK(a.phase == b.phase);
    CHECK(a.contrast == b.contrast);
  }
}

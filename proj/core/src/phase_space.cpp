#include "nanotalbot/phase_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "nanotalbot/error.hpp"
#include "nanotalbot/serialize.hpp"

namespace nanotalbot {

using constants::pi;
using detail::require;

SampleGrid SampleGrid::centered(double center, double half_width, std::size_t count) {
  require(count >= 2 && half_width > 0, "SampleGrid: need >= 2 points and positive width");
  return {center - half_width, 2.0 * half_width / static_cast<double>(count), count};
}

std::vector<double> SampleGrid::points() const {
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = at(i);
  return x;
}

SampleGrid SampleGrid::strided(std::size_t stride, std::size_t offset) const {
  require(stride >= 1 && offset < count, "SampleGrid::strided: bad stride/offset");
  return {at(offset), spacing * static_cast<double>(stride), (count - offset + stride - 1) / stride};
}

GaussianWignerState::GaussianWignerState(double mean_x, double mean_p, double var_x,
                                         double var_p, double cov_xp)
    : mean_x_(mean_x), mean_p_(mean_p), var_p_(var_p), cov_xp_(cov_xp) {
  require(var_x > 0 && var_p > 0, "GaussianWignerState: variances must be > 0");
  conditional_var_x_ = var_x - cov_xp * cov_xp / var_p;
  const double bound = 0.25 * constants::hbar * constants::hbar;
  require(conditional_var_x_ * var_p_ >= bound * (1.0 - 1e-9),
          "GaussianWignerState: violates the uncertainty bound");
}

GaussianWignerState GaussianWignerState::with_means(double mean_x, double mean_p) const {
  GaussianWignerState s = *this;
  s.mean_x_ = mean_x;
  s.mean_p_ = mean_p;
  return s;
}

double PostGratingState::diagonal_weight() const {
  double w = 0;
  for (const auto& t : terms)
    if (t.m == 0) w += t.weight.real();
  return w;
}

double FringePattern::integral() const {
  if (density.size() < 2) return 0;
  double sum = 0.5 * (density.front() + density.back());
  for (std::size_t i = 1; i + 1 < density.size(); ++i) sum += density[i];
  return sum * grid.spacing;
}

double FringePattern::peak() const {
  return density.empty() ? 0.0 : *std::max_element(density.begin(), density.end());
}

GaussianWignerState initial_state(const TrapSpec& trap, const DerivedSphere& sphere) {
  trap.validate();
  const ThermalSpreads s = thermal_spreads(sphere.mass, trap.omega, trap.temperature);
  return {0.0, 0.0, s.sigma_x * s.sigma_x, s.sigma_p * s.sigma_p, 0.0};
}

GaussianWignerState propagate_free(const GaussianWignerState& state, double t, double a,
                                   double mass) {
  require(t >= 0, "propagate_free: t must be >= 0");
  require(mass > 0, "propagate_free: mass must be > 0");
  GaussianWignerState out = state;
  out.mean_x_ = state.mean_x_ + state.mean_p_ * t / mass + 0.5 * a * t * t;
  out.mean_p_ = state.mean_p_ + mass * a * t;
  out.cov_xp_ = state.cov_xp_ + t * state.var_p_ / mass;
  return out;
}

PostGratingState apply_grating(const GaussianWignerState& state,
                               const TalbotLauCoefficients& coeffs, double period) {
  require(period > 0, "apply_grating: period must be > 0");
  const int order = coeffs.max_order();
  const double quantum = constants::h / period;

  PostGratingState post{state, {}, quantum, period};
  for (int j = -order; j <= order; ++j) {
    const auto bj = coeffs(j);
    if (bj == 0.0) continue;
    for (int l = -order; l <= order; ++l) {
      const auto bl = coeffs(l);
      if (std::abs(bj) * std::abs(bl) <= kernel_term_floor) continue;
      const int m = j - l;
      post.terms.push_back({j, m, bj * std::conj(bl), (j - 0.5 * m) * quantum});
    }
  }
  if (post.terms.empty()) throw InvalidArgument("apply_grating: empty coefficient table");
  return post;
}

namespace {

struct FlightGeometry {
  double tau;          // t1 / M
  double var_y;        // variance of the free-flight image position
  double gain;         // regression slope of grating position on image position
  double cond_var;     // variance of grating position given image position
  double mean_y;       // mean image position without kick and gravity offset
  double drop;         // a t1^2 / 2
};

FlightGeometry flight_geometry(const GaussianWignerState& s, double t1, double a, double mass) {
  require(t1 >= 0 && mass > 0, "detect_density: t1 must be >= 0 and mass > 0");
  const double tau = t1 / mass;
  const double shifted_cov = s.cov_xp() + tau * s.var_p();
  const double var_y = s.conditional_var_x() + shifted_cov * shifted_cov / s.var_p();
  const double gain = (s.var_x() + tau * s.cov_xp()) / var_y;
  const double cond_var = tau * tau * s.determinant() / var_y;
  return {tau, var_y, gain, cond_var, s.mean_x() + tau * s.mean_p(), 0.5 * a * t1 * t1};
}

}  // namespace

Envelope detection_envelope(const PostGratingState& post, double t1, double a, double mass) {
  const FlightGeometry g = flight_geometry(post.pre_kick, t1, a, mass);
  double weight = 0, spread = 0;
  for (const auto& t : post.terms) {
    if (t.m != 0) continue;
    const double shift = t.kick * g.tau;
    weight += t.weight.real();
    spread += t.weight.real() * shift * shift;
  }
  return {g.mean_y + g.drop, std::sqrt(g.var_y + spread / weight)};
}

SampleGrid default_detection_grid(const PostGratingState& post, double t1, double a,
                                  double mass, std::size_t count, double half_width_sigmas) {
  const Envelope env = detection_envelope(post, t1, a, mass);
  return SampleGrid::centered(env.center, half_width_sigmas * env.sigma, count);
}

FringePattern detect_density(const PostGratingState& post, double t1, double a, double mass,
                             const SampleGrid& grid) {
  require(grid.count >= 2 && grid.spacing > 0, "detect_density: empty grid");
  const FlightGeometry g = flight_geometry(post.pre_kick, t1, a, mass);
  const double k = 2.0 * pi / post.period;
  const double sd = std::sqrt(g.var_y);
  const double norm = 1.0 / std::sqrt(2.0 * pi * g.var_y);
  const double x_lo = grid.start;
  const double x_hi = grid.back();

  // grid must hold the diagonal envelope
  double on_grid = 0, total = 0;
  for (const auto& t : post.terms) {
    if (t.m != 0) continue;
    const double c = g.mean_y + g.drop + t.kick * g.tau;
    const double frac = 0.5 * (std::erf((x_hi - c) / (std::sqrt(2.0) * sd)) -
                               std::erf((x_lo - c) / (std::sqrt(2.0) * sd)));
    on_grid += t.weight.real() * frac;
    total += t.weight.real();
  }
  if (on_grid < 0.99 * total)
    throw NumericalError("detect_density: grid holds only " + std::to_string(on_grid / total) +
                         " of the envelope (need >= 0.99)");

  std::vector<double> rho(grid.count, 0.0);
  const double x_mean = post.pre_kick.mean_x();
  for (const auto& t : post.terms) {
    // (j - m, -m) is the complex conjugate of (j, m); fold it in
    if (t.m < 0) continue;
    const double fold = t.m == 0 ? 1.0 : 2.0;
    const double mk = t.m * k;
    const double damp = std::exp(-0.5 * mk * mk * g.cond_var);
    const double offset = g.mean_y + g.drop + t.kick * g.tau;
    const double amp = std::abs(t.weight) * fold * norm * damp;
    const double arg0 = std::arg(t.weight) + mk * x_mean;
    for (std::size_t i = 0; i < grid.count; ++i) {
      const double z = grid.at(i) - offset;
      const double gauss = std::exp(-0.5 * z * z / g.var_y);
      rho[i] += amp * gauss * (t.m == 0 ? 1.0 : std::cos(arg0 + mk * g.gain * z));
    }
  }

  FringePattern out;
  out.grid = grid;
  out.density = std::move(rho);
  out.nominal_period = 2.0 * post.period;
  out.meta.t1 = t1;
  out.meta.acceleration = a;
  out.meta.mass = mass;
  return out;
}

namespace {

FringePattern run_core(const PipelineCore& c, const SampleGrid* grid, std::size_t points,
                       double half_width_sigmas) {
  require(c.mass > 0 && c.omega > 0 && c.temperature >= 0 && c.period > 0,
          "simulate_pipeline: invalid mass, trap or period");
  require(c.t0 >= 0 && c.t1 >= 0, "simulate_pipeline: times must be >= 0");
  const ThermalSpreads s = thermal_spreads(c.mass, c.omega, c.temperature);
  const GaussianWignerState start(0.0, c.initial_momentum, s.sigma_x * s.sigma_x,
                                  s.sigma_p * s.sigma_p, 0.0);
  const GaussianWignerState at_grating = propagate_free(start, c.t0, c.acceleration, c.mass);
  const TalbotLauCoefficients coeffs(c.phase_amplitude);
  const PostGratingState post = apply_grating(at_grating, coeffs, c.period);
  if (!grid) {
    // hot states spread far beyond the reference scales; keep 16 samples per 2d fringe
    const Envelope env = detection_envelope(post, c.t1, c.acceleration, c.mass);
    const double needed = std::ceil(2.0 * half_width_sigmas * env.sigma / (2.0 * c.period / 16.0));
    if (needed > static_cast<double>(points))
      points = std::bit_ceil(static_cast<std::size_t>(needed));
  }
  const SampleGrid g = grid ? *grid
                            : default_detection_grid(post, c.t1, c.acceleration, c.mass, points,
                                                     half_width_sigmas);
  FringePattern out = detect_density(post, c.t1, c.acceleration, c.mass, g);
  out.meta.t0 = c.t0;
  out.meta.phase_amplitude = c.phase_amplitude;
  out.meta.parameter_hash = hash_metadata(out.meta, c.temperature, c.omega, c.period,
                                          c.initial_momentum);
  return out;
}

PipelineCore to_core(const PipelineRequest& r) {
  r.trap.validate();
  r.grating.validate();
  const double alpha = polarizability(r.sphere);
  return {sphere_mass(r.sphere),
          r.trap.omega,
          r.trap.temperature,
          r.grating.period,
          eikonal_phase_amplitude(alpha, r.grating.intensity, r.grating.pulse_duration),
          r.t0,
          r.t1,
          r.acceleration,
          r.initial_momentum};
}

}  // namespace

FringePattern simulate_pipeline(const PipelineCore& core, std::size_t grid_points,
                                double half_width_sigmas) {
  return run_core(core, nullptr, grid_points, half_width_sigmas);
}

FringePattern simulate_pipeline(const PipelineCore& core, const SampleGrid& grid) {
  return run_core(core, &grid, grid.count, 0);
}

FringePattern simulate_pipeline(const PipelineRequest& request) {
  return run_core(to_core(request), nullptr, request.grid_points, request.grid_half_width_sigmas);
}

FringePattern simulate_pipeline(const PipelineRequest& request, const SampleGrid& grid) {
  return run_core(to_core(request), &grid, grid.count, 0);
}

double phase_prediction(double a, double t0, double t1, double period) {
  require(period > 0, "phase_prediction: period must be > 0");
  return pi * t0 * t1 * a / period;
}

double a_pi(double t0, double t1, double period) {
  require(t0 > 0 && t1 > 0 && period > 0, "a_pi: inputs must be > 0");
  return period / (t0 * t1);
}

}  // namespace nanotalbot

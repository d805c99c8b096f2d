#include "nanotalbot/wave_oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>

#include "nanotalbot/error.hpp"
#include "nanotalbot/sampling.hpp"
#include "nanotalbot/serialize.hpp"

namespace nanotalbot {

using constants::hbar;
using constants::pi;
using detail::require;

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place complex transform; planning is serialized, execution is not.
class FftPlan {
 public:
  FftPlan(std::vector<std::complex<double>>& data, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(data.size()), p, p, sign, FFTW_ESTIMATE);
    if (!plan_) throw NumericalError("FFTW planning failed");
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute() { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

double wavenumber(std::size_t i, std::size_t n, double length) {
  const auto signed_i = i < n / 2 ? static_cast<double>(i)
                                  : static_cast<double>(i) - static_cast<double>(n);
  return 2.0 * pi * signed_i / length;
}

void check_boundary(const WaveGrid& w, const char* where) {
  const double frac = boundary_fraction(w);
  if (frac > wave_boundary_threshold)
    throw NumericalError(std::string(where) + ": wrap-around, boundary density " +
                         std::to_string(frac) + " of peak");
}

}  // namespace

double WaveGrid::norm() const {
  double s = 0;
  for (const auto& v : psi) s += std::norm(v);
  return s * grid.spacing;
}

std::vector<double> WaveGrid::density() const {
  std::vector<double> d(psi.size());
  std::transform(psi.begin(), psi.end(), d.begin(), [](auto v) { return std::norm(v); });
  return d;
}

double boundary_fraction(const WaveGrid& wave) {
  const std::size_t n = wave.psi.size();
  const std::size_t edge = std::max<std::size_t>(1, n / 64);
  double peak = 0, edge_max = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::norm(wave.psi[i]);
    peak = std::max(peak, v);
    if (i < edge || i >= n - edge) edge_max = std::max(edge_max, v);
  }
  return peak > 0 ? edge_max / peak : 0.0;
}

WaveGrid init_gaussian_packet(double sigma_x, double mean_x, double mean_p,
                              const SampleGrid& grid) {
  require(std::has_single_bit(grid.count) && grid.count >= 16,
          "init_gaussian_packet: grid size must be a power of two >= 16");
  require(sigma_x >= 4.0 * grid.spacing,
          "init_gaussian_packet: sigma_x unresolvable (needs >= 4 dx)");
  WaveGrid w{grid, std::vector<std::complex<double>>(grid.count)};
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double dx = grid.at(i) - mean_x;
    w.psi[i] = std::polar(std::exp(-dx * dx / (4.0 * sigma_x * sigma_x)), mean_p * dx / hbar);
  }
  const double scale = 1.0 / std::sqrt(w.norm());
  for (auto& v : w.psi) v *= scale;
  check_boundary(w, "init_gaussian_packet");
  return w;
}

WaveGrid free_propagate(const WaveGrid& wave, double t, double a, double mass) {
  require(t >= 0 && mass > 0, "free_propagate: t must be >= 0 and mass > 0");
  if (t == 0.0) return wave;

  const std::size_t n = wave.psi.size();
  const double length = wave.grid.spacing * static_cast<double>(n);
  const double shift = 0.5 * a * t * t;

  WaveGrid out = wave;
  FftPlan forward(out.psi, FFTW_FORWARD);
  FftPlan backward(out.psi, FFTW_BACKWARD);
  forward.execute();
  for (std::size_t i = 0; i < n; ++i) {
    const double k = wavenumber(i, n, length);
    out.psi[i] *= std::polar(1.0 / static_cast<double>(n),
                             -hbar * k * k * t / (2.0 * mass) - k * shift);
  }
  backward.execute();

  if (a != 0.0) {
    const double global = -mass * a * a * t * t * t / 6.0;
    for (std::size_t i = 0; i < n; ++i)
      out.psi[i] *= std::polar(1.0, (mass * a * t * out.grid.at(i) + global) / hbar);
  }
  check_boundary(out, "free_propagate");
  return out;
}

WaveGrid apply_phase_grating(const WaveGrid& wave, double phase_amplitude, double period) {
  require(period > 0, "apply_phase_grating: period must be > 0");
  require(period / wave.grid.spacing >= 8.0,
          "apply_phase_grating: grating undersampled (needs >= 8 samples per period)");
  WaveGrid out = wave;
  for (std::size_t i = 0; i < out.psi.size(); ++i) {
    const double s = std::sin(pi * out.grid.at(i) / period);
    out.psi[i] *= std::polar(1.0, phase_amplitude * s * s);
  }
  return out;
}

SampleGrid oracle_grid(const OracleRequest& r) {
  r.trap.validate();
  r.grating.validate();
  const double mass = sphere_mass(r.sphere);
  const double sigma_x = ground_state_spread(mass, r.trap.omega);
  const double sigma_p = hbar / (2.0 * sigma_x);
  const double total = r.t0 + r.t1;

  const double final_sigma = std::hypot(sigma_x, total * sigma_p / mass);
  const double end_center = r.initial_momentum * total / mass + 0.5 * r.acceleration * total * total;
  double half = r.grid.half_width > 0 ? r.grid.half_width
                                      : std::max(8.0 * final_sigma, 64.0 * r.grating.period);
  half += 0.5 * std::abs(end_center);

  std::size_t points = r.grid.forced_points;
  if (points == 0) {
    const double needed = 2.0 * half / (sigma_x / 4.0);
    points = std::bit_ceil(std::max<std::size_t>(r.grid.min_points,
                                                 static_cast<std::size_t>(std::ceil(needed))));
  }
  require(std::has_single_bit(points), "oracle grid size must be a power of two");
  return SampleGrid::centered(0.5 * end_center, half, points);
}

namespace {

FringePattern run_packet(const OracleRequest& r, const SampleGrid& grid, double mass,
                         double sigma_x, double x0, double p0, double phi0) {
  WaveGrid w = init_gaussian_packet(sigma_x, x0, p0 + r.initial_momentum, grid);
  w = free_propagate(w, r.t0, r.acceleration, mass);
  w = apply_phase_grating(w, phi0, r.grating.period);
  w = free_propagate(w, r.t1, r.acceleration, mass);
  FringePattern out;
  out.grid = grid;
  out.density = w.density();
  return out;
}

}  // namespace

FringePattern oracle_fringe(const OracleRequest& r) {
  require(r.trap.temperature == 0.0, "oracle_fringe: pure ground state only (temperature 0)");
  const SampleGrid grid = oracle_grid(r);
  const double mass = sphere_mass(r.sphere);
  const double sigma_x = ground_state_spread(mass, r.trap.omega);
  const double phi0 = eikonal_phase_amplitude(polarizability(r.sphere), r.grating.intensity,
                                              r.grating.pulse_duration);
  FringePattern out = run_packet(r, grid, mass, sigma_x, 0.0, 0.0, phi0);
  out.nominal_period = 2.0 * r.grating.period;
  out.meta = {r.t0, r.t1, r.acceleration, mass, phi0, "oracle", {}};
  out.meta.parameter_hash =
      hash_metadata(out.meta, 0.0, r.trap.omega, r.grating.period, r.initial_momentum);
  return out;
}

MixtureResult oracle_thermal_mixture(const OracleRequest& request, double temperature,
                                     std::size_t draws, std::uint64_t seed) {
  require(draws >= 2, "oracle_thermal_mixture: need >= 2 draws");
  OracleRequest r = request;
  r.trap.temperature = 0.0;
  const double mass = sphere_mass(r.sphere);
  const double sigma_x = ground_state_spread(mass, r.trap.omega);
  const double sigma_p = hbar / (2.0 * sigma_x);
  const double nbar = mean_occupation(r.trap.omega, temperature);
  const double spread = std::sqrt(2.0 * nbar);
  const double phi0 = eikonal_phase_amplitude(polarizability(r.sphere), r.grating.intensity,
                                              r.grating.pulse_duration);

  // widen the domain for the displaced packets
  const double total = r.t0 + r.t1;
  const double thermal_sigma =
      std::hypot(sigma_x, total * sigma_p / mass) * std::sqrt(2.0 * nbar + 1.0);
  if (r.grid.half_width == 0)
    r.grid.half_width = std::max(10.0 * thermal_sigma, 64.0 * r.grating.period);
  const SampleGrid grid = oracle_grid(r);

  Rng rng(seed);
  std::vector<double> sum(grid.count, 0.0), sum_sq(grid.count, 0.0);
  for (std::size_t k = 0; k < draws; ++k) {
    const double x0 = spread * sigma_x * rng.normal();
    const double p0 = spread * sigma_p * rng.normal();
    const FringePattern one = run_packet(r, grid, mass, sigma_x, x0, p0, phi0);
    for (std::size_t i = 0; i < grid.count; ++i) {
      sum[i] += one.density[i];
      sum_sq[i] += one.density[i] * one.density[i];
    }
  }

  MixtureResult out;
  out.draws = draws;
  out.mean.grid = grid;
  out.mean.density.resize(grid.count);
  out.standard_error.resize(grid.count);
  const auto n = static_cast<double>(draws);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double mean = sum[i] / n;
    const double var = std::max(0.0, (sum_sq[i] / n - mean * mean) * n / (n - 1.0));
    out.mean.density[i] = mean;
    out.standard_error[i] = std::sqrt(var / n);
  }
  out.mean.nominal_period = 2.0 * r.grating.period;
  out.mean.meta = {r.t0, r.t1, r.acceleration, mass, phi0, "oracle-mixture", {}};
  out.mean.meta.parameter_hash =
      hash_metadata(out.mean.meta, temperature, r.trap.omega, r.grating.period, r.initial_momentum);
  return out;
}

}  // namespace nanotalbot

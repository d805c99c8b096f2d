#include "nanotalbot/physics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nanotalbot/bessel.hpp"
#include "nanotalbot/error.hpp"

namespace nanotalbot {

using constants::pi;
using detail::require;

void SphereSpec::validate() const {
  require(std::isfinite(radius) && radius > 0, "SphereSpec: radius must be > 0");
  require(std::isfinite(density) && density > 0, "SphereSpec: density must be > 0");
  require(std::isfinite(dielectric_constant) && dielectric_constant > 1,
          "SphereSpec: dielectric constant must be > 1");
}

void TrapSpec::validate() const {
  require(std::isfinite(omega) && omega > 0, "TrapSpec: omega must be > 0");
  require(std::isfinite(temperature) && temperature >= 0, "TrapSpec: temperature must be >= 0");
}

void GratingSpec::validate() const {
  require(std::isfinite(period) && period > 0, "GratingSpec: period must be > 0");
  require(std::isfinite(intensity) && intensity >= 0, "GratingSpec: intensity must be >= 0");
  require(std::isfinite(pulse_duration) && pulse_duration > 0,
          "GratingSpec: pulse duration must be > 0");
  require(std::isfinite(wavelength) && wavelength >= 0, "GratingSpec: wavelength must be >= 0");
}

double sphere_mass(const SphereSpec& spec) {
  spec.validate();
  return 4.0 / 3.0 * pi * spec.density * spec.radius * spec.radius * spec.radius;
}

double polarizability(const SphereSpec& spec) {
  spec.validate();
  const double eps = spec.dielectric_constant;
  return 4.0 * pi * constants::eps0 * spec.radius * spec.radius * spec.radius * (eps - 1.0) /
         (eps + 2.0);
}

double ground_state_spread(double mass, double omega) {
  require(mass > 0 && omega > 0, "ground_state_spread: mass and omega must be > 0");
  return std::sqrt(constants::hbar / (2.0 * mass * omega));
}

double mean_occupation(double omega, double temperature) {
  require(omega > 0 && temperature >= 0, "mean_occupation: invalid omega or temperature");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(constants::hbar * omega / (constants::k_B * temperature));
}

ThermalSpreads thermal_spreads(double mass, double omega, double temperature) {
  require(mass > 0 && omega > 0, "thermal_spreads: mass and omega must be > 0");
  const double widen = 2.0 * mean_occupation(omega, temperature) + 1.0;
  return {std::sqrt(constants::hbar / (2.0 * mass * omega) * widen),
          std::sqrt(constants::hbar * mass * omega / 2.0 * widen)};
}

double talbot_time(double mass, double period) {
  require(mass > 0 && period > 0, "talbot_time: mass and period must be > 0");
  return mass * period * period / constants::h;
}

double eikonal_phase_amplitude(double polarizability, double intensity, double pulse_duration) {
  require(polarizability >= 0 && intensity >= 0 && pulse_duration >= 0,
          "eikonal_phase_amplitude: inputs must be >= 0");
  return polarizability * intensity * pulse_duration /
         (constants::hbar * constants::c * constants::eps0);
}

double grating_velocity(double mass, double period) {
  require(mass > 0 && period > 0, "grating_velocity: mass and period must be > 0");
  return constants::hbar / (period * mass);
}

DerivedSphere derive(const SphereSpec& sphere, const TrapSpec& trap, const GratingSpec& grating) {
  trap.validate();
  grating.validate();
  const double mass = sphere_mass(sphere);
  const double sigma_x = ground_state_spread(mass, trap.omega);
  return {mass, polarizability(sphere), sigma_x, trap.omega * sigma_x,
          talbot_time(mass, grating.period)};
}

ScatteringEstimate rayleigh_scattering(const SphereSpec& spec, double intensity, double wavelength) {
  require(intensity >= 0 && wavelength > 0, "rayleigh_scattering: invalid intensity or wavelength");
  const double k = 2.0 * pi / wavelength;
  const double volume_polarizability = polarizability(spec) / (4.0 * pi * constants::eps0);
  const double cross_section =
      8.0 * pi / 3.0 * std::pow(k, 4) * volume_polarizability * volume_polarizability;
  const double photon_energy = constants::hbar * 2.0 * pi * constants::c / wavelength;
  const double rate = intensity * cross_section / photon_energy;
  const double t_dec = rate > 0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
  return {cross_section, rate, t_dec};
}

namespace {

// (-i)^m, exact on the four-cycle
std::complex<double> minus_i_power(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace

TalbotLauCoefficients::TalbotLauCoefficients(double phi0, double tail_tol) : phi0_(phi0) {
  require(std::isfinite(phi0) && phi0 >= 0, "TalbotLauCoefficients: phi0 must be >= 0");
  require(tail_tol > 0 && tail_tol < 1, "TalbotLauCoefficients: tail_tol must lie in (0, 1)");

  const std::vector<double> j = bessel_j_sequence(phi0 / 2.0, order_cap + 1);

  // tail[n] = 2 sum_{m > n} J_m^2, accumulated from the top to avoid cancellation
  std::vector<double> tail(j.size(), 0.0);
  for (int n = static_cast<int>(j.size()) - 2; n >= 0; --n)
    tail[n] = tail[n + 1] + 2.0 * j[n + 1] * j[n + 1];

  int order = -1;
  for (int n = 0; n <= order_cap; ++n) {
    if (tail[n] < tail_tol) {
      order = n;
      break;
    }
  }
  if (order < 0)
    throw NumericalError("TalbotLauCoefficients: tail tolerance unreachable below order cap " +
                         std::to_string(order_cap) + " (phi0 = " + std::to_string(phi0) + ")");

  max_order_ = order;
  tail_weight_ = tail[order];
  values_.resize(2 * static_cast<std::size_t>(order) + 1);
  const std::complex<double> global = std::polar(1.0, phi0 / 2.0);
  for (int m = -order; m <= order; ++m) {
    const int n = std::abs(m);
    const double jm = (m < 0 && n % 2 != 0) ? -j[n] : j[n];
    values_[static_cast<std::size_t>(m + order)] = minus_i_power(m) * global * jm;
  }
}

std::complex<double> TalbotLauCoefficients::operator()(int m) const {
  if (m < -max_order_ || m > max_order_) return {0.0, 0.0};
  return values_[static_cast<std::size_t>(m + max_order_)];
}

}  // namespace nanotalbot

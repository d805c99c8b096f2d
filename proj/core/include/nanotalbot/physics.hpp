#pragma once

/**
 * @file physics.hpp
 * @brief Experiment parameter records and closed-form derived quantities
 *        for a dielectric nanosphere released from a harmonic trap and
 *        diffracted by a standing-wave light grating.
 *
 * Spreads follow the variance convention: sigma_x and sigma_p are standard
 * deviations of the Wigner distribution, so the ground state is
 * exp(-x^2/2 sigma_x^2 - p^2/2 sigma_p^2) with sigma_x sigma_p = hbar/2.
 */

#include <complex>
#include <vector>

#include "nanotalbot/constants.hpp"

namespace nanotalbot {

struct SphereSpec {
  double radius;               ///< [m]
  double density;              ///< [kg/m^3]
  double dielectric_constant;  ///< relative permittivity, > 1

  void validate() const;
};

struct TrapSpec {
  double omega;        ///< trap angular frequency [rad/s]
  double temperature;  ///< [K]; 0 means motional ground state

  void validate() const;
};

struct GratingSpec {
  double period;          ///< d [m]
  double intensity;       ///< peak intensity I [W/m^2]
  double pulse_duration;  ///< tau [s]
  double wavelength = 0;  ///< laser wavelength [m]; 0 selects the standing-wave value 2d

  void validate() const;
  double laser_wavelength() const { return wavelength > 0 ? wavelength : 2.0 * period; }
};

struct DerivedSphere {
  double mass;            ///< M [kg]
  double polarizability;  ///< alpha_omega [C m^2 / V]
  double sigma_x;         ///< ground-state position spread [m]
  double sigma_v;         ///< ground-state velocity spread [m/s]
  double talbot_time;     ///< T_T = M d^2 / h [s]
};

double sphere_mass(const SphereSpec& spec);
double polarizability(const SphereSpec& spec);
double ground_state_spread(double mass, double omega);

struct ThermalSpreads {
  double sigma_x;  ///< [m]
  double sigma_p;  ///< [kg m/s]
};

/// Mean phonon number 1/(exp(hbar w / k_B T) - 1); zero at T = 0.
double mean_occupation(double omega, double temperature);

/// Exact harmonic thermal-state spreads; sigma^2 scales as (2 n + 1).
ThermalSpreads thermal_spreads(double mass, double omega, double temperature);

double talbot_time(double mass, double period);

/// phi_0 = alpha I tau / (hbar c eps0): peak of the eikonal grating phase phi_0 sin^2(pi x / d).
double eikonal_phase_amplitude(double polarizability, double intensity, double pulse_duration);

double grating_velocity(double mass, double period);

DerivedSphere derive(const SphereSpec& sphere, const TrapSpec& trap, const GratingSpec& grating);

struct ScatteringEstimate {
  double cross_section;     ///< Rayleigh cross-section [m^2]
  double rate;              ///< photons per second at intensity I
  double decoherence_time;  ///< 1 / rate [s]; +inf when rate is zero
};

ScatteringEstimate rayleigh_scattering(const SphereSpec& spec, double intensity, double wavelength);

/// Fourier coefficients b_m = (-i)^m e^{i phi0/2} J_m(phi0/2) of the grating
/// transmission exp(i phi0 sin^2(pi x/d)) = sum_m b_m e^{2 pi i m x / d},
/// truncated at the smallest order whose two-sided tail weight is below tail_tol.
/// Cross terms b_j b*_l scale with the tail amplitude, the square root of that
/// weight, hence the small default.
class TalbotLauCoefficients {
 public:
  static constexpr double default_tail_tolerance = 1e-24;
  static constexpr int order_cap = 512;

  TalbotLauCoefficients(double phi0, double tail_tol = default_tail_tolerance);

  double phase_amplitude() const { return phi0_; }
  int max_order() const { return max_order_; }
  /// Dropped weight sum_{|m| > max_order} |b_m|^2.
  double tail_weight() const { return tail_weight_; }

  /// Zero outside [-max_order, max_order].
  std::complex<double> operator()(int m) const;

 private:
  double phi0_;
  int max_order_ = 0;
  double tail_weight_ = 0;
  std::vector<std::complex<double>> values_;
};

}  // namespace nanotalbot

#pragma once

/**
 * @file wave_oracle.hpp
 * @brief Brute-force wavefunction propagation on a periodic grid, used as an
 *        independent check of the phase-space engine.
 *
 * Free flight is one exact spectral step exp(-i hbar k^2 t / 2M); a constant
 * acceleration is applied through the exact transformation
 *   psi_a(x, t) = exp(i (M a t x - M a^2 t^3 / 6) / hbar) psi_0(x - a t^2 / 2, t),
 * with the displacement done spectrally. No time slicing is involved.
 */

#include <complex>
#include <cstdint>
#include <vector>

#include "nanotalbot/grid.hpp"
#include "nanotalbot/phase_space.hpp"

namespace nanotalbot {

struct WaveGrid {
  SampleGrid grid;  ///< count is a power of two
  std::vector<std::complex<double>> psi;

  double norm() const;  ///< sum |psi|^2 dx
  std::vector<double> density() const;
};

/// Largest |psi|^2 in the outer 1/64 of the domain relative to the peak.
double boundary_fraction(const WaveGrid& wave);

inline constexpr double wave_boundary_threshold = 1e-8;

WaveGrid init_gaussian_packet(double sigma_x, double mean_x, double mean_p,
                              const SampleGrid& grid);

WaveGrid free_propagate(const WaveGrid& wave, double t, double a, double mass);

WaveGrid apply_phase_grating(const WaveGrid& wave, double phase_amplitude, double period);

struct OracleGridSpec {
  std::size_t min_points = 8192;
  double half_width = 0;  ///< 0 selects max(8 final envelope widths, 64 d)
  /// Forces the point count (power of two); 0 lets the oracle resolve sigma_x.
  std::size_t forced_points = 0;
};

struct OracleRequest {
  SphereSpec sphere;
  TrapSpec trap;  ///< temperature must be 0 (pure state)
  GratingSpec grating;
  double t0 = 0;
  double t1 = 0;
  double acceleration = 0;
  double initial_momentum = 0;
  OracleGridSpec grid;
};

/// The oracle grid the request would use.
SampleGrid oracle_grid(const OracleRequest& request);

/// init -> free_propagate(t0) -> grating -> free_propagate(t1) -> |psi|^2.
FringePattern oracle_fringe(const OracleRequest& request);

struct MixtureResult {
  FringePattern mean;
  std::vector<double> standard_error;  ///< per sample point
  std::size_t draws = 0;
};

/// Thermal state as an incoherent mixture of displaced ground-state packets
/// with Gaussian displacement variances 2 n sigma^2.
MixtureResult oracle_thermal_mixture(const OracleRequest& request, double temperature,
                                     std::size_t draws, std::uint64_t seed);

}  // namespace nanotalbot

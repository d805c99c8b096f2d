#pragma once

/**
 * @file constants.hpp
 * @brief Frozen physical constants and reference material densities (SI).
 *
 * Exact SI-2019 defining constants (h, c, k_B) are given to full precision;
 * eps0 and G_N are CODATA 2018 recommended values. The table is frozen so
 * regression outputs stay bit-reproducible across builds.
 */

#include <numbers>

namespace nanotalbot {

struct PhysicalConstants {
  double h;      ///< Planck constant [J s]
  double hbar;   ///< reduced Planck constant [J s]
  double c;      ///< speed of light [m/s]
  double eps0;   ///< vacuum permittivity [F/m]
  double G_N;    ///< Newtonian constant of gravitation [m^3 / (kg s^2)]
  double g;      ///< standard gravity [m/s^2]
  double k_B;    ///< Boltzmann constant [J/K]
};

namespace constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double h = 6.626'070'15e-34;
inline constexpr double hbar = h / (2.0 * pi);
inline constexpr double c = 299'792'458.0;
inline constexpr double eps0 = 8.854'187'8128e-12;
inline constexpr double G_N = 6.674'30e-11;
inline constexpr double g = 9.806'65;
inline constexpr double k_B = 1.380'649e-23;

inline constexpr PhysicalConstants codata2018{h, hbar, c, eps0, G_N, g, k_B};

}  // namespace constants

/// Bulk densities [kg/m^3] from standard handbook data.
namespace materials {

inline constexpr double gold_density = 19300.0;
inline constexpr double silicon_density = 2330.0;
inline constexpr double silica_density = 2300.0;

}  // namespace materials
}  // namespace nanotalbot

#pragma once

// Experiment configuration: a TOML file with SI quantities in unit-suffixed
// keys. Unknown sections or keys are rejected before anything is computed.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "nanotalbot/forces.hpp"
#include "nanotalbot/physics.hpp"
#include "nanotalbot/sensitivity.hpp"
#include "nanotalbot/wave_oracle.hpp"

namespace nanotalbot::cli {

/// Anything wrong with the configuration itself; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string name;
  std::filesystem::path path;
  std::string content_hash;  ///< fnv1a over the file with line endings normalized

  SphereSpec sphere{6.5e-9, materials::silica_density, 2.0};
  TrapSpec trap{2.0 * constants::pi * 100.0, 0.0};
  GratingSpec grating{0.25e-6, 55e3, 1e-6};

  double t0 = 0;  ///< 0 selects the Talbot time
  double t1 = 0;

  double acceleration = 0;          ///< [m/s^2], added to acceleration_a_pi * a_pi
  double acceleration_a_pi = 0;
  double initial_momentum_sigma = 0;
  std::size_t grid_points = 8192;
  double half_width_sigmas = 8.0;

  OracleGridSpec oracle_grid{};
  double oracle_linf_tolerance = 1e-4;
  double oracle_phase_tolerance_pi = 0.01;

  WallGeometry wall = WallGeometry::gold_silicon(10e-6);
  std::vector<double> lambdas;  ///< exclusion grid [m]
  YukawaParams yukawa{400.0, 5e-6};
  std::vector<double> y_scan;  ///< [m]
  double y_offset = 0;

  ShotBudget budget{100000, 1.0, 0.0};
  double phase_resolution_override = 0;  ///< [rad], 0 means derive from the budget

  std::vector<double> masses_m0;
  std::vector<double> temperatures;
  double fall_time = 0.5;

  std::size_t shot_count = 100000;
  std::size_t repeats = 100;
  std::size_t bins = 1024;
  std::vector<std::size_t> scaling_counts;

  double tilt = 0.5e-6;
  double vibration_asd = 1e-9;
  PatchModel patch{0.05, 4e-6};
  std::vector<double> cp_separations;

  std::uint64_t seed = 1;

  double resolved_t0() const;
  double resolved_t1() const;
  double phase_resolution() const;
  double total_acceleration() const;
  DerivedSphere derived() const { return derive(sphere, trap, grating); }
};

/// Parses and validates. Throws ConfigError naming the file on any problem.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& origin);

}  // namespace nanotalbot::cli

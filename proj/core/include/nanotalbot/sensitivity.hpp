#pragma once

/**
 * @file sensitivity.hpp
 * @brief Shot-noise phase resolution, minimum detectable acceleration,
 *        Yukawa exclusion curves, the interference-vs-ballistic improvement
 *        factor, and the systematic error budget.
 */

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nanotalbot/forces.hpp"
#include "nanotalbot/fringe_fit.hpp"
#include "nanotalbot/physics.hpp"

namespace nanotalbot {

struct ShotBudget {
  std::size_t shots = 1;
  double contrast = 1.0;        ///< chi in (0, 1]
  double detector_noise = 0.0;  ///< per-shot position noise [m]

  void validate() const;
};

/// pi / (chi sqrt N); the 2d fringe period maps a d/sqrt(N) position
/// uncertainty onto pi/sqrt(N) of phase. Detector noise adds in quadrature
/// at pi/d rad per metre when `period` is given.
double phase_resolution(const ShotBudget& budget, double period = 0.0);

/// delta_phi d / (pi t0 t1).
double min_detectable_accel(double phase_resolution, double t0, double t1, double period);

struct ExclusionScenario {
  std::string name;
  SphereSpec sphere;
  TrapSpec trap;
  GratingSpec grating;
  WallGeometry wall;
  double phase_resolution = 0;  ///< delta_phi [rad]
  double t0 = 0;                ///< 0 selects the Talbot time of the sphere
  double t1 = 0;                ///< 0 selects the Talbot time of the sphere
  double y0 = 0;                ///< lateral offset from the section centres

  double resolved_t0() const;
  double resolved_t1() const;
  std::string hash() const;
};

struct ExclusionCurve {
  std::vector<double> ranges;            ///< lambda [m]
  std::vector<double> alpha_min;         ///< |alpha| at SNR 1
  std::vector<double> signal_per_alpha;  ///< differential Yukawa accel at alpha = 1 [m/s^2]
  double min_accel = 0;                  ///< a_min [m/s^2]
  std::string config_hash;
};

/// alpha_min(lambda) = a_min / |differential Yukawa acceleration at alpha = 1|.
ExclusionCurve exclusion_curve(const ExclusionScenario& scenario,
                               const std::vector<double>& ranges, int jobs = 1);

/// Zero-point velocity spread sqrt(hbar omega / 2M).
double ballistic_sigma_v(double mass, double omega);

/// 2 sigma_v / (t sqrt N): the mean position error sigma_v t / sqrt N equated to a t^2 / 2.
double ballistic_accel_resolution(double sigma_v, double fall_time, std::size_t shots);

struct ImprovementSetup {
  double period;           ///< d [m]
  double phase_amplitude;  ///< phi_0, held fixed as the mass varies
  double omega;            ///< trap frequency [rad/s]
  std::size_t grid_points = 8192;
  FitOptions fit{};
};

struct ImprovementPoint {
  double mass = 0;
  double temperature = 0;
  double fall_time = 0;
  double contrast = 0;
  double sigma_v = 0;  ///< thermal velocity spread [m/s]
  double beta = 0;
  bool fringes = false;
};

/// beta = chi sigma_v t / d with chi from the phase-space pipeline run at
/// t0 = t1 = t/2; zero when the pattern shows no fringes.
ImprovementPoint improvement_factor(double mass, double temperature, double fall_time,
                                    const ImprovementSetup& setup);

struct BallisticComparison {
  std::vector<double> masses;
  std::vector<double> temperatures;
  double fall_time = 0;
  std::vector<ImprovementPoint> points;  ///< temperature-major: points[it * masses + im]

  const ImprovementPoint& at(std::size_t temperature_index, std::size_t mass_index) const {
    return points[temperature_index * masses.size() + mass_index];
  }
};

BallisticComparison beta_sweep(const std::vector<double>& masses,
                               const std::vector<double>& temperatures, double fall_time,
                               const ImprovementSetup& setup, int jobs = 1);

struct PhaseNoiseEstimate {
  std::size_t shots = 0;
  std::size_t repeats = 0;
  double mean_offset = 0;  ///< mean of (fitted - reference) phase [rad]
  double phase_std = 0;    ///< sample standard deviation over repeats [rad]
  double predicted = 0;    ///< pi / (chi sqrt N) with chi from the reference fit
  double contrast = 0;
  std::vector<double> phases;  ///< per-repeat offsets, in repeat order
};

/// Repeated experiments: draw `shots` positions, histogram them into `bins`
/// cells over the pattern grid, fit the phase. Per-repeat seeds come from one
/// stream seeded by `seed`, so results do not depend on `jobs`.
PhaseNoiseEstimate monte_carlo_phase_noise(const FringePattern& pattern, double period,
                                           std::size_t shots, std::size_t repeats,
                                           std::uint64_t seed, std::size_t bins = 1024,
                                           int jobs = 1);

enum class Verdict { pass, flag, fail };
std::string to_string(Verdict v);

struct BudgetEntry {
  std::string name;
  double value;  ///< the controlled parameter (or the estimate itself)
  std::string unit;
  double threshold;  ///< the stated limit for that parameter
  std::string threshold_unit;
  double effect;  ///< induced acceleration or phase, for comparison with the signal
  std::string effect_unit;
  Verdict verdict;
  std::string note;
};

struct BudgetConfig {
  SphereSpec sphere;
  TrapSpec trap;
  GratingSpec grating;
  double separation = 10e-6;
  double t0 = 0;  ///< 0 selects the Talbot time
  double t1 = 0;
  double phase_resolution = 0;
  double tilt = 0.5e-6;              ///< vertical misalignment [rad]
  double vibration_asd = 1e-9;       ///< mirror displacement noise near 1 Hz [m/sqrt(Hz)]
  PatchModel patch{0.05, 4e-6};
  YukawaParams reference_signal{400.0, 5e-6};
  WallGeometry wall = WallGeometry::gold_silicon(10e-6);
};

inline constexpr double alignment_threshold = 0.5e-6;        // rad
inline constexpr double vibration_threshold = 1e-3 * 1e-6;  // m/sqrt(Hz)

struct BudgetReport {
  double min_accel = 0;
  double yukawa_signal = 0;
  std::vector<BudgetEntry> entries;

  std::string to_json() const;
  std::string to_text() const;
};

BudgetReport error_budget(const BudgetConfig& config);

}  // namespace nanotalbot

#pragma once

/**
 * @file phase_space.hpp
 * @brief Gaussian Wigner-function propagation through release, free fall,
 *        the eikonal light grating, and detection.
 *
 * Free flight for time t under constant transverse acceleration a is the
 * affine shear w(x, p) -> w0(x - p t/M + a t^2/2, p - M a t), so a > 0
 * moves the centroid by +a t^2/2 toward the wall. The grating replaces
 * the state by the weighted sum
 *
 *   w2(x, p) = sum_{j,m} b_j b*_{j-m} e^{2 pi i m x/d} w1(x, p - (j - m/2) h/d),
 *
 * and each term's momentum marginal after the final flight is a Gaussian
 * times a complex exponential, evaluated here in closed form.
 */

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "nanotalbot/grid.hpp"
#include "nanotalbot/physics.hpp"

namespace nanotalbot {

/// Gaussian Wigner distribution of the centre-of-mass mode.
///
/// Stored as (var_p, cov_xp, conditional position variance
/// var_x - cov_xp^2/var_p). Free flight, constant force and grating kicks
/// leave the conditional variance and var_p untouched, so the phase-space
/// determinant is carried exactly.
class GaussianWignerState {
 public:
  GaussianWignerState(double mean_x, double mean_p, double var_x, double var_p, double cov_xp);

  double mean_x() const { return mean_x_; }
  double mean_p() const { return mean_p_; }
  double var_x() const { return conditional_var_x_ + cov_xp_ * cov_xp_ / var_p_; }
  double var_p() const { return var_p_; }
  double cov_xp() const { return cov_xp_; }
  /// var_x var_p - cov_xp^2, >= (hbar/2)^2.
  double determinant() const { return conditional_var_x_ * var_p_; }
  double conditional_var_x() const { return conditional_var_x_; }

  GaussianWignerState with_means(double mean_x, double mean_p) const;

 private:
  GaussianWignerState() = default;
  friend GaussianWignerState propagate_free(const GaussianWignerState&, double, double, double);

  double mean_x_ = 0;
  double mean_p_ = 0;
  double var_p_ = 0;
  double cov_xp_ = 0;
  double conditional_var_x_ = 0;
};

/// One retained (j, m) term of the grating kernel.
struct KernelTerm {
  int j = 0;
  int m = 0;
  std::complex<double> weight;  ///< b_j b*_{j-m}
  double kick = 0;              ///< (j - m/2) h/d [kg m/s]
};

struct PostGratingState {
  GaussianWignerState pre_kick;
  std::vector<KernelTerm> terms;
  double momentum_quantum = 0;  ///< h/d
  double period = 0;            ///< d

  /// Sum of the diagonal (m = 0) weights, i.e. the retained probability.
  double diagonal_weight() const;
};

struct PatternMetadata {
  double t0 = 0;
  double t1 = 0;
  double acceleration = 0;
  double mass = 0;
  double phase_amplitude = 0;
  std::string source = "phase-space";
  std::string parameter_hash;
};

struct FringePattern {
  SampleGrid grid;
  std::vector<double> density;  ///< [1/m]
  double nominal_period = 0;    ///< expected fringe period [m]
  PatternMetadata meta;

  double integral() const;  ///< trapezoid rule
  double peak() const;
};

/// Minimum drop for a term |b_j b_{j-m}|.
inline constexpr double kernel_term_floor = 1e-14;

GaussianWignerState initial_state(const TrapSpec& trap, const DerivedSphere& sphere);

/// Exact affine shear for flight time t under acceleration a.
GaussianWignerState propagate_free(const GaussianWignerState& state, double t, double a,
                                   double mass);

PostGratingState apply_grating(const GaussianWignerState& state,
                               const TalbotLauCoefficients& coeffs, double period);

/// Centre and standard deviation of the m = 0 envelope after flight t1.
struct Envelope {
  double center;
  double sigma;
};
Envelope detection_envelope(const PostGratingState& post, double t1, double a, double mass);

/// Default detection grid: `count` points spanning +-half_width_sigmas envelope widths.
SampleGrid default_detection_grid(const PostGratingState& post, double t1, double a,
                                  double mass, std::size_t count = 8192,
                                  double half_width_sigmas = 8.0);

/// Position density after flight t1, summed over all retained kernel terms.
/// Throws NumericalError when the grid holds less than 99% of the envelope.
FringePattern detect_density(const PostGratingState& post, double t1, double a, double mass,
                             const SampleGrid& grid);

struct PipelineRequest {
  SphereSpec sphere;
  TrapSpec trap;
  GratingSpec grating;
  double t0 = 0;
  double t1 = 0;
  double acceleration = 0;
  double initial_momentum = 0;  ///< systematic release kick p0 [kg m/s]
  std::size_t grid_points = 8192;
  double grid_half_width_sigmas = 8.0;
};

/// Lower-level pipeline entry used when the mass or grating phase is swept
/// independently of a SphereSpec.
struct PipelineCore {
  double mass;
  double omega;
  double temperature;
  double period;
  double phase_amplitude;
  double t0;
  double t1;
  double acceleration = 0;
  double initial_momentum = 0;
};

FringePattern simulate_pipeline(const PipelineRequest& request);
FringePattern simulate_pipeline(const PipelineRequest& request, const SampleGrid& grid);
FringePattern simulate_pipeline(const PipelineCore& core, std::size_t grid_points = 8192,
                                double half_width_sigmas = 8.0);
FringePattern simulate_pipeline(const PipelineCore& core, const SampleGrid& grid);

/// Lowest-order fringe phase pi t0 t1 a / d.
double phase_prediction(double a, double t0, double t1, double period);

/// d / (t0 t1): acceleration that shifts the fringes by half a period.
double a_pi(double t0, double t1, double period);

}  // namespace nanotalbot

#pragma once

#include "nanotalbot/phase_space.hpp"

namespace nanotalbot {

struct FitOptions {
  double contrast_floor = 0.01;      ///< below this the pattern is flagged "no fringes"
  double residual_threshold = 0.05;  ///< rms residual / peak accepted as a good fit
  int max_evaluations = 4000;
};

struct PhaseReadout {
  double phase = 0;            ///< Phi in (-pi, pi]
  double contrast = 0;         ///< visibility (max-min)/(max+min) over the central three fringes
  double amplitude = 0;        ///< fitted cosine modulation depth (>= 0, may exceed 1)
  double residual = 0;         ///< rms(model - data) / peak
  double centroid = 0;         ///< first moment of the pattern [m]
  double envelope_center = 0;  ///< [m]
  double envelope_sigma = 0;   ///< [m]
  bool fringes_detected = false;
  bool fit_accepted = false;
};

/// Least-squares fit of A exp(-(x-mu)^2 / 2 s^2) (1 + c cos(2 pi x / period - Phi)).
/// The envelope is seeded from the pattern moments and the phase from its
/// projection on exp(-2 pi i x / period), so the fit is deterministic.
PhaseReadout extract_phase(const FringePattern& pattern, double period,
                           const FitOptions& options = {});

/// Wrap to (-pi, pi].
double wrap_phase(double phase);

}  // namespace nanotalbot

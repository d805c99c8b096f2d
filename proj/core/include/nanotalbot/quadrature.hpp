#pragma once

#include <functional>
#include <vector>

namespace nanotalbot {

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0;
  double abs_error = 0;
  long evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b]: the
/// interval with the largest error estimate is bisected until the total
/// estimate meets max(abs_tol, rel_tol |I|). Breakpoints inside (a, b)
/// seed the initial partition.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {},
                                    const std::vector<double>& breakpoints = {});

/// Nested adaptive integration of f(y, z) over [y0, y1] x [z0, z1]. The inner
/// integral runs at a tighter tolerance than the outer one.
QuadratureResult integrate_adaptive_2d(const std::function<double(double, double)>& f, double y0,
                                       double y1, double z0, double z1,
                                       const QuadratureOptions& options = {},
                                       const std::vector<double>& y_breaks = {},
                                       const std::vector<double>& z_breaks = {});

}  // namespace nanotalbot

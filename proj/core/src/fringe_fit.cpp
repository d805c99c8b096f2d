#include "nanotalbot/fringe_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <unsupported/Eigen/NonLinearOptimization>

#include "nanotalbot/error.hpp"

namespace nanotalbot {

using constants::pi;

double wrap_phase(double phase) {
  double w = std::remainder(phase, 2.0 * pi);
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

namespace {

// Fit in period units u = (x - x_ref) / period with the data scaled to unit peak.
// Parameters: amplitude, centre, width, modulation depth, phase at x_ref.
struct EnvelopeCosine {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const std::vector<double>& u;
  const std::vector<double>& w;

  int inputs() const { return 5; }
  int values() const { return static_cast<int>(u.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double z = (u[i] - p[1]) / p[2];
      f[static_cast<Eigen::Index>(i)] =
          p[0] * std::exp(-0.5 * z * z) * (1.0 + p[3] * std::cos(2.0 * pi * u[i] - p[4])) - w[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const double z = (u[i] - p[1]) / p[2];
      const double env = std::exp(-0.5 * z * z);
      const double c = std::cos(2.0 * pi * u[i] - p[4]);
      const double s = std::sin(2.0 * pi * u[i] - p[4]);
      const double mod = 1.0 + p[3] * c;
      jac(r, 0) = env * mod;
      jac(r, 1) = p[0] * env * mod * z / p[2];
      jac(r, 2) = p[0] * env * mod * z * z / p[2];
      jac(r, 3) = p[0] * env * c;
      jac(r, 4) = p[0] * env * p[3] * s;
    }
    return 0;
  }
};

}  // namespace

PhaseReadout extract_phase(const FringePattern& pattern, double period,
                           const FitOptions& options) {
  const auto n = pattern.density.size();
  detail::require(period > 0, "extract_phase: period must be > 0");
  detail::require(n == pattern.grid.count && n >= 16, "extract_phase: pattern too short");
  detail::require(period / pattern.grid.spacing >= 8.0,
                  "extract_phase: fewer than 8 samples per fringe period");

  const double peak = pattern.peak();
  if (!(peak > 0)) throw NumericalError("extract_phase: pattern has no positive density");

  double m0 = 0, m1 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    m0 += pattern.density[i];
    m1 += pattern.density[i] * pattern.grid.at(i);
  }
  const double centroid = m1 / m0;
  double m2 = 0;
  std::complex<double> proj = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = pattern.grid.at(i) - centroid;
    m2 += pattern.density[i] * dx * dx;
    proj += pattern.density[i] * std::polar(1.0, -2.0 * pi * dx / period);
  }
  proj /= m0;

  // Reference the phase to the centroid to keep the fit well conditioned.
  const double x_ref = centroid;
  std::vector<double> u(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = (pattern.grid.at(i) - x_ref) / period;
    w[i] = pattern.density[i] / peak;
  }

  const double sigma_u = std::sqrt(m2 / m0) / period;
  const double area_u = m0 * pattern.grid.spacing / period / peak;
  Eigen::VectorXd p(5);
  p << area_u / (std::sqrt(2.0 * pi) * sigma_u), 0.0, sigma_u,
      std::clamp(2.0 * std::abs(proj), 0.05, 1.0), -std::arg(proj);

  EnvelopeCosine functor{u, w};
  Eigen::LevenbergMarquardt<EnvelopeCosine> lm(functor);
  lm.parameters.maxfev = options.max_evaluations;
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  const auto status = lm.minimize(p);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters || !p.allFinite() ||
      p[2] == 0.0)
    throw NumericalError("extract_phase: fit diverged");

  double depth = p[3];
  double phase_ref = p[4];
  if (depth < 0) {
    depth = -depth;
    phase_ref += pi;
  }
  const double sigma = std::abs(p[2]) * period;
  const double center = x_ref + p[1] * period;

  Eigen::VectorXd f(static_cast<Eigen::Index>(n));
  functor(p, f);
  const double residual = std::sqrt(f.squaredNorm() / static_cast<double>(n));

  // visibility of the envelope-normalized pattern over three fringes
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pattern.grid.at(i);
    if (std::abs(x - center) > 1.5 * period) continue;
    const double z = (x - center) / sigma;
    const double v = std::max(0.0, pattern.density[i]) / std::exp(-0.5 * z * z);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double contrast = (hi > 0 && std::isfinite(lo)) ? (hi - lo) / (hi + lo) : 0.0;

  PhaseReadout out;
  // cos(2 pi (x - x_ref)/P - phase_ref) = cos(2 pi x/P - (phase_ref + 2 pi x_ref/P))
  out.phase = wrap_phase(phase_ref + 2.0 * pi * std::remainder(x_ref / period, 1.0));
  out.contrast = std::clamp(contrast, 0.0, 1.0);
  out.amplitude = depth;
  out.residual = residual;
  out.centroid = centroid;
  out.envelope_center = center;
  out.envelope_sigma = sigma;
  out.fringes_detected = out.contrast >= options.contrast_floor;
  out.fit_accepted = residual <= options.residual_threshold;
  return out;
}

}  // namespace nanotalbot

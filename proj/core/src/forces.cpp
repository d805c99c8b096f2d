#include "nanotalbot/forces.hpp"

#include <algorithm>
#include <cmath>

#include "nanotalbot/error.hpp"
#include "nanotalbot/parallel.hpp"

namespace nanotalbot {

using constants::G_N;
using constants::pi;
using detail::require;

void YukawaParams::validate() const {
  require(std::isfinite(alpha), "YukawaParams: alpha must be finite");
  require(std::isfinite(range) && range > 0, "YukawaParams: range must be > 0");
}

void Box::validate() const {
  require(x1 > x0 && y1 > y0 && z1 > z0, "Box: bounds must be increasing");
}

bool Box::contains(const Vec3& p) const {
  return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1 && p.z >= z0 && p.z <= z1;
}

void WallGeometry::validate() const {
  require(separation > 0, "WallGeometry: separation must be > 0");
  require(coating_density >= 0 && coating_thickness >= 0, "WallGeometry: invalid coating");
  require(section_width > 0 && section_depth > 0 && section_height > 0,
          "WallGeometry: section dimensions must be > 0");
  require(density_a >= 0 && density_b >= 0, "WallGeometry: densities must be >= 0");
  require(section_pairs >= 1, "WallGeometry: need at least one section pair");
}

WallGeometry WallGeometry::gold_silicon(double separation) {
  return {separation, materials::gold_density, 200e-9, 40e-6, materials::gold_density,
          materials::silicon_density, 100e-6, 1.5, 16};
}

void PatchModel::validate() const {
  require(amplitude >= 0 && scale > 0, "PatchModel: amplitude >= 0 and scale > 0 required");
}

double casimir_polder_accel(const DerivedSphere& sphere, double separation) {
  require(separation > 0, "casimir_polder_accel: separation must be > 0");
  const double force = 3.0 * constants::hbar * constants::c * sphere.polarizability /
                       (8.0 * pi * pi * constants::eps0 * std::pow(separation, 5));
  return force / sphere.mass;
}

double yukawa_accel_slab_inf(double density, const YukawaParams& yk, double separation,
                             double thickness) {
  yk.validate();
  require(separation > 0 && thickness > 0, "yukawa_accel_slab_inf: s and t must be > 0");
  return 2.0 * pi * G_N * density * yk.alpha * yk.range * std::exp(-separation / yk.range) *
         -std::expm1(-thickness / yk.range);
}

namespace {

struct Relative {
  double x0, x1, y0, y1, z0, z1;
};

Relative relative(const Box& b, const Vec3& p) {
  return {b.x0 - p.x, b.x1 - p.x, b.y0 - p.y, b.y1 - p.y, b.z0 - p.z, b.z1 - p.z};
}

std::vector<double> zero_break(double lo, double hi) {
  if (lo < 0 && hi > 0) return {0.0};
  return {};
}

// Face-difference integral of kernel(r) over (y, z).
template <class Kernel>
double face_integral(const Relative& r, double lo_y, double hi_y, double lo_z, double hi_z,
                     Kernel kernel, double rel_tol) {
  const auto integrand = [&](double y, double z) {
    const double q = y * y + z * z;
    return kernel(std::sqrt(r.x0 * r.x0 + q)) - kernel(std::sqrt(r.x1 * r.x1 + q));
  };
  QuadratureOptions opt;
  opt.rel_tol = rel_tol;
  opt.max_intervals = 4000;
  const auto res = integrate_adaptive_2d(integrand, lo_y, hi_y, lo_z, hi_z, opt,
                                         zero_break(lo_y, hi_y), zero_break(lo_z, hi_z));
  if (!res.converged)
    throw NumericalError("box quadrature did not converge (estimated error " +
                         std::to_string(res.abs_error) + ")");
  return res.value;
}

void require_outside(const Box& box, const Vec3& p) {
  box.validate();
  require(!box.contains(p), "box acceleration: sphere lies inside the source box");
  require(box.x0 > p.x || box.x1 < p.x || box.y0 > p.y || box.y1 < p.y || box.z0 > p.z ||
              box.z1 < p.z,
          "box acceleration: sphere lies inside the source box");
}

}  // namespace

double yukawa_accel_box(const Box& box, double density, const YukawaParams& yk,
                        const Vec3& sphere) {
  yk.validate();
  require_outside(box, sphere);
  if (yk.alpha == 0.0 || density == 0.0) return 0.0;
  const Relative r = relative(box, sphere);
  const double lambda = yk.range;

  // e^{-r/lambda} has fallen by e^{-40} from its value at the nearest x-face
  // beyond this lateral radius
  const double nearest = std::min(std::abs(r.x0), std::abs(r.x1));
  const double reach = std::sqrt(std::pow(nearest + 40.0 * lambda, 2) - nearest * nearest);
  const double lo_y = std::max(r.y0, -reach), hi_y = std::min(r.y1, reach);
  const double lo_z = std::max(r.z0, -reach), hi_z = std::min(r.z1, reach);
  if (lo_y >= hi_y || lo_z >= hi_z) return 0.0;

  const auto kernel = [lambda](double dist) { return std::exp(-dist / lambda) / dist; };
  return G_N * density * yk.alpha *
         face_integral(r, lo_y, hi_y, lo_z, hi_z, kernel, box_quadrature_rel_tol);
}

namespace {

// Closed-form integral of 1/sqrt(x^2 + y^2 + z^2) over y in [.., y], z in [.., z]
// (corner antiderivative).
// log(z + r) without cancellation for negative z
double log_sum(double z, double r, double rest_sq) {
  return z >= 0 ? std::log(z + r) : std::log(rest_sq / (r - z));
}

double corner(double x, double y, double z) {
  const double r = std::sqrt(x * x + y * y + z * z);
  double v = 0;
  if (y != 0) v += y * log_sum(z, r, x * x + y * y);
  if (z != 0) v += z * log_sum(y, r, x * x + z * z);
  if (x != 0) v -= x * std::atan(y * z / (x * r));
  return v;
}

double face_closed_form(double x, const Relative& r) {
  return corner(x, r.y1, r.z1) - corner(x, r.y0, r.z1) - corner(x, r.y1, r.z0) +
         corner(x, r.y0, r.z0);
}

}  // namespace

double newtonian_accel_box(const Box& box, double density, const Vec3& sphere) {
  require_outside(box, sphere);
  const Relative r = relative(box, sphere);
  return G_N * density * (face_closed_form(r.x0, r) - face_closed_form(r.x1, r));
}

double newtonian_accel_box_quadrature(const Box& box, double density, const Vec3& sphere,
                                      double rel_tol) {
  require_outside(box, sphere);
  const Relative r = relative(box, sphere);
  const auto kernel = [](double dist) { return 1.0 / dist; };
  return G_N * density * face_integral(r, r.y0, r.y1, r.z0, r.z1, kernel, rel_tol);
}

double source_cutoff(const WallGeometry& wall, const YukawaParams& yk) {
  return 6.0 * yk.range + 3.0 * wall.section_width;
}

WallAcceleration wall_accel(const WallGeometry& wall, const YukawaParams& yk, double y) {
  wall.validate();
  yk.validate();
  const Vec3 sphere{0.0, y, 0.0};
  const double cutoff = source_cutoff(wall, yk);
  const double x_front = wall.separation + wall.coating_thickness;
  const double half_h = 0.5 * wall.section_height;
  WallAcceleration out;

  if (wall.coating_thickness > 0 && wall.coating_density > 0) {
    // coating window travels with the sphere, so it is identical at every y
    const Box coat{wall.separation, x_front, y - cutoff, y + cutoff, -half_h, half_h};
    out.coating_newtonian = newtonian_accel_box(coat, wall.coating_density, sphere);
    out.coating_yukawa = yukawa_accel_box(coat, wall.coating_density, yk, sphere);
  }

  const double w = wall.section_width;
  for (int i = -wall.section_pairs; i < wall.section_pairs; ++i) {
    const double lo = (i - 0.5) * w, hi = (i + 0.5) * w;
    if (hi < y - cutoff || lo > y + cutoff) continue;
    const double rho = (i % 2 == 0) ? wall.density_a : wall.density_b;
    if (rho == 0.0) continue;
    const Box section{x_front, x_front + wall.section_depth, lo, hi, -half_h, half_h};
    out.newtonian += newtonian_accel_box(section, rho, sphere);
    out.yukawa += yukawa_accel_box(section, rho, yk, sphere);
  }
  return out;
}

DifferentialSignal differential_accel(const WallGeometry& wall, const YukawaParams& yk,
                                      double y0) {
  const WallAcceleration a = wall_accel(wall, yk, y0);
  const WallAcceleration b = wall_accel(wall, yk, y0 + wall.section_width);
  return {a.newtonian - b.newtonian, a.yukawa - b.yukawa,
          (a.coating_newtonian + a.coating_yukawa) - (b.coating_newtonian + b.coating_yukawa)};
}

std::vector<ScanPoint> scan_y(const WallGeometry& wall, const YukawaParams& yk,
                              const std::vector<double>& ys, int jobs) {
  std::vector<ScanPoint> out(ys.size());
  parallel_for(ys.size(), jobs,
               [&](std::size_t i) { out[i] = {ys[i], wall_accel(wall, yk, ys[i]).total()}; });
  return out;
}

double patch_accel_estimate(const PatchModel& patch, const DerivedSphere& sphere,
                            double separation) {
  patch.validate();
  require(separation > 0, "patch_accel_estimate: separation must be > 0");
  const double decay = pi / patch.scale;
  const double field = decay * patch.amplitude * std::exp(-decay * separation);
  const double gradient = decay * field;
  return sphere.polarizability * field * gradient / sphere.mass;
}

}  // namespace nanotalbot

#pragma once

/**
 * @file forces.hpp
 * @brief Transverse accelerations on the falling sphere: Casimir-Polder,
 *        Newtonian and Yukawa attraction from a segmented source wall, and a
 *        patch-potential estimate.
 *
 * Coordinates: the sphere sits at the origin, the wall occupies x > s.
 * Positive accelerations point toward the wall (+x). Sections of the wall
 * alternate between material A (even index) and B (odd index) along y;
 * section i spans [(i - 1/2) w_y, (i + 1/2) w_y].
 */

#include <vector>

#include "nanotalbot/physics.hpp"
#include "nanotalbot/quadrature.hpp"

namespace nanotalbot {

struct YukawaParams {
  double alpha;  ///< strength relative to gravity, any sign
  double range;  ///< lambda [m], > 0

  void validate() const;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

/// Axis-aligned rectangular volume [x0,x1] x [y0,y1] x [z0,z1] in metres.
struct Box {
  double x0, x1, y0, y1, z0, z1;

  void validate() const;
  bool contains(const Vec3& p) const;
};

struct WallGeometry {
  double separation;         ///< sphere to coating surface s [m]
  double coating_density;    ///< [kg/m^3]
  double coating_thickness;  ///< [m]
  double section_width;      ///< w_y [m]
  double density_a;          ///< [kg/m^3]
  double density_b;          ///< [kg/m^3]
  double section_depth;      ///< t_x [m]
  double section_height;     ///< h_z [m], centred on the sphere's fall midpoint
  int section_pairs;         ///< sections indexed -pairs .. pairs-1

  void validate() const;
  /// Gold-on-gold/silicon wall of the differential measurement.
  static WallGeometry gold_silicon(double separation);
};

struct PatchModel {
  double amplitude;  ///< V_p [V]
  double scale;      ///< Lambda [m]

  void validate() const;
};

/// |F_cp| / M with F_cp = 3 hbar c alpha / (8 pi^2 eps0 s^5), directed toward the wall.
double casimir_polder_accel(const DerivedSphere& sphere, double separation);

/// 2 pi G rho alpha lambda e^{-s/lambda} (1 - e^{-t/lambda}) for an infinite slab.
double yukawa_accel_slab_inf(double density, const YukawaParams& yk, double separation,
                             double thickness);

/// Quadrature target for the box integrals (relative).
inline constexpr double box_quadrature_rel_tol = 1e-6;

/// x-component of the Yukawa acceleration from a uniform box. The x
/// integration is done analytically (the kernel is -d/dx of e^{-r/lambda}/r),
/// the remaining (y, z) integral by nested adaptive quadrature, restricted to
/// the region where e^{-r/lambda} is within e^{-40} of its nearest-face value.
double yukawa_accel_box(const Box& box, double density, const YukawaParams& yk,
                        const Vec3& sphere);

/// Newtonian x-acceleration from a uniform box in closed form.
double newtonian_accel_box(const Box& box, double density, const Vec3& sphere);

/// Same quantity by the reduced 2D quadrature (validation path).
double newtonian_accel_box_quadrature(const Box& box, double density, const Vec3& sphere,
                                      double rel_tol = 1e-9);

struct WallAcceleration {
  double newtonian = 0;
  double yukawa = 0;
  double coating_newtonian = 0;
  double coating_yukawa = 0;
  double total() const { return newtonian + yukawa + coating_newtonian + coating_yukawa; }
};

/// Material within this distance of the sphere's y is summed.
double source_cutoff(const WallGeometry& wall, const YukawaParams& yk);

/// Acceleration on a sphere at lateral position y (fall midpoint z = 0).
WallAcceleration wall_accel(const WallGeometry& wall, const YukawaParams& yk, double y);

struct DifferentialSignal {
  double newtonian = 0;  ///< sections only
  double yukawa = 0;     ///< sections only
  double coating = 0;    ///< coating term difference; identical geometry on both sides
  double total() const { return newtonian + yukawa + coating; }
};

/// a_x(y0 over an A section) - a_x(y0 + w_y over the neighbouring B section).
DifferentialSignal differential_accel(const WallGeometry& wall, const YukawaParams& yk,
                                      double y0 = 0.0);

struct ScanPoint {
  double y;
  double accel;
};

std::vector<ScanPoint> scan_y(const WallGeometry& wall, const YukawaParams& yk,
                              const std::vector<double>& ys, int jobs = 1);

/// Order-of-magnitude patch force: E(s) = (pi V/Lambda) e^{-pi s/Lambda},
/// F = alpha E |dE/ds|, returned as F/M.
double patch_accel_estimate(const PatchModel& patch, const DerivedSphere& sphere,
                            double separation);

}  // namespace nanotalbot

// Projection bodies, polar volumes, affine and classical perimeters, equal-
// volume rounding, and the isoperimetric inequality report.

#ifndef AFFBV_FUNCTIONALS_HPP
#define AFFBV_FUNCTIONALS_HPP

#include "affbv/core.hpp"
#include "affbv/geometry.hpp"
#include "affbv/sphere.hpp"

namespace affbv {

/// Zonotope with support h(v) = sum_i half_weight_i |v . direction_i|.
struct ProjectionBody {
  int dim = 0;
  std::vector<SurfaceAtom> generators;  // weight here is w_i / 2

  double support(const Vec& v) const;
};

ProjectionBody projection_body(const SurfaceAreaMeasure& S);

/// V of the polar of the zonotope: (1/n) * integral of h^{-n} over S^{n-1}.
/// Exact arc integration in the plane, product quadrature for n >= 3.
/// Returns +inf when the generators do not span (lower-dimensional body).
double polar_volume(const ProjectionBody& Z, const Engine& eng);

/// (2^n omega_n)^{1/n} * V(polar projection body)^{-1/n}; zero for sets whose
/// normals do not span R^n. Translation- and SL(n)-invariant, scales as r^{n-1}.
double affine_perimeter(const Polytope& E, const Engine& eng);

/// Same value for convex polytopes; rejects non-convex input.
double affine_surface_area(const Polytope& K, const Engine& eng);

/// Centered ball of the same volume, as a regular 2^k-gon (2D) or icosphere (3D).
Polytope rounding(const Polytope& E, const Engine& eng);

/// Equal-volume ball radius (V(E)/omega_n)^{1/n}.
double rounding_radius(const Polytope& E);

struct PerimeterReport {
  double V = 0;
  double P_BV = 0;
  double P_BVd = 0;
  double V_polar = 0;      // +inf for lower-dimensional sets
  double petty_ratio = 0;  // V^{n-1} V(polar) / (omega_n/omega_{n-1})^n, <= 1
  double iso_classical = 0;
  double iso_affine = 0;
  double slack_e12P = 0;   // P_BV/(n omega_n) - P_BVd/(2 omega_{n-1}), >= 0
};

PerimeterReport inequality_report(const Polytope& E, const Engine& eng);

}  // namespace affbv

#endif

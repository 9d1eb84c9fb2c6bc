#include "affbv/functionals.hpp"

#include <cmath>

namespace affbv {

double ProjectionBody::support(const Vec& v) const {
  double s = 0;
  for (const SurfaceAtom& g : generators) s += g.weight * std::fabs(dot(v, g.direction));
  return s;
}

ProjectionBody projection_body(const SurfaceAreaMeasure& S) {
  if (S.atoms.empty()) throw InvalidPolytopeError("projection_body: empty measure");
  ProjectionBody Z;
  Z.dim = S.dim;
  Z.generators.reserve(S.atoms.size());
  for (const SurfaceAtom& a : S.atoms) Z.generators.push_back({a.direction, 0.5 * a.weight});
  return Z;
}

double polar_volume(const ProjectionBody& Z, const Engine& eng) {
  int n = Z.dim;
  {
    // Linear span test: rank of {0, dir_1, ...} rooted at the origin.
    std::vector<Vec> dirs{Vec(n, 0.0)};
    for (const SurfaceAtom& g : Z.generators) dirs.push_back(g.direction);
    if (affine_rank(dirs) < n) return HUGE_VAL;
  }
  if (n == 2) {
    std::vector<Vec> dirs;
    std::vector<double> coeffs;
    for (const SurfaceAtom& g : Z.generators) {
      dirs.push_back(g.direction);
      coeffs.push_back(g.weight);
    }
    PiecewiseCosineProfile prof = cosine_profile(dirs, coeffs);
    if (prof.degenerate) return HUGE_VAL;
    return 0.5 * exact_2d_negative_square_integral(prof);
  }
  try {
    if (n == 3 && Z.generators.size() <= 64) {
      // Small atom sets take the semi-exact arc/panel path.
      std::vector<Vec> dirs;
      std::vector<double> coeffs;
      for (const SurfaceAtom& g : Z.generators) {
        dirs.push_back(g.direction);
        coeffs.push_back(g.weight);
      }
      return zonotope_negative_cube_integral(dirs, coeffs, eng.quad_order) / n;
    }
    QuadratureRule rule = build_rule(n, eng.quad_order);
    double integral = integrate_negative_power([&Z](const Vec& u) { return Z.support(u); }, n,
                                               rule, eng.workers);
    return integral / n;
  } catch (const DivergentIntegralError&) {
    return HUGE_VAL;
  }
}

double affine_perimeter(const Polytope& E, const Engine& eng) {
  if (E.facets.empty()) return 0.0;  // lower-dimensional set
  SurfaceAreaMeasure S = surface_area_measure(E);
  double vp = polar_volume(projection_body(S), eng);
  if (!std::isfinite(vp)) return 0.0;
  int n = E.dim;
  return std::pow(std::pow(2.0, n) * omega(n), 1.0 / n) * std::pow(vp, -1.0 / n);
}

double affine_surface_area(const Polytope& K, const Engine& eng) {
  if (!is_convex(K, eng.tol))
    throw ConvexityError("affine_surface_area: input polytope is not convex");
  return affine_perimeter(K, eng);
}

double rounding_radius(const Polytope& E) {
  double v = volume(E);
  if (!(v > 0)) throw DomainError("rounding: zero-volume set");
  return std::pow(v / omega(E.dim), 1.0 / E.dim);
}

Polytope rounding(const Polytope& E, const Engine& eng) {
  double r = rounding_radius(E);
  if (E.dim == 2) return regular_polygon(eng.ball_segments_2d, r);
  if (E.dim == 3) return icosphere(eng.icosphere_level, r);
  throw DomainError("rounding: ball approximations only for n = 2, 3");
}

PerimeterReport inequality_report(const Polytope& E, const Engine& eng) {
  int n = E.dim;
  PerimeterReport rep;
  rep.V = volume(E);
  if (!(rep.V > 0)) throw DomainError("inequality_report: V(E) must be positive");
  SurfaceAreaMeasure S = surface_area_measure(E);
  rep.P_BV = classical_perimeter(S);
  rep.V_polar = polar_volume(projection_body(S), eng);
  rep.P_BVd = std::isfinite(rep.V_polar)
                  ? std::pow(std::pow(2.0, n) * omega(n), 1.0 / n) * std::pow(rep.V_polar, -1.0 / n)
                  : 0.0;
  double wn = omega(n), wn1 = omega(n - 1);
  rep.petty_ratio = std::isfinite(rep.V_polar)
                        ? std::pow(rep.V, n - 1) * rep.V_polar / std::pow(wn / wn1, n)
                        : 0.0;
  rep.iso_classical =
      std::pow(rep.V / wn, 1.0 / n) / std::pow(rep.P_BV / (n * wn), 1.0 / (n - 1));
  rep.iso_affine = rep.P_BVd > 0
                       ? std::pow(rep.V / wn, 1.0 / n) / std::pow(rep.P_BVd / (2.0 * wn1), 1.0 / (n - 1))
                       : HUGE_VAL;
  rep.slack_e12P = rep.P_BV / (n * wn) - rep.P_BVd / (2.0 * wn1);
  return rep;
}

}  // namespace affbv

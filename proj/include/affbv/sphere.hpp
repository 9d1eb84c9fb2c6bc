// Integration over S^{n-1} of integrands h(u)^{-n}: a closed-form arc
// integrator in the plane and symmetric product quadrature rules for n >= 3.

#ifndef AFFBV_SPHERE_HPP
#define AFFBV_SPHERE_HPP

#include <functional>

#include "affbv/core.hpp"
#include "affbv/geometry.hpp"

namespace affbv {

// ---------------------------------------------------------------------------
// Quadrature on S^{n-1}, n >= 3
// ---------------------------------------------------------------------------

struct QuadratureRule {
  int dim = 0;
  std::vector<Vec> nodes;       // unit vectors
  std::vector<double> weights;  // sum = n * omega(n)

  double total_weight() const;
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Product rule on S^{n-1}: Gauss-Legendre in the polar coordinate times a
/// uniform azimuth (n = 3), recursing over a sub-sphere rule for n > 3.
/// Antipodally symmetric; weights normalized so the constant 1 integrates to
/// the sphere measure n*omega(n).
QuadratureRule build_rule(int n, int order);

/// sum_i w_i h(u_i)^{-n}. Throws DivergentIntegralError when h at some node
/// falls below 1e-12 of the max (the polar body is unbounded).
double integrate_negative_power(const std::function<double(const Vec&)>& h, int n,
                                const QuadratureRule& rule, int workers = 1);

/// integral of h(u)^{-3} over S^2 for a zonotope support
/// h(u) = sum_i coeff_i |u . dir_i|. The azimuth direction is decomposed into
/// arcs of constant sign pattern (integrated by chunked Gauss nodes, which is
/// exact to machine precision there); the polar direction uses Gauss-Legendre
/// panels split at the tangency latitudes cos(theta) = +-|dir_z-complement|.
/// Far better order-convergence than the product rule on kinked supports.
double zonotope_negative_cube_integral(const std::vector<Vec>& directions,
                                       const std::vector<double>& coefficients, int order);

// ---------------------------------------------------------------------------
// Exact plane path
// ---------------------------------------------------------------------------

/// One arc of a piecewise-cosine support profile: h(t) = amplitude * cos(t - phase)
/// for t in [t0, t1].
struct CosineArc {
  double t0, t1;
  double amplitude;
  double phase;
};

struct PiecewiseCosineProfile {
  std::vector<CosineArc> arcs;  // partition of [0, 2pi)
  bool degenerate = false;      // profile touches zero (flat body)
  double min_value = 0;
  double max_value = 0;

  double eval(double theta) const;
};

/// Profile of h(t) = sum_i coeff_i |cos(t - alpha_i)| for planar directions
/// alpha_i. Arcs split at every alpha_i and alpha_i +- pi/2.
PiecewiseCosineProfile cosine_profile(const std::vector<Vec>& directions,
                                      const std::vector<double>& coefficients);

/// Profile of the projection-body support h(t) = (1/2) sum w_i |cos(t - alpha_i)|.
PiecewiseCosineProfile cosine_profile_from_atoms(const SurfaceAreaMeasure& S);

/// Exact integral of h^{-2} over S^1 via the tan antiderivative per arc.
/// Throws DivergentIntegralError for degenerate profiles.
double exact_2d_negative_square_integral(const PiecewiseCosineProfile& profile);

}  // namespace affbv

#endif

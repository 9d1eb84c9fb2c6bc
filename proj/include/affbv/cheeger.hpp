// Affine q-Cheeger constants of planar domains by set optimization, and the
// affine Rayleigh quotient on piecewise-linear functions over a triangulation.

#ifndef AFFBV_CHEEGER_HPP
#define AFFBV_CHEEGER_HPP

#include <array>
#include <cstdint>

#include "affbv/core.hpp"
#include "affbv/functionals.hpp"
#include "affbv/geometry.hpp"

namespace affbv {

struct DomainMesh {
  Polytope domain;  // convex polygon
  std::vector<Vec> verts;
  std::vector<std::array<int, 3>> tris;
  std::vector<bool> boundary;
  double h = 0;

  // Per-triangle area and per-vertex gradient coefficient vectors:
  // grad f |_t = sum_k values[tri[k]] * gcoef[t][k].
  struct TriGeom {
    double area;
    std::array<Vec, 3> gcoef;
  };
  std::vector<TriGeom> geom;

  int interior_count() const;
};

/// Onion-ring triangulation of a convex polygon: scaled boundary copies at
/// radial spacing <= h, stitched ring by ring. Covers the polygon exactly.
DomainMesh build_mesh(const Polytope& O, double h);

struct GridFunction {
  const DomainMesh* mesh = nullptr;
  std::vector<double> values;  // zero on the boundary ring

  bool zero() const;
};

GridFunction zero_function(const DomainMesh& mesh);

/// Distance-to-boundary ramp capped at 1: the mollified-indicator profile.
GridFunction boundary_ramp(const DomainMesh& mesh, double width);

/// q^{(1-q)/q} * (pq/(p-(p-1)q)) * |f|_{W^{1,p}_d} / |f|_{L^{pq/(p-(p-1)q)}}.
/// For p = 1 the sphere integral is evaluated by the exact arc integrator.
double affine_rayleigh(const GridFunction& f, double p, double q, const Engine& eng);

struct CheegerConfig {
  int ellipse_segments = 48;
  std::vector<double> aspects{1.0, 1.5, 2.0, 3.0};
  int phases = 4;
  int center_grid = 3;
  int descent_iters = 50;
};

struct CheegerResult {
  double q = 1;
  double value = 0;                      // upper bound for the affine Cheeger constant
  Polytope witness;                      // best subset found
  double boundary_contact_distance = 0;  // min dist from witness boundary to domain boundary
  double classical_value = 0;            // P_BV(witness)/V(witness)^{1/q}
  bool converged = false;
};

/// Two-stage search over subsets D of O minimizing P_BVd(D)/V(D)^{1/q}:
/// a parametric inscribed-ellipse family, then polygon vertex descent with
/// moves projected back onto the domain boundary. Always also evaluates D = O.
CheegerResult affine_cheeger(const Polytope& O, double q, const CheegerConfig& cfg,
                             uint64_t seed, const Engine& eng);

double boundary_contact(const Polytope& witness, const Polytope& O);

struct RayleighMinimum {
  double value = 0;
  GridFunction f;
  bool converged = false;
  std::vector<std::pair<int, double>> trace;  // (iteration, value)
};

/// Projected-gradient descent over grid functions, backtracking on the exact
/// quotient; starts from the boundary-ramp profile.
RayleighMinimum minimize_rayleigh(const DomainMesh& mesh, double p, double q, int iterations,
                                  uint64_t seed, const Engine& eng);

}  // namespace affbv

#endif

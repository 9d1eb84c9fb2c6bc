// Polytope representation: vertex/facet lists with outward unit normals and
// facet measures, convex hulls in dimension 2..6, volumes via the divergence
// theorem, support functions, linear images and surface area measures.

#ifndef AFFBV_GEOMETRY_HPP
#define AFFBV_GEOMETRY_HPP

#include <array>
#include <optional>
#include <vector>

#include "affbv/core.hpp"

namespace affbv {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct Facet {
  Vec normal;                    // outward, unit
  double measure = 0;            // H^{n-1} of the facet
  double offset = 0;             // normal . x for x on the facet plane
  std::vector<int> vertex_ids;   // incidence loop when known (empty otherwise)
};

struct Polytope {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<Facet> facets;
  mutable std::optional<double> volume_cache;
  mutable std::optional<bool> convex_cache;  // for the default tolerance

  bool has_incidence() const;
  double diameter_bound() const;  // max vertex distance from the vertex mean
  Vec vertex_mean() const;
};

struct SurfaceAtom {
  Vec direction;  // unit
  double weight;  // > 0
};

struct SurfaceAreaMeasure {
  int dim = 0;
  std::vector<SurfaceAtom> atoms;

  double total() const;
};

struct LinearMap {
  int dim = 0;
  std::vector<double> a;  // row-major n x n
  Vec translation;
  double det = 0;

  double entry(int i, int j) const { return a[i * dim + j]; }
  Vec apply(const Vec& x) const;          // a*x + translation
  Vec apply_linear(const Vec& x) const;   // a*x
  bool is_sl(double tol = 1e-10) const { return std::fabs(det - 1.0) < tol; }

  static LinearMap identity(int n);
  static LinearMap scaling(int n, double r);
  static LinearMap diagonal(const Vec& d);
  static LinearMap translation_by(const Vec& t);
  static LinearMap rotation2d(double angle);
  static LinearMap rotation3d(const Vec& axis, double angle);
  static LinearMap from_matrix(int n, const std::vector<double>& rowmajor,
                               const Vec& translation = {});
};

LinearMap compose(const LinearMap& second, const LinearMap& first);  // second after first
LinearMap inverse(const LinearMap& T);

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// Simple closed polygon from an ordered vertex loop (either orientation);
/// facets are the edges with outward unit normals.
Polytope make_polygon(const std::vector<Vec>& loop);

/// Union of disjoint simple loops (planar polyhedral set, possibly non-convex).
Polytope make_polygon_multi(const std::vector<std::vector<Vec>>& loops);

/// Polyhedron from explicit facet loops over a shared vertex list. Loops must
/// be oriented so that the Newell normal points outward.
Polytope make_polyhedron(const std::vector<Vec>& vertices,
                         const std::vector<std::vector<int>>& facet_loops);

/// Lower-dimensional compact set: vertices only, no boundary facets.
Polytope make_flat(int dim, const std::vector<Vec>& vertices);

Polytope convex_hull(const std::vector<Vec>& points);

Polytope regular_polygon(int segments, double radius, const Vec& center = {});
Polytope icosphere(int level, double radius);
Polytope box(const Vec& lo, const Vec& hi);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

SurfaceAreaMeasure surface_area_measure(const Polytope& P, double merge_angle = 1e-10);

double classical_perimeter(const SurfaceAreaMeasure& S);

double volume(const Polytope& P);

double support(const Polytope& P, const Vec& v);

Polytope apply_map(const Polytope& P, const LinearMap& T);

/// Closed-boundary check: ||sum w_i nu_i|| <= 1e-9 * sum w_i, unit normals,
/// positive measures. Throws InvalidPolytopeError on violation.
void validate(const Polytope& P, const Tolerances& tol = {});

bool is_convex(const Polytope& P, const Tolerances& tol = {});

/// Affine rank of a point set (dimension of its affine hull).
int affine_rank(const std::vector<Vec>& pts, double tol = 1e-9);

/// Point membership. Convex polytopes use facet inequalities; planar
/// non-convex ones use the winding rule over boundary loops.
bool contains_point(const Polytope& P, const Vec& x, double tol = 1e-9);

/// Boundary loops of a planar polytope in edge order (vertex index cycles).
std::vector<std::vector<int>> boundary_loops(const Polytope& P);

}  // namespace affbv

#endif

// Steiner symmetrization of polyhedral sets via chord partitions: the base
// region in u-perp is cut into cells on which every chord endpoint is an
// affine function, the symmetral is assembled from the centered chord graphs.

#ifndef AFFBV_SYMMETRIZE_HPP
#define AFFBV_SYMMETRIZE_HPP

#include "affbv/core.hpp"
#include "affbv/functionals.hpp"
#include "affbv/geometry.hpp"

namespace affbv {

/// Chord interval over a cell: enter/exit heights affine in the base point z.
struct ChordInterval {
  Vec enter_grad;
  double enter_const = 0;
  Vec exit_grad;
  double exit_const = 0;
};

struct ChordCell {
  std::vector<Vec> base;               // 1D: {{a},{b}}; 2D: convex polygon, CCW
  std::vector<ChordInterval> intervals;
  Vec m_grad;                          // total chord length m(z), affine
  double m_const = 0;
  double base_measure = 0;

  double m_at(const Vec& z) const { return dot(m_grad, z) + m_const; }
};

struct ChordPartition {
  int dim = 0;
  Vec direction;            // u
  std::vector<Vec> basis;   // orthonormal basis of u-perp, size dim-1
  std::vector<ChordCell> cells;

  Vec to_base(const Vec& x) const;                  // coordinates in u-perp
  Vec to_world(const Vec& z, double t) const;       // z in base coords
  double chord_length(const Vec& z) const;          // 0 outside all cells
};

/// Cells from projecting every facet to u-perp and overlaying the pieces.
/// 2D handles facets parallel to u exactly (they become jump walls); in 3D
/// such facets raise OrthogonalFacetError and steiner() falls back to a tiny
/// recorded rotation.
ChordPartition chord_partition(const Polytope& E, const Vec& u, const Tolerances& tol = {});

struct SteinerResult {
  Vec direction;
  Polytope output;
  double volume_before = 0, volume_after = 0;
  double affine_before = 0, affine_after = 0;
  double classical_before = 0, classical_after = 0;
  double perturbation_angle = 0;
  bool affine_monotone = false;
  bool classical_monotone = false;
  bool volume_preserved = false;
  std::string diagnostic;  // filled when a check fails
};

SteinerResult steiner(const Polytope& E, const Vec& u, const Engine& eng);

/// steiner() plus the monotonicity and volume assertions; failing runs
/// carry a serialized counterexample in `diagnostic`.
SteinerResult verify_monotonicity(const Polytope& E, const Vec& u, const Engine& eng);

struct RoundingCheck {
  double affine_input = 0;
  double affine_rounded = 0;
  double radius = 0;
  bool ok = false;
};

/// Rounding monotonicity: equal-volume ball has no larger affine perimeter.
RoundingCheck verify_rounding(const Polytope& E, const Engine& eng);

struct SymmetrizationTraceRow {
  int step;
  double affine;
  double classical;
  double petty_ratio;
};

std::vector<SymmetrizationTraceRow> iterate_symmetrization(const Polytope& E,
                                                           const std::vector<Vec>& directions,
                                                           int max_steps, const Engine& eng);

/// Max over sampled boundary points p of S_u(polar projection body of E) of
/// h_{Pi S_u(E)}(p) - 1; inclusion holds when this is <= 0 (up to tolerance).
double steiner_polar_inclusion_deficit(const Polytope& E, const Vec& u, int samples,
                                       const Engine& eng);

}  // namespace affbv

#endif

// Affine BV-capacity: exact values on convex bodies, certified lower/upper
// brackets for general compact polyhedral sets, the metric property suite,
// the union superadditivity instance, and discrete-measure trace constants.

#ifndef AFFBV_CAPACITY_HPP
#define AFFBV_CAPACITY_HPP

#include <cstdint>
#include <string>

#include "affbv/core.hpp"
#include "affbv/functionals.hpp"
#include "affbv/geometry.hpp"

namespace affbv {

/// Capacity of a convex body equals its affine perimeter.
double capacity_convex(const Polytope& K, const Engine& eng);

struct CandidateFamily {
  bool dilations = true;     // hull scaled about its centroid
  bool offsets = true;       // vertex-rounded pads of the hull
  bool grid = true;          // axis-aligned outer covers (2D)
  bool boxes = true;         // padded bounding boxes (covers flat sets)
  bool local_search = true;  // vertex descent on a convex superset (2D)
  bool shadow_bound = true;  // certified projection lower bound (2D)
  std::vector<double> dilation_eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> pad_fractions{1e-1, 1e-2, 1e-3, 2.5e-5, 2.5e-7};  // of the diameter
  std::vector<int> grid_resolutions{8, 16, 32};
  int search_iters = 120;
  int shadow_samples = 4096;
  int subset_seeds = 5;       // per axis, for inscribed-box growth
  uint64_t seed = 0;
};

struct CapacityBracket {
  double lower = 0;
  double upper = 0;
  Polytope lower_witness;  // best inscribed convex subset found
  Polytope upper_witness;  // best open superset found
  bool exact = false;      // convex input: lower == upper == C(K)
  std::string note;
};

/// lower <= C(K) <= upper. Upper from open polyhedral supersets; lower from
/// inscribed convex subsets and (2D) the projection-shadow bound: any open
/// superset L of K satisfies h_{Pi L}(u) >= H^{n-1}(K | u-perp) pointwise, so
/// the shadow function alone certifies a capacity lower bound.
CapacityBracket capacity_bracket(const Polytope& K, const CandidateFamily& family,
                                 const Engine& eng);

/// The 2D certified shadow lower bound on its own (0 for flat sets).
double shadow_capacity_lower_bound(const Polytope& K, int angular_samples, const Engine& eng);

struct PropertyCheck {
  std::string name;
  bool pass = false;
  double worst = 0;  // worst relative deviation seen
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_pass() const;
};

/// Checks: boundary identity, r^{n-1} scaling, SL(n)+translation invariance,
/// monotonicity under inclusion, decreasing intersections, outer regularity.
PropertyReport property_suite(const Polytope& K, uint64_t seed, const Engine& eng);

struct CrossReport {
  double cap_E = 0;
  double cap_F = 0;
  double sum = 0;
  double p_G = 0;           // affine perimeter of the inscribed-shadow diamond
  double bracket_lower = 0;
  bool superadditive = false;
  std::string verdict;      // "confirmed" or "inconclusive at this effort"
};

/// The two long thin rectangles whose union has capacity above the sum.
CrossReport cross_counterexample(const Engine& eng);

struct DiscreteMeasure {
  std::vector<Vec> points;
  std::vector<double> masses;

  double total() const;
  /// Mass inside the polytope; closed sets include boundary atoms, open
  /// sets exclude them.
  double mass_in(const Polytope& K, bool closed, double tol = 1e-9) const;
};

struct TraceConstants {
  double q = 1;
  double kappa2_hat = 0;        // best mu(K)^{1/q} / C(K) over the closed family
  double kappa3_hat = 0;        // best mu(int K)^{1/q} / P_BVd(K)
  double feasibility_slack = 0; // q^{1/q} * kappa3_hat, the guaranteed kappa1 bound
};

TraceConstants trace_constants(const DiscreteMeasure& mu, double q,
                               const std::vector<Polytope>& test_family, const Engine& eng);

}  // namespace affbv

#endif

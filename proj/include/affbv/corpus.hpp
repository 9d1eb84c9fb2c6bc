// Seeded random test-set generators: convex polygons via Gaussian hulls,
// star-shaped non-convex polygons, 3D hulls and unimodular maps.

#ifndef AFFBV_CORPUS_HPP
#define AFFBV_CORPUS_HPP

#include <random>

#include "affbv/geometry.hpp"

namespace affbv {

using Rng = std::mt19937_64;

Polytope random_convex_polygon(Rng& rng, int points = 12);

/// Star-shaped simple polygon with jittered angles and radii in [0.35, 1.3].
Polytope random_star_polygon(Rng& rng, int vertices = 14);

Polytope random_convex_polytope3(Rng& rng, int points = 14);

Vec random_direction(Rng& rng, int dim);

/// Random SL(n) map with a bound on the condition number (Frobenius estimate).
LinearMap random_sl(Rng& rng, int dim, double max_condition = 100.0);

Vec random_translation(Rng& rng, int dim, double scale = 3.0);

}  // namespace affbv

#endif

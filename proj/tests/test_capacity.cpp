#include <doctest.h>

#include <random>

#include "affbv/capacity.hpp"
#include "affbv/corpus.hpp"

using namespace affbv;

namespace {

Engine eng;

Polytope unit_square() { return convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace

TEST_CASE("capacity of convex bodies equals the affine perimeter") {
  CHECK(capacity_convex(regular_polygon(1 << 14, 1.0), eng) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(capacity_convex(icosphere(4, 1.0), eng) == doctest::Approx(2.0 * M_PI).epsilon(3e-3));
  // 1000 x 10 rectangle: SL(2)-equivalent to the 100 x 100 square
  Polytope rect = box(Vec{0, 0}, Vec{1000, 10});
  CHECK(capacity_convex(rect, eng) == doctest::Approx(100.0 * std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  Polytope star = make_polygon({{1, 0}, {0.1, 0.1}, {0, 1}, {-1, 0}, {0, -1}});
  CHECK_THROWS_AS(capacity_convex(star, eng), ConvexityError);
}

TEST_CASE("bracket collapses on convex input") {
  CandidateFamily fam;
  CapacityBracket br = capacity_bracket(unit_square(), fam, eng);
  CHECK(br.exact);
  CHECK(br.lower == doctest::Approx(br.upper).epsilon(1e-12));
  CHECK(br.lower == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("bracket on two separated diamonds") {
  Polytope two = make_polygon_multi(
      {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{4, 0}, {3, 1}, {2, 0}, {3, -1}}});
  CandidateFamily fam;
  CapacityBracket br = capacity_bracket(two, fam, eng);
  double one_diamond = std::sqrt(2.0 * M_PI * 2.0);  // affine perimeter of one diamond
  CHECK(br.lower >= one_diamond - 1e-9);
  CHECK(br.upper <= affine_perimeter(convex_hull(two.vertices), eng) * 1.2);
  CHECK(br.lower <= br.upper + 1e-9);
}

TEST_CASE("flat segment: upper bound collapses, lower bound is zero") {
  Polytope seg = make_flat(2, {{-1, 0}, {1, 0}});
  CandidateFamily fam;
  CapacityBracket br = capacity_bracket(seg, fam, eng);
  CHECK(br.lower == 0.0);
  // thinnest rectangle in the schedule has width 1e-6: sqrt(2 pi * 2e-6)
  CHECK(br.upper < 1e-2);
  CHECK(br.upper == doctest::Approx(std::sqrt(2.0 * M_PI * 2.0 * 1e-6)).epsilon(1e-3));
}

TEST_CASE("shadow lower bound is tight for convex bodies") {
  Rng rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    Polytope P = random_convex_polygon(rng, 10);
    double cap = capacity_convex(P, eng);
    double sb = shadow_capacity_lower_bound(P, 4096, eng);
    CHECK(sb <= cap + 1e-9);
    CHECK(sb >= 0.995 * cap);  // Lipschitz safety margin only
  }
}

TEST_CASE("bracket monotone in family effort") {
  Polytope two = make_polygon_multi(
      {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{4, 0}, {3, 1}, {2, 0}, {3, -1}}});
  CandidateFamily small;
  small.grid = small.offsets = small.local_search = false;
  small.dilation_eps = {1e-1};
  CandidateFamily big;
  CapacityBracket bs = capacity_bracket(two, small, eng);
  CapacityBracket bb = capacity_bracket(two, big, eng);
  CHECK(bb.upper <= bs.upper + 1e-12);
  CHECK(bb.lower >= bs.lower - 1e-12);
}

TEST_CASE("property suite on the unit square") {
  PropertyReport rep = property_suite(unit_square(), 7, eng);
  for (const PropertyCheck& c : rep.checks) {
    INFO(c.name, " worst=", c.worst);
    CHECK(c.pass);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("capacity scaling and shear instances") {
  double c1 = capacity_convex(unit_square(), eng);
  Polytope doubled = apply_map(unit_square(), LinearMap::scaling(2, 2.0));
  CHECK(capacity_convex(doubled, eng) == doctest::Approx(2.0 * c1).epsilon(1e-12));
  Polytope sheared = apply_map(unit_square(), LinearMap::from_matrix(2, {1, 5, 0, 1}));
  CHECK(capacity_convex(sheared, eng) == doctest::Approx(c1).epsilon(1e-8));
  // decreasing dilates approach the capacity from above
  double prev = HUGE_VAL;
  Vec c = unit_square().vertex_mean();
  for (long j : {4L, 64L, 4096L, 2097152L}) {
    LinearMap S = LinearMap::scaling(2, 1.0 + 1.0 / j);
    S.translation = sub(c, scale(c, 1.0 + 1.0 / j));
    double cj = capacity_convex(apply_map(unit_square(), S), eng);
    CHECK(cj <= prev + 1e-12);
    prev = cj;
  }
  CHECK(prev == doctest::Approx(c1).epsilon(1e-6));
}

TEST_CASE("cross counterexample: superadditivity of the union") {
  CrossReport rep = cross_counterexample(eng);
  CHECK(rep.cap_E == doctest::Approx(100.0 * std::sqrt(2.0 * M_PI)).epsilon(1e-9));
  CHECK(rep.cap_F == doctest::Approx(100.0 * std::sqrt(2.0 * M_PI)).epsilon(1e-9));
  CHECK(rep.p_G == doctest::Approx(1000.0 * std::sqrt(M_PI)).epsilon(1e-9));
  CHECK(rep.sum == doctest::Approx(501.33).epsilon(1e-4));
  CHECK(rep.bracket_lower >= 1000.0);
  CHECK(rep.superadditive);
  CHECK(rep.verdict == "confirmed");
}

TEST_CASE("discrete measure masses and boundary conventions") {
  DiscreteMeasure mu;
  mu.points = {{0, 0}, {1, 0}, {2, 0}};
  mu.masses = {1.0, 2.0, 4.0};
  CHECK(mu.total() == doctest::Approx(7.0));
  Polytope sq = unit_square();
  CHECK(mu.mass_in(sq, true) == doctest::Approx(3.0));   // closed: boundary included
  CHECK(mu.mass_in(sq, false) == doctest::Approx(0.0));  // open: both points on the boundary
}

TEST_CASE("trace constants: point mass over disks") {
  DiscreteMeasure mu;
  mu.points = {{0, 0}};
  mu.masses = {1.0};
  std::vector<Polytope> family;
  for (double r : {1.0, 2.0, 4.0}) family.push_back(regular_polygon(2048, r));
  TraceConstants tc = trace_constants(mu, 1.0, family, eng);
  // kappa2 = max 1/(4r) = 1/4
  CHECK(tc.kappa2_hat == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(tc.kappa3_hat == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(tc.feasibility_slack == doctest::Approx(tc.kappa3_hat).epsilon(1e-12));  // q = 1
  CHECK_THROWS_AS(trace_constants(mu, 3.0, family, eng), DomainError);
}

TEST_CASE("trace constants: zero measure and the isocapacitary grid") {
  std::vector<Polytope> family;
  for (double r : {0.2, 0.35, 0.5}) family.push_back(regular_polygon(1024, r, Vec{0.5, 0.5}));

  DiscreteMeasure none;
  TraceConstants z = trace_constants(none, 1.5, family, eng);
  CHECK(z.kappa2_hat == 0.0);
  CHECK(z.kappa3_hat == 0.0);
  CHECK(z.feasibility_slack == 0.0);

  // Lebesgue measure sampled on a grid in the unit square, q = 2 = n/(n-1)
  DiscreteMeasure grid;
  int g = 64;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      grid.points.push_back(Vec{(i + 0.5) / g, (j + 0.5) / g});
      grid.masses.push_back(1.0 / (g * g));
    }
  TraceConstants tc = trace_constants(grid, 2.0, family, eng);
  // disks of radius r inside the square: mu(K)^{1/2}/C = sqrt(pi r^2)/(4r) = sqrt(pi)/4
  CHECK(tc.kappa2_hat <= std::sqrt(M_PI) / 4.0 + 5e-3);
  CHECK(tc.kappa2_hat >= std::sqrt(M_PI) / 4.0 - 5e-3);
  // chain: kappa3 <= kappa2 on closure/interior-paired families
  CHECK(tc.kappa3_hat <= tc.kappa2_hat + 1e-9);
}

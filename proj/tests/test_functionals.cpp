#include <doctest.h>

#include <random>

#include "affbv/corpus.hpp"
#include "affbv/functionals.hpp"
#include "oracles.hpp"

using namespace affbv;

namespace {

Engine eng;  // defaults

Polytope unit_square() { return convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

Polytope unit_cube() {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i)
    pts.push_back(Vec{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  return convex_hull(pts);
}

}  // namespace

TEST_CASE("projection body supports: square, cube, disk") {
  {
    ProjectionBody Z = projection_body(surface_area_measure(unit_square()));
    // h(v) = |v1| + |v2|
    CHECK(Z.support(Vec{1, 0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Z.support(Vec{0.3, -0.4}) == doctest::Approx(0.7).epsilon(1e-12));
  }
  {
    ProjectionBody Z = projection_body(surface_area_measure(unit_cube()));
    CHECK(Z.support(Vec{1, 1, 1}) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(Z.support(Vec{0.2, 0.3, -0.4}) == doctest::Approx(0.9).epsilon(1e-10));
  }
  {
    ProjectionBody Z = projection_body(surface_area_measure(regular_polygon(4096, 1.0)));
    // half the |cos| average over the circle: h(v) ~ 2 |v|
    CHECK(Z.support(Vec{1, 0}) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(Z.support(Vec{0.6, 0.8}) == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("polar volumes: diamond, cross-polytope, degenerate segment") {
  CHECK(polar_volume(projection_body(surface_area_measure(unit_square())), eng) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(polar_volume(projection_body(surface_area_measure(unit_cube())), eng) ==
        doctest::Approx(8.0 / 6.0).epsilon(1e-6));
  ProjectionBody seg;
  seg.dim = 2;
  seg.generators = {{{1, 0}, 1.0}, {{-1, 0}, 1.0}};
  CHECK(std::isinf(polar_volume(seg, eng)));
}

TEST_CASE("2D polar volume against zonotope-polar vertex enumeration") {
  Rng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    Polytope P = random_convex_polygon(rng, 10);
    SurfaceAreaMeasure S = surface_area_measure(P);
    std::vector<Vec> dirs;
    std::vector<double> halves;
    for (const SurfaceAtom& a : S.atoms) {
      dirs.push_back(a.direction);
      halves.push_back(0.5 * a.weight);
    }
    double direct = oracles::zonotope_polar_area_2d(dirs, halves);
    double lib = polar_volume(projection_body(S), eng);
    CHECK(lib == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("affine perimeter reference values") {
  CHECK(affine_perimeter(unit_square(), eng) ==
        doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(affine_perimeter(unit_cube(), eng) ==
        doctest::Approx(std::pow(8.0 * M_PI, 1.0 / 3.0)).epsilon(2e-3));
  // fine polygonal disk: 2 omega_1 r^{n-1} = 4
  CHECK(affine_perimeter(regular_polygon(1 << 14, 1.0), eng) ==
        doctest::Approx(4.0).epsilon(1e-6));
  // set whose normals do not span: affine perimeter vanishes
  Polytope flat = make_flat(2, {{-1, 0}, {1, 0}});
  CHECK(affine_perimeter(flat, eng) == 0.0);
}

TEST_CASE("affine surface area: convexity gate and SL invariance") {
  CHECK(affine_surface_area(unit_square(), eng) ==
        doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  Polytope sheared = apply_map(unit_square(), LinearMap::from_matrix(2, {1, 5, 0, 1}));
  CHECK(affine_surface_area(sheared, eng) ==
        doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-10));
  Polytope star = make_polygon({{1, 0}, {0.1, 0.1}, {0, 1}, {-1, 0}, {0, -1}});
  CHECK_THROWS_AS(affine_surface_area(star, eng), ConvexityError);
}

TEST_CASE("rounding radii") {
  CHECK(rounding_radius(unit_square()) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
  Polytope cube2 = apply_map(unit_cube(), LinearMap::scaling(3, 2.0));
  CHECK(rounding_radius(cube2) == doctest::Approx(std::pow(6.0 / M_PI, 1.0 / 3.0)).epsilon(1e-12));
  Polytope ball = regular_polygon(1 << 12, 0.7);
  CHECK(rounding_radius(ball) == doctest::Approx(0.7).epsilon(1e-6));
  CHECK_THROWS_AS(rounding(make_flat(2, {{0, 0}, {1, 0}}), eng), DomainError);
}

TEST_CASE("inequality report on the unit square") {
  PerimeterReport r = inequality_report(unit_square(), eng);
  CHECK(r.V == doctest::Approx(1.0));
  CHECK(r.P_BV == doctest::Approx(4.0));
  CHECK(r.P_BVd == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(r.V_polar == doctest::Approx(2.0).epsilon(1e-12));
  // V^{n-1} V(polar) / (omega_2/omega_1)^2 = 2 / (pi/2)^2
  CHECK(r.petty_ratio == doctest::Approx(2.0 / std::pow(M_PI / 2.0, 2.0)).epsilon(1e-12));
  CHECK(r.petty_ratio == doctest::Approx(0.810569469139).epsilon(1e-9));
  CHECK(r.slack_e12P >= 0.0);
}

TEST_CASE("inequality report on the unit cube: radius comparison slack") {
  PerimeterReport r = inequality_report(unit_cube(), eng);
  double expect = 6.0 / (4.0 * M_PI) - std::pow(8.0 * M_PI, 1.0 / 3.0) / (2.0 * M_PI);
  CHECK(r.slack_e12P == doctest::Approx(expect).epsilon(1e-3));
  CHECK(r.slack_e12P > 0);
}

TEST_CASE("fine ellipse approximation attains the Petty bound") {
  Polytope disk = regular_polygon(1 << 12, 1.0);
  Polytope ellipse = apply_map(disk, LinearMap::diagonal(Vec{std::sqrt(3.0), 1.0 / std::sqrt(3.0)}));
  PerimeterReport r = inequality_report(ellipse, eng);
  CHECK(r.petty_ratio >= 0.9999);
  CHECK(r.petty_ratio <= 1.0 + 1e-9);
  CHECK(r.iso_affine == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("affine perimeter scaling and SL invariance on a random corpus") {
  Rng rng(57);
  for (int rep = 0; rep < 10; ++rep) {
    Polytope P = random_convex_polygon(rng, 12);
    double base = affine_perimeter(P, eng);
    for (double r : {0.5, 2.0, 3.0})
      CHECK(affine_perimeter(apply_map(P, LinearMap::scaling(2, r)), eng) ==
            doctest::Approx(r * base).epsilon(1e-9));
    LinearMap T = random_sl(rng, 2, 100.0);
    T.translation = random_translation(rng, 2);
    CHECK(affine_perimeter(apply_map(P, T), eng) == doctest::Approx(base).epsilon(1e-8));
  }
}

TEST_CASE("3D SL invariance at quadrature accuracy") {
  Rng rng(58);
  Polytope P = random_convex_polytope3(rng, 12);
  double base = affine_perimeter(P, eng);
  for (int rep = 0; rep < 5; ++rep) {
    LinearMap T = random_sl(rng, 3, 100.0);
    double got = affine_perimeter(apply_map(P, T), eng);
    CHECK(std::fabs(got - base) / base < 5e-3);
  }
}

TEST_CASE("non-convex polyhedral sets keep the radius comparison") {
  Rng rng(59);
  for (int rep = 0; rep < 10; ++rep) {
    Polytope P = random_star_polygon(rng, 16);
    PerimeterReport r = inequality_report(P, eng);
    CHECK(r.slack_e12P >= -1e-9);
    CHECK(r.petty_ratio <= 1.0 + 1e-6);  // holds for all sets of finite perimeter
  }
}

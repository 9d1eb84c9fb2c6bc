#include <doctest.h>

#include "affbv/cheeger.hpp"
#include "affbv/functionals.hpp"

using namespace affbv;

namespace {

Engine eng;

Polytope disk_domain(int segments = 128) { return regular_polygon(segments, 1.0); }

Polytope square_domain() {
  return make_polygon({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}});
}

}  // namespace

TEST_CASE("mesh covers the domain and flags the boundary ring") {
  for (const Polytope& O : {disk_domain(64), square_domain()}) {
    DomainMesh mesh = build_mesh(O, 0.1);
    double area = 0;
    for (const auto& g : mesh.geom) area += g.area;
    CHECK(area == doctest::Approx(volume(O)).epsilon(1e-12));
    CHECK(mesh.interior_count() > 0);
    int nb = 0;
    for (bool b : mesh.boundary)
      if (b) ++nb;
    CHECK(nb >= 4);
  }
  CHECK_THROWS_AS(build_mesh(disk_domain(), -1.0), DomainError);
}

TEST_CASE("rayleigh quotient is scale-invariant and rejects bad input") {
  DomainMesh mesh = build_mesh(disk_domain(64), 0.15);
  GridFunction f = boundary_ramp(mesh, 0.3);
  double v1 = affine_rayleigh(f, 1.0, 1.0, eng);
  GridFunction g = f;
  for (double& x : g.values) x *= 2.0;
  CHECK(affine_rayleigh(g, 1.0, 1.0, eng) == doctest::Approx(v1).epsilon(1e-13));

  CHECK_THROWS_AS(affine_rayleigh(zero_function(mesh), 1.0, 1.0, eng), DomainError);
  CHECK_THROWS_AS(affine_rayleigh(f, 1.0, 2.5, eng), DomainError);
  CHECK_THROWS_AS(affine_rayleigh(f, 5.0, 1.5, eng), DomainError);
}

TEST_CASE("cone profile on the disk dominates the affine Cheeger value") {
  DomainMesh mesh = build_mesh(disk_domain(), 0.05);
  GridFunction cone = zero_function(mesh);
  for (size_t i = 0; i < mesh.verts.size(); ++i) {
    if (mesh.boundary[i]) continue;
    cone.values[i] = std::max(0.0, 1.0 - norm(mesh.verts[i]));
  }
  double v = affine_rayleigh(cone, 1.0, 1.0, eng);
  // level sets are concentric disks; coarea is an equality here and gives
  // N = int_0^1 4(1-t) dt = 2 over D = pi/3, i.e. 6/pi, safely above 4/pi
  CHECK(v >= 4.0 / M_PI - 1e-6);
  CHECK(v == doctest::Approx(6.0 / M_PI).epsilon(2e-2));
}

TEST_CASE("plateau profile approximates the sub-disk quotient") {
  DomainMesh mesh = build_mesh(disk_domain(), 0.05);
  double r = 0.6;
  GridFunction f = zero_function(mesh);
  for (size_t i = 0; i < mesh.verts.size(); ++i) {
    if (mesh.boundary[i]) continue;
    double d = norm(mesh.verts[i]);
    f.values[i] = std::clamp((r + 0.05 - d) / 0.05, 0.0, 1.0);
  }
  double v = affine_rayleigh(f, 1.0, 1.0, eng);
  // P_BVd(disk r)/V(disk r) = 4r/(pi r^2)
  CHECK(v == doctest::Approx(4.0 / (M_PI * r)).epsilon(0.08));
}

TEST_CASE("affine cheeger of the disk: witness fills the domain") {
  Polytope O = disk_domain();
  CheegerConfig cfg;
  CheegerResult res = affine_cheeger(O, 1.0, cfg, 0, eng);
  CHECK(res.value == doctest::Approx(4.0 / M_PI).epsilon(0.02));
  CHECK(res.value >= 4.0 / M_PI - 1e-9);  // isoperimetric chain lower bound
  CHECK(res.boundary_contact_distance < 1e-3);
  // affine-vs-classical quotient comparison, factor 2 omega_1/(2 omega_2) = 2/pi
  CHECK(res.value <= (2.0 / M_PI) * res.classical_value + 1e-9);
}

TEST_CASE("affine cheeger of the square never exceeds the D = O quotient") {
  Polytope O = square_domain();
  CheegerConfig cfg;
  CheegerResult res = affine_cheeger(O, 1.0, cfg, 0, eng);
  double q_of_domain = affine_perimeter(O, eng) / volume(O);
  CHECK(res.value <= q_of_domain + 1e-12);
  CHECK(res.boundary_contact_distance < 0.05);
  CHECK(res.value <= (2.0 / M_PI) * res.classical_value + 1e-9);
}

TEST_CASE("scaled disks: quotient scales as 1/r") {
  CheegerConfig cfg;
  cfg.descent_iters = 0;
  double v1 = affine_cheeger(regular_polygon(128, 1.0), 1.0, cfg, 0, eng).value;
  double v2 = affine_cheeger(regular_polygon(128, 2.0), 1.0, cfg, 0, eng).value;
  CHECK(v2 == doctest::Approx(0.5 * v1).epsilon(1e-9));
}

TEST_CASE("witness dilation changes the quotient by the predicted power") {
  // quotient ~ r^{n-1-n/q}; for q = 1, n = 2 that is r^{-1}
  Polytope big = regular_polygon(96, 10.0);
  Polytope D = regular_polygon(96, 1.0);
  auto quot = [&](const Polytope& W) {
    return affine_perimeter(W, eng) / volume(W);
  };
  double base = quot(D);
  for (double r : {0.9, 1.1}) {
    Polytope Dr = apply_map(D, LinearMap::scaling(2, r));
    CHECK(quot(Dr) == doctest::Approx(base / r).epsilon(1e-9));
  }
  // shrunk witness inside the disk domain: strictly worse quotient, positive gap
  CheegerConfig cfg;
  cfg.descent_iters = 0;
  CheegerResult res = affine_cheeger(big, 1.0, cfg, 0, eng);
  Polytope shrunk = apply_map(res.witness, LinearMap::scaling(2, 0.9));
  CHECK(quot(shrunk) == doctest::Approx(res.value / 0.9).epsilon(1e-6));
  CHECK(boundary_contact(shrunk, big) > 0.5);
}

TEST_CASE("boundary ramp minimization approaches the Cheeger value from above") {
  Polytope O = disk_domain();
  DomainMesh mesh = build_mesh(O, 0.05);
  RayleighMinimum rm = minimize_rayleigh(mesh, 1.0, 1.0, 40, 0, eng);
  CHECK(rm.value == doctest::Approx(4.0 / M_PI).epsilon(0.05));
  CheegerConfig cfg;
  CheegerResult set = affine_cheeger(O, 1.0, cfg, 0, eng);
  CHECK(rm.value >= set.value - 1e-6);
  // trace is non-increasing
  for (size_t i = 1; i < rm.trace.size(); ++i)
    CHECK(rm.trace[i].second <= rm.trace[i - 1].second + 1e-12);
}

TEST_CASE("square mesh minimization dominates the set search") {
  Polytope O = square_domain();
  DomainMesh mesh = build_mesh(O, 0.07);
  RayleighMinimum rm = minimize_rayleigh(mesh, 1.0, 1.0, 30, 0, eng);
  CheegerConfig cfg;
  CheegerResult set = affine_cheeger(O, 1.0, cfg, 0, eng);
  CHECK(rm.value >= set.value - 1e-6);
}

TEST_CASE("refinement sequence decreases toward the Cheeger value") {
  Polytope O = disk_domain();
  double prev = HUGE_VAL;
  for (double h : {0.2, 0.1, 0.05}) {
    DomainMesh mesh = build_mesh(O, h);
    RayleighMinimum rm = minimize_rayleigh(mesh, 1.0, 1.0, 25, 0, eng);
    CHECK(rm.value <= prev + 1e-6);
    prev = rm.value;
  }
  CHECK(prev <= 4.0 / M_PI * 1.05);
}

TEST_CASE("set value never exceeds the function quotient for sampled (p, q)") {
  Polytope O = disk_domain(64);
  DomainMesh mesh = build_mesh(O, 0.08);
  GridFunction f = boundary_ramp(mesh, 0.2);
  CheegerConfig cfg;
  cfg.descent_iters = 10;
  for (auto [p, q] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1.0, 1.5}, {1.2, 1.5}}) {
    double lam = affine_rayleigh(f, p, q, eng);
    CheegerResult set = affine_cheeger(O, q, cfg, 0, eng);
    CHECK(set.value <= lam + 1e-9);
  }
}

TEST_CASE("sl(2) shear leaves set and function values nearly invariant") {
  Polytope O = disk_domain(64);
  LinearMap T = LinearMap::from_matrix(2, {1.0, 0.6, 0.0, 1.0});
  Polytope Osh = apply_map(O, T);
  CheegerConfig cfg;
  CheegerResult a = affine_cheeger(O, 1.0, cfg, 0, eng);
  CheegerResult b = affine_cheeger(Osh, 1.0, cfg, 0, eng);
  CHECK(std::fabs(a.value - b.value) / a.value < 0.02);

  RayleighMinimum ra = minimize_rayleigh(build_mesh(O, 0.08), 1.0, 1.0, 25, 0, eng);
  RayleighMinimum rb = minimize_rayleigh(build_mesh(Osh, 0.08), 1.0, 1.0, 25, 0, eng);
  CHECK(std::fabs(ra.value - rb.value) / ra.value < 0.02);
}

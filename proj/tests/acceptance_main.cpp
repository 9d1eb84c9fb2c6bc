// Acceptance suite: each criterion prints one PASS/FAIL line (plus the
// measured quantity) and the binary exits non-zero on any failure.
//
//   acceptance            run everything
//   acceptance <k>        run criterion k in 1..10

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "affbv/capacity.hpp"
#include "affbv/cheeger.hpp"
#include "affbv/corpus.hpp"
#include "affbv/functionals.hpp"
#include "affbv/io.hpp"
#include "affbv/symmetrize.hpp"
#include "affbv/verify.hpp"
#include "oracles.hpp"

using namespace affbv;

namespace {

int failures = 0;

void line(int crit, bool pass, const std::string& what, double value) {
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s (%.12g)\n", pass ? "PASS" : "FAIL", crit, what.c_str(), value);
  std::fflush(stdout);
}

Engine eng;  // defaults: order 48, 2^14-gon balls, level-4 icospheres

// 1. ball capacity identities
void criterion1() {
  double disk = capacity_convex(regular_polygon(1 << 14, 1.0), eng);
  line(1, std::fabs(disk - 4.0) / 4.0 <= 1e-6, "C(unit disk) = 4 within 1e-6 relative", disk);

  Polytope ball = icosphere(4, 1.0);  // 5120 faces
  double b3 = capacity_convex(ball, eng);
  line(1, std::fabs(b3 - 2.0 * M_PI) / (2.0 * M_PI) <= 3e-3,
       "C(unit 3-ball) = 2*pi within 3e-3 relative", b3);
}

// 2. degenerate vanishing for the flat segment
void criterion2() {
  Polytope seg = make_flat(2, {{-1, 0}, {1, 0}});
  CandidateFamily fam;
  CapacityBracket br = capacity_bracket(seg, fam, eng);
  line(2, br.upper < 1e-2, "flat-segment bracket upper below 1e-2", br.upper);
  line(2, br.lower == 0.0, "flat-segment bracket lower identically 0", br.lower);
}

// 3. scaling law and SL(2) invariance over 50 random convex polygons
void criterion3() {
  Rng rng(301);
  double worst_scale = 0, worst_inv = 0;
  for (int i = 0; i < 50; ++i) {
    Polytope P = random_convex_polygon(rng, 12);
    double base = capacity_convex(P, eng);
    for (double r : {0.5, 2.0, 3.0}) {
      double got = capacity_convex(apply_map(P, LinearMap::scaling(2, r)), eng);
      worst_scale = std::max(worst_scale, std::fabs(got - r * base) / (r * base));
    }
    LinearMap T = random_sl(rng, 2, 100.0);
    T.translation = random_translation(rng, 2, 3.0);
    double got = capacity_convex(apply_map(P, T), eng);
    worst_inv = std::max(worst_inv, std::fabs(got - base) / base);
  }
  line(3, worst_scale <= 1e-9, "r^{n-1} scaling, max relative error", worst_scale);
  line(3, worst_inv <= 1e-8, "SL(2)+translation invariance, max relative error", worst_inv);
}

// 4. Petty projection inequality
void criterion4() {
  Rng rng(401);
  double worst2 = -HUGE_VAL;
  for (int i = 0; i < 200; ++i)
    worst2 = std::max(worst2, inequality_report(random_convex_polygon(rng, 12), eng).petty_ratio);
  line(4, worst2 <= 1.0 + 1e-6, "max petty_ratio over 200 random 2D polytopes", worst2);

  double worst3 = -HUGE_VAL;
  for (int i = 0; i < 50; ++i)
    worst3 = std::max(worst3, inequality_report(random_convex_polytope3(rng, 14), eng).petty_ratio);
  line(4, worst3 <= 1.0 + 2e-3, "max petty_ratio over 50 random 3D polytopes", worst3);

  Polytope ellipse = apply_map(regular_polygon(1 << 12, 1.0),
                               LinearMap::diagonal(Vec{std::sqrt(3.0), 1.0 / std::sqrt(3.0)}));
  double pe = inequality_report(ellipse, eng).petty_ratio;
  line(4, pe >= 0.9999, "4096-gon 3:1 ellipse petty_ratio >= 0.9999", pe);
}

// 5. perimeter-radius comparison and the two isoperimetric ratios
void criterion5() {
  Rng rng(501);
  double min_slack = HUGE_VAL, min_gap = HUGE_VAL;
  for (int i = 0; i < 100; ++i) {
    Polytope P = i < 50 ? random_convex_polygon(rng, 12) : random_star_polygon(rng, 14);
    PerimeterReport r = inequality_report(P, eng);
    min_slack = std::min(min_slack, r.slack_e12P);
    if (i < 50) min_gap = std::min(min_gap, r.iso_affine - r.iso_classical);
  }
  line(5, min_slack >= -1e-9, "min e12P slack over 50 convex + 50 non-convex", min_slack);
  line(5, min_gap >= -1e-9, "min (iso_affine - iso_classical) over the convex corpus", min_gap);
}

// 6. Steiner and rounding monotonicity, volume preservation
void criterion6() {
  Rng rng(601);
  double worst_mono = -HUGE_VAL, worst_vol = 0, worst_round = -HUGE_VAL;
  for (int i = 0; i < 100; ++i) {
    Polytope P = i % 2 ? random_convex_polygon(rng, 10) : random_star_polygon(rng, 12);
    Vec u = random_direction(rng, 2);
    SteinerResult r = steiner(P, u, eng);
    worst_mono = std::max(worst_mono, r.affine_after - r.affine_before);
    worst_vol = std::max(worst_vol, std::fabs(r.volume_after - r.volume_before) / r.volume_before);
    RoundingCheck rc = verify_rounding(P, eng);
    worst_round = std::max(worst_round, rc.affine_rounded - rc.affine_input);
  }
  for (int i = 0; i < 20; ++i) {
    Polytope P = random_convex_polytope3(rng, 12);
    Vec u = random_direction(rng, 3);
    SteinerResult r = steiner(P, u, eng);
    worst_mono = std::max(worst_mono, r.affine_after - r.affine_before);
    worst_vol = std::max(worst_vol, std::fabs(r.volume_after - r.volume_before) / r.volume_before);
    RoundingCheck rc = verify_rounding(P, eng);
    worst_round = std::max(worst_round, rc.affine_rounded - rc.affine_input);
  }
  line(6, worst_mono <= 1e-9, "Steiner monotonicity slack over 100 polygons + 20 polyhedra",
       worst_mono);
  line(6, worst_vol <= 1e-10, "Steiner volume drift (relative)", worst_vol);
  line(6, worst_round <= 1e-6, "rounding monotonicity slack", worst_round);
}

// 7. cross superadditivity
void criterion7() {
  CrossReport rep = cross_counterexample(eng);
  double target = 100.0 * std::sqrt(2.0 * M_PI);
  line(7, std::fabs(rep.cap_E - target) <= 1e-9 && std::fabs(rep.cap_F - target) <= 1e-9,
       "C(E) = C(F) = 100*sqrt(2*pi) within 1e-9", rep.cap_E);
  if (!rep.superadditive) {
    std::printf("     verdict: %s\n", rep.verdict.c_str());
    line(7, false, "bracket lower bound exceeds the sum 501.33", rep.bracket_lower);
  } else {
    line(7, rep.bracket_lower > 501.33 && rep.bracket_lower >= 1000.0,
         "bracket lower bound exceeds 501.33 and reaches 1000", rep.bracket_lower);
  }
}

// 8. Cheeger pipeline on the unit disk
void criterion8() {
  Polytope O = regular_polygon(128, 1.0);
  CheegerConfig cfg;
  CheegerResult set = affine_cheeger(O, 1.0, cfg, 0, eng);
  double target = 4.0 / M_PI;
  line(8, std::fabs(set.value - target) / target <= 0.02,
       "affine_cheeger(disk, q=1) within 2% of 4/pi", set.value);
  line(8, set.boundary_contact_distance < 0.01, "boundary contact distance below 0.01",
       set.boundary_contact_distance);

  DomainMesh mesh = build_mesh(O, 0.05);
  RayleighMinimum rm = minimize_rayleigh(mesh, 1.0, 1.0, 60, 0, eng);
  line(8, std::fabs(rm.value - target) / target <= 0.05,
       "minimize_rayleigh(p=q=1) within 5% of 4/pi", rm.value);
  line(8, rm.value >= set.value - 1e-6, "function value dominates the set value", rm.value - set.value);
}

// 9. oracle equivalence
void criterion9() {
  Rng rng(901);
  std::uniform_real_distribution<double> uw(0.2, 2.0);
  double worst2 = 0;
  for (int rep = 0; rep < 50; ++rep) {
    int m = 3 + static_cast<int>(rng() % 5);
    std::vector<Vec> dirs;
    std::vector<double> ws;
    for (int i = 0; i < m; ++i) {
      Vec d = random_direction(rng, 2);
      double w = uw(rng);
      dirs.push_back(d);
      ws.push_back(w);
      dirs.push_back(scale(d, -1.0));
      ws.push_back(w);
    }
    SurfaceAreaMeasure S;
    S.dim = 2;
    for (size_t i = 0; i < dirs.size(); ++i) S.atoms.push_back({dirs[i], ws[i]});
    PiecewiseCosineProfile prof = cosine_profile_from_atoms(S);
    double exact = exact_2d_negative_square_integral(prof);
    double adaptive = oracles::adaptive_simpson(
        [&prof](double t) { return std::pow(prof.eval(t), -2.0); }, 0.0, 2.0 * M_PI, 1e-13);
    worst2 = std::max(worst2, std::fabs(exact - adaptive) / std::fabs(adaptive));
  }
  line(9, worst2 <= 1e-9, "2D exact vs adaptive integration over 50 atom sets", worst2);

  Engine e32 = eng, e64 = eng;
  e32.quad_order = 32;
  e64.quad_order = 64;
  double worst3 = 0;
  {
    std::vector<Vec> pts;
    for (int i = 0; i < 8; ++i)
      pts.push_back(Vec{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
    Polytope cube = convex_hull(pts);
    ProjectionBody Z = projection_body(surface_area_measure(cube));
    double a = polar_volume(Z, e32), b = polar_volume(Z, e64);
    worst3 = std::max(worst3, std::fabs(a - b) / b);
  }
  for (int rep = 0; rep < 20; ++rep) {
    ProjectionBody Z =
        projection_body(surface_area_measure(random_convex_polytope3(rng, 14)));
    double a = polar_volume(Z, e32), b = polar_volume(Z, e64);
    worst3 = std::max(worst3, std::fabs(a - b) / b);
  }
  line(9, worst3 <= 1e-3, "3D order-32 vs order-64 discrepancy on cube + 20 random", worst3);
}

// 10. byte-identical verify runs
void criterion10() {
#ifdef AFFBV_CLI_PATH
  std::string cli = AFFBV_CLI_PATH;
  std::string base = "/tmp/affbv_verify_";
  std::string cmd1 = cli + " --out " + base + "a.txt verify --seed 7 --count 12 > /dev/null 2>&1";
  std::string cmd2 = cli + " --out " + base + "b.txt verify --seed 7 --count 12 > /dev/null 2>&1";
  int rc1 = std::system(cmd1.c_str());
  int rc2 = std::system(cmd2.c_str());
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  std::string a = slurp(base + "a.txt"), b = slurp(base + "b.txt");
  bool same = !a.empty() && a == b && rc1 == 0 && rc2 == 0;
  line(10, same, "two `verify --seed 7` runs emit byte-identical reports",
       static_cast<double>(a.size()));
#else
  line(10, false, "CLI path not provided at build time", 0);
#endif
}

}  // namespace

int main(int argc, char** argv) {
  int which = argc > 1 ? std::atoi(argv[1]) : 0;
  auto run = [&](int k, void (*fn)()) {
    if (which == 0 || which == k) {
      auto t0 = std::chrono::steady_clock::now();
      fn();
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("     criterion %d finished in %.1fs\n", k, dt);
    }
  };
  run(1, criterion1);
  run(2, criterion2);
  run(3, criterion3);
  run(4, criterion4);
  run(5, criterion5);
  run(6, criterion6);
  run(7, criterion7);
  run(8, criterion8);
  run(9, criterion9);
  run(10, criterion10);
  if (failures) std::printf("%d acceptance check(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}

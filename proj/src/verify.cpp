#include "affbv/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "affbv/capacity.hpp"
#include "affbv/corpus.hpp"
#include "affbv/functionals.hpp"
#include "affbv/symmetrize.hpp"

namespace affbv {

bool VerifyReport::all_pass() const {
  for (const VerifyCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  for (const VerifyCheck& c : checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", c.worst);
    os << (c.pass ? "PASS" : "FAIL") << ' ' << c.name << " worst=" << buf;
    if (!c.detail.empty()) os << ' ' << c.detail;
    os << '\n';
  }
  os << (all_pass() ? "ALL CHECKS PASSED" : "CHECKS FAILED") << '\n';
  return os.str();
}

VerifyReport run_verify(const VerifyOptions& opt, const Engine& eng) {
  VerifyReport rep;
  Rng rng(opt.seed);

  std::vector<Polytope> convex2;
  for (int i = 0; i < opt.convex_2d; ++i) convex2.push_back(random_convex_polygon(rng, 12));
  std::vector<Polytope> star2;
  for (int i = 0; i < opt.nonconvex_2d; ++i) star2.push_back(random_star_polygon(rng, 14));
  std::vector<Polytope> convex3;
  for (int i = 0; i < opt.convex_3d; ++i) convex3.push_back(random_convex_polytope3(rng, 14));

  {  // closing-up of every generated boundary
    VerifyCheck c{"closing_up", true, 0, ""};
    auto probe = [&](const Polytope& P) {
      Vec s(P.dim, 0.0);
      double tot = 0;
      for (const Facet& f : P.facets) {
        s = add(s, scale(f.normal, f.measure));
        tot += f.measure;
      }
      c.worst = std::max(c.worst, norm(s) / tot);
    };
    for (const Polytope& P : convex2) probe(P);
    for (const Polytope& P : star2) probe(P);
    for (const Polytope& P : convex3) probe(P);
    c.pass = c.worst <= 1e-9;
    rep.checks.push_back(c);
  }

  {  // Petty projection inequality, exact plane path
    VerifyCheck c{"petty_2d", true, 0, ""};
    for (const Polytope& P : convex2) {
      PerimeterReport r = inequality_report(P, eng);
      c.worst = std::max(c.worst, r.petty_ratio);
    }
    c.pass = c.worst <= 1.0 + 1e-6;
    rep.checks.push_back(c);
  }

  {  // Petty projection inequality, 3D quadrature path
    VerifyCheck c{"petty_3d", true, 0, ""};
    for (const Polytope& P : convex3) {
      PerimeterReport r = inequality_report(P, eng);
      c.worst = std::max(c.worst, r.petty_ratio);
    }
    c.pass = c.worst <= 1.0 + 2e-3;
    rep.checks.push_back(c);
  }

  {  // perimeter-radius comparison, convex and non-convex
    VerifyCheck c{"radius_comparison", true, 0, ""};
    double min_slack = HUGE_VAL;
    for (const Polytope& P : convex2) min_slack = std::min(min_slack, inequality_report(P, eng).slack_e12P);
    for (const Polytope& P : star2) min_slack = std::min(min_slack, inequality_report(P, eng).slack_e12P);
    for (const Polytope& P : convex3) min_slack = std::min(min_slack, inequality_report(P, eng).slack_e12P);
    c.worst = min_slack;
    c.pass = min_slack >= -1e-9;
    rep.checks.push_back(c);
  }

  {  // affine isoperimetric ratio dominates the classical one
    VerifyCheck c{"affine_beats_classical", true, 0, ""};
    double min_gap = HUGE_VAL;
    for (const Polytope& P : convex2) {
      PerimeterReport r = inequality_report(P, eng);
      min_gap = std::min(min_gap, r.iso_affine - r.iso_classical);
    }
    c.worst = min_gap;
    c.pass = min_gap >= -1e-9;
    rep.checks.push_back(c);
  }

  {  // scaling of the affine perimeter
    VerifyCheck c{"scaling_law", true, 0, ""};
    for (const Polytope& P : convex2) {
      double base = affine_perimeter(P, eng);
      for (double r : {0.5, 2.0, 3.0}) {
        double got = affine_perimeter(apply_map(P, LinearMap::scaling(2, r)), eng);
        c.worst = std::max(c.worst, std::fabs(got - r * base) / (r * base));
      }
    }
    c.pass = c.worst <= 1e-9;
    rep.checks.push_back(c);
  }

  {  // SL(2) + translation invariance on the exact path
    VerifyCheck c{"sl2_invariance", true, 0, ""};
    for (const Polytope& P : convex2) {
      double base = affine_perimeter(P, eng);
      LinearMap T = random_sl(rng, 2, 100.0);
      T.translation = random_translation(rng, 2, 3.0);
      double got = affine_perimeter(apply_map(P, T), eng);
      c.worst = std::max(c.worst, std::fabs(got - base) / base);
    }
    c.pass = c.worst <= 1e-8;
    rep.checks.push_back(c);
  }

  {  // Steiner monotonicity, volume preservation (2D pairs)
    VerifyCheck c{"steiner_2d", true, 0, ""};
    double worst_mono = -HUGE_VAL, worst_vol = 0;
    for (int i = 0; i < opt.steiner_pairs; ++i) {
      const Polytope& P = (i % 2 == 0 && !star2.empty())
                              ? star2[(i / 2) % star2.size()]
                              : convex2[i % convex2.size()];
      Vec u = random_direction(rng, 2);
      SteinerResult r = steiner(P, u, eng);
      worst_mono = std::max(worst_mono, r.affine_after - r.affine_before);
      worst_vol = std::max(worst_vol,
                           std::fabs(r.volume_after - r.volume_before) /
                               std::max(1e-300, r.volume_before));
    }
    c.worst = worst_mono;
    std::ostringstream d;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", worst_vol);
    d << "vol_drift=" << buf;
    c.detail = d.str();
    c.pass = worst_mono <= 1e-9 && worst_vol <= 1e-10;
    rep.checks.push_back(c);
  }

  {  // Steiner monotonicity on polyhedra
    VerifyCheck c{"steiner_3d", true, 0, ""};
    double worst_mono = -HUGE_VAL, worst_vol = 0;
    for (int i = 0; i < opt.steiner_polyhedra; ++i) {
      const Polytope& P = convex3[i % convex3.size()];
      Vec u = random_direction(rng, 3);
      SteinerResult r = steiner(P, u, eng);
      worst_mono = std::max(worst_mono, r.affine_after - r.affine_before);
      worst_vol = std::max(worst_vol,
                           std::fabs(r.volume_after - r.volume_before) /
                               std::max(1e-300, r.volume_before));
    }
    c.worst = worst_mono;
    c.pass = worst_mono <= 1e-9 && worst_vol <= 1e-10;
    rep.checks.push_back(c);
  }

  {  // capacity metric properties on a convex body
    PropertyReport pr = property_suite(convex2.front(), opt.seed, eng);
    for (const PropertyCheck& pc : pr.checks)
      rep.checks.push_back({"capacity_" + pc.name, pc.pass, pc.worst, ""});
  }

  {  // union superadditivity instance
    CrossReport cr = cross_counterexample(eng);
    VerifyCheck c{"cross_superadditivity", cr.superadditive, cr.bracket_lower, cr.verdict};
    rep.checks.push_back(c);
  }

  {  // rounding monotonicity (2D)
    VerifyCheck c{"rounding_2d", true, 0, ""};
    double worst = -HUGE_VAL;
    for (const Polytope& P : convex2) {
      RoundingCheck rc = verify_rounding(P, eng);
      worst = std::max(worst, rc.affine_rounded - rc.affine_input);
    }
    for (const Polytope& P : star2) {
      RoundingCheck rc = verify_rounding(P, eng);
      worst = std::max(worst, rc.affine_rounded - rc.affine_input);
    }
    c.worst = worst;
    c.pass = worst <= 1e-6;
    rep.checks.push_back(c);
  }

  return rep;
}

}  // namespace affbv

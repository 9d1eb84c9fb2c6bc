#include "affbv/capacity.hpp"

#include "affbv/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace affbv {

double capacity_convex(const Polytope& K, const Engine& eng) {
  if (!is_convex(K, eng.tol))
    throw ConvexityError("capacity_convex: input is not convex, use capacity_bracket");
  if (!(volume(K) > 0)) throw DomainError("capacity_convex: zero-volume body");
  return affine_perimeter(K, eng);
}

// ---------------------------------------------------------------------------
// Shadow lower bound (2D)
// ---------------------------------------------------------------------------

double shadow_capacity_lower_bound(const Polytope& K, int angular_samples, const Engine& eng) {
  (void)eng;
  if (K.dim != 2) throw DomainError("shadow_capacity_lower_bound: 2D only");
  if (K.facets.empty() || !(volume(K) > 0)) return 0.0;  // flat sets: trivial bound
  if (!K.has_incidence())
    throw InvalidPolytopeError("shadow_capacity_lower_bound: edge incidence required");

  Vec c = K.vertex_mean();
  double R = K.diameter_bound();

  // Shadow length of K on the line orthogonal to u(theta): union of the
  // projected edge intervals.
  auto shadow = [&](double theta) {
    double wx = -std::sin(theta), wy = std::cos(theta);
    std::vector<std::pair<double, double>> iv;
    iv.reserve(K.facets.size());
    for (const Facet& f : K.facets) {
      const Vec& a = K.vertices[f.vertex_ids[0]];
      const Vec& b = K.vertices[f.vertex_ids[1]];
      double pa = wx * (a[0] - c[0]) + wy * (a[1] - c[1]);
      double pb = wx * (b[0] - c[0]) + wy * (b[1] - c[1]);
      iv.emplace_back(std::min(pa, pb), std::max(pa, pb));
    }
    std::sort(iv.begin(), iv.end());
    double len = 0, cur_lo = 0, cur_hi = -HUGE_VAL;
    bool open = false;
    for (const auto& [lo, hi] : iv) {
      if (!open || lo > cur_hi) {
        if (open) len += cur_hi - cur_lo;
        cur_lo = lo;
        cur_hi = hi;
        open = true;
      } else {
        cur_hi = std::max(cur_hi, hi);
      }
    }
    if (open) len += cur_hi - cur_lo;
    return len;
  };

  // Safe overestimate of \int s^{-2} using the 2R Lipschitz bound of s.
  int M = std::max(64, angular_samples);
  double dtheta = M_PI / M;
  double slack = R * dtheta;
  std::vector<double> s(M + 1);
  for (int k = 0; k <= M; ++k) s[k] = shadow(k * dtheta);
  double integral_upper = 0;
  for (int k = 0; k < M; ++k) {
    double smin = std::min(s[k], s[k + 1]) - slack;
    if (smin <= 0) return 0.0;
    integral_upper += dtheta / (smin * smin);
  }
  integral_upper *= 2.0;  // shadow has period pi
  // C(K) >= (2^2 w_2)^{1/2} ((1/2) \int s^{-2})^{-1/2}
  return std::sqrt(4.0 * omega(2)) / std::sqrt(0.5 * integral_upper);
}

// ---------------------------------------------------------------------------
// Bracket machinery
// ---------------------------------------------------------------------------

namespace {

Polytope dilate_about(const Polytope& P, const Vec& center, double factor) {
  LinearMap S = LinearMap::scaling(P.dim, factor);
  S.translation = sub(center, scale(center, factor));
  return apply_map(P, S);
}

// candidate must strictly contain every vertex of K
bool superset_ok(const Polytope& cand, const Polytope& K, double margin) {
  for (const Vec& v : K.vertices)
    for (const Facet& f : cand.facets)
      if (dot(f.normal, v) - f.offset > -margin) return false;
  return true;
}

struct Candidate {
  double value;
  Polytope body;
};

void consider(std::vector<Candidate>& best, double value, Polytope body) {
  if (!std::isfinite(value)) return;
  if (best.empty() || value < best.front().value) {
    best.clear();
    best.push_back({value, std::move(body)});
  }
}

bool seg_seg_isect(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  auto orient = [](const Vec& p, const Vec& q, const Vec& r) {
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
  };
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

// Axis-aligned outer cover of a planar set: union of grid cells meeting K,
// assembled into boundary loops.
Polytope grid_cover(const Polytope& K, int res, double pad) {
  double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
  for (const Vec& v : K.vertices) {
    xlo = std::min(xlo, v[0]);
    xhi = std::max(xhi, v[0]);
    ylo = std::min(ylo, v[1]);
    yhi = std::max(yhi, v[1]);
  }
  xlo -= pad; ylo -= pad; xhi += pad; yhi += pad;
  double hx = (xhi - xlo) / res, hy = (yhi - ylo) / res;

  std::vector<std::vector<bool>> mark(res, std::vector<bool>(res, false));
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      Vec clo{xlo + i * hx, ylo + j * hy};
      Vec chi{xlo + (i + 1) * hx, ylo + (j + 1) * hy};
      Vec corners[4] = {clo, {chi[0], clo[1]}, chi, {clo[0], chi[1]}};
      bool hit = false;
      for (const Vec& p : corners)
        if (contains_point(K, p, 1e-12)) hit = true;
      if (!hit) {
        Vec center{0.5 * (clo[0] + chi[0]), 0.5 * (clo[1] + chi[1])};
        if (contains_point(K, center, 1e-12)) hit = true;
      }
      if (!hit)
        for (const Vec& v : K.vertices)
          if (v[0] >= clo[0] - 1e-12 && v[0] <= chi[0] + 1e-12 && v[1] >= clo[1] - 1e-12 &&
              v[1] <= chi[1] + 1e-12)
            hit = true;
      if (!hit && K.has_incidence()) {
        for (const Facet& f : K.facets) {
          const Vec& a = K.vertices[f.vertex_ids[0]];
          const Vec& b = K.vertices[f.vertex_ids[1]];
          for (int e = 0; e < 4 && !hit; ++e)
            if (seg_seg_isect(a, b, corners[e], corners[(e + 1) % 4])) hit = true;
          if (hit) break;
        }
      }
      mark[i][j] = hit;
    }

  // Directed boundary edges with the covered cell on the left, chained to loops.
  auto covered = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < res && j < res && mark[i][j];
  };
  std::map<std::pair<int, int>, std::pair<int, int>> next;  // lattice point -> lattice point
  auto chain = [&next](std::pair<int, int> a, std::pair<int, int> b) {
    if (next.count(a)) throw Error("grid_cover: ambiguous corner (diagonal touch)");
    next[a] = b;
  };
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      if (!mark[i][j]) continue;
      if (!covered(i, j - 1)) chain({i, j}, {i + 1, j});          // bottom, left->right
      if (!covered(i + 1, j)) chain({i + 1, j}, {i + 1, j + 1});  // right, up
      if (!covered(i, j + 1)) chain({i + 1, j + 1}, {i, j + 1});  // top, right->left
      if (!covered(i - 1, j)) chain({i, j + 1}, {i, j});          // left, down
    }
  std::vector<std::vector<Vec>> loops;
  std::map<std::pair<int, int>, bool> used;
  for (const auto& [start, unused_to] : next) {
    (void)unused_to;
    if (used.count(start)) continue;
    std::vector<Vec> loop;
    auto cur = start;
    do {
      used[cur] = true;
      loop.push_back(Vec{xlo + cur.first * hx, ylo + cur.second * hy});
      auto it = next.find(cur);
      if (it == next.end()) throw Error("grid_cover: open boundary chain");
      cur = it->second;
    } while (cur != start && loop.size() <= next.size());
    if (loop.size() >= 4) loops.push_back(loop);
  }
  if (loops.empty()) throw Error("grid_cover: empty cover");
  return make_polygon_multi(loops);
}

// Largest axis box around a seed that stays inside K (greedy axis expansion).
bool box_inside(const Polytope& K, const Vec& lo, const Vec& hi) {
  Vec corners[4] = {{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}};
  for (const Vec& p : corners)
    if (!contains_point(K, p, 1e-12)) return false;
  if (!K.has_incidence()) return true;
  for (const Facet& f : K.facets) {
    const Vec& a = K.vertices[f.vertex_ids[0]];
    const Vec& b = K.vertices[f.vertex_ids[1]];
    auto inside = [&](const Vec& p) {
      return p[0] > lo[0] + 1e-12 && p[0] < hi[0] - 1e-12 && p[1] > lo[1] + 1e-12 &&
             p[1] < hi[1] - 1e-12;
    };
    if (inside(a) || inside(b)) return false;
    for (int e = 0; e < 4; ++e)
      if (seg_seg_isect(a, b, corners[e], corners[(e + 1) % 4])) return false;
  }
  return true;
}

Polytope grow_box(const Polytope& K, const Vec& seed, double diam) {
  double wlo[2] = {1e-6 * diam, 1e-6 * diam};
  double whi[2] = {1e-6 * diam, 1e-6 * diam};
  if (!box_inside(K, Vec{seed[0] - wlo[0], seed[1] - wlo[1]},
                  Vec{seed[0] + whi[0], seed[1] + whi[1]}))
    throw DomainError("grow_box: seed not interior");
  // Greedy doubling per side, then bisection refinement.
  for (int side = 0; side < 4; ++side) {
    double* w = side < 2 ? &wlo[side] : &whi[side - 2];
    double step = 0.1 * diam;
    while (step > 1e-7 * diam) {
      double trial = *w + step;
      double lx0 = seed[0] - (side == 0 ? trial : wlo[0]);
      double ly0 = seed[1] - (side == 1 ? trial : wlo[1]);
      double lx1 = seed[0] + (side == 2 ? trial : whi[0]);
      double ly1 = seed[1] + (side == 3 ? trial : whi[1]);
      if (box_inside(K, Vec{lx0, ly0}, Vec{lx1, ly1}))
        *w = trial;
      else
        step *= 0.5;
    }
  }
  return box(Vec{seed[0] - wlo[0], seed[1] - wlo[1]}, Vec{seed[0] + whi[0], seed[1] + whi[1]});
}

}  // namespace

CapacityBracket capacity_bracket(const Polytope& K, const CandidateFamily& family,
                                 const Engine& eng) {
  if (K.vertices.empty()) throw ConfigError("capacity_bracket: empty input");
  bool flat = K.facets.empty() || !(volume(K) > 0);
  CapacityBracket br;

  // Convex bodies collapse to the exact value.
  if (!flat && is_convex(K, eng.tol)) {
    br.lower = br.upper = affine_perimeter(K, eng);
    br.lower_witness = K;
    br.upper_witness = K;
    br.exact = true;
    br.note = "convex: capacity equals the affine perimeter";
    return br;
  }

  double diam = std::max(2.0 * K.diameter_bound(), 1e-12);
  double margin = 1e-9 * diam;

  // ---- upper bound: open polyhedral supersets -----------------------------
  std::vector<Candidate> best_upper;
  Polytope hull;
  bool have_hull = false;
  try {
    hull = convex_hull(K.vertices);
    have_hull = true;
  } catch (const DegenerateInputError&) {
    have_hull = false;  // flat input; boxes still apply
  }

  if (have_hull && family.dilations) {
    Vec c = hull.vertex_mean();
    for (double epsd : family.dilation_eps) {
      Polytope cand = dilate_about(hull, c, 1.0 + epsd);
      if (!superset_ok(cand, K, margin)) continue;
      consider(best_upper, affine_perimeter(cand, eng), cand);
    }
  }
  if (have_hull && family.offsets && K.dim == 2) {
    for (double frac : family.pad_fractions) {
      double pad = frac * diam;
      std::vector<Vec> pts;
      for (const Vec& v : hull.vertices)
        for (int k = 0; k < 8; ++k) {
          double t = 2.0 * M_PI * k / 8;
          pts.push_back(Vec{v[0] + pad * std::cos(t), v[1] + pad * std::sin(t)});
        }
      try {
        Polytope cand = convex_hull(pts);
        if (!superset_ok(cand, K, margin)) continue;
        consider(best_upper, affine_perimeter(cand, eng), cand);
      } catch (const DegenerateInputError&) {
      }
    }
  }
  if (family.boxes && K.dim == 2) {
    double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
    for (const Vec& v : K.vertices) {
      xlo = std::min(xlo, v[0]);
      xhi = std::max(xhi, v[0]);
      ylo = std::min(ylo, v[1]);
      yhi = std::max(yhi, v[1]);
    }
    for (double frac : family.pad_fractions) {
      double pad = frac * diam;
      Polytope cand = box(Vec{xlo - pad, ylo - pad}, Vec{xhi + pad, yhi + pad});
      if (!superset_ok(cand, K, margin * 1e-3)) continue;
      consider(best_upper, affine_perimeter(cand, eng), cand);
    }
  }
  if (!flat && family.grid && K.dim == 2) {
    for (int res : family.grid_resolutions) {
      try {
        Polytope cand = grid_cover(K, res, 1e-3 * diam);
        consider(best_upper, affine_perimeter(cand, eng), cand);
      } catch (const Error&) {
      }
    }
  }
  if (have_hull && family.local_search && K.dim == 2 && !best_upper.empty()) {
    // Vertex coordinate descent on a convex superset, containment preserved.
    Polytope cur = dilate_about(hull, hull.vertex_mean(), 1.0 + 1e-3);
    if (superset_ok(cur, K, margin)) {
      double cur_val = affine_perimeter(cur, eng);
      double step = 0.05 * diam;
      std::mt19937_64 rng(family.seed + 17);
      for (int it = 0; it < family.search_iters; ++it) {
        bool improved = false;
        for (size_t vi = 0; vi < cur.vertices.size(); ++vi) {
          for (int dir = 0; dir < 4; ++dir) {
            std::vector<Vec> pts = cur.vertices;
            pts[vi][dir % 2] += (dir < 2 ? step : -step);
            Polytope cand;
            try {
              cand = convex_hull(pts);
            } catch (const DegenerateInputError&) {
              continue;
            }
            if (!superset_ok(cand, K, margin)) continue;
            double val = affine_perimeter(cand, eng);
            if (val < cur_val - 1e-14) {
              cur = cand;
              cur_val = val;
              improved = true;
            }
          }
        }
        if (!improved) step *= 0.5;
        if (step < 1e-7 * diam) break;
      }
      consider(best_upper, cur_val, cur);
    }
  }
  if (best_upper.empty()) throw ConfigError("capacity_bracket: empty candidate family");
  br.upper = best_upper.front().value;
  br.upper_witness = std::move(best_upper.front().body);

  // ---- lower bound: inscribed convex subsets + shadow bound ---------------
  double lower = 0;
  Polytope lower_witness;
  if (!flat) {
    // convex components of the boundary decomposition
    if (K.dim == 2 && K.has_incidence()) {
      for (const std::vector<int>& loop : boundary_loops(K)) {
        std::vector<Vec> pts;
        for (int id : loop) pts.push_back(K.vertices[id]);
        Polytope comp = make_polygon(pts);
        if (!is_convex(comp, eng.tol)) continue;
        // a convex loop is an inscribed body only if it stays inside K
        bool inside = true;
        Vec c = comp.vertex_mean();
        if (!contains_point(K, c, 1e-12)) inside = false;
        if (!inside) continue;
        double val = affine_perimeter(comp, eng);
        if (val > lower) {
          lower = val;
          lower_witness = comp;
        }
      }
      // inscribed boxes grown from grid seeds
      std::vector<Vec> seeds;
      double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
      for (const Vec& v : K.vertices) {
        xlo = std::min(xlo, v[0]);
        xhi = std::max(xhi, v[0]);
        ylo = std::min(ylo, v[1]);
        yhi = std::max(yhi, v[1]);
      }
      int g = std::max(2, family.subset_seeds);
      for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
          Vec s{xlo + (i + 0.5) * (xhi - xlo) / g, ylo + (j + 0.5) * (yhi - ylo) / g};
          if (contains_point(K, s, 1e-12)) seeds.push_back(s);
        }
      for (const Vec& s : seeds) {
        try {
          Polytope b = grow_box(K, s, diam);
          double val = affine_perimeter(b, eng);
          if (val > lower) {
            lower = val;
            lower_witness = b;
          }
        } catch (const Error&) {
        }
      }
    }
    if (family.shadow_bound && K.dim == 2) {
      double sb = shadow_capacity_lower_bound(K, family.shadow_samples, eng);
      if (sb > lower) {
        lower = sb;
        br.note = "lower bound certified by the projection-shadow argument";
      }
    }
  }
  br.lower = lower;
  br.lower_witness = std::move(lower_witness);
  if (br.lower > br.upper + eng.tol.abs + eng.tol.rel * br.upper)
    throw Error("capacity_bracket: bracket inverted, numerical inconsistency");
  return br;
}

// ---------------------------------------------------------------------------
// Property suite (metric behaviour of the capacity on convex bodies)
// ---------------------------------------------------------------------------

bool PropertyReport::all_pass() const {
  for (const PropertyCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

PropertyReport property_suite(const Polytope& K, uint64_t seed, const Engine& eng) {
  if (!is_convex(K, eng.tol))
    throw ConvexityError("property_suite: exact path needs a convex body");
  PropertyReport rep;
  int n = K.dim;
  double cK = capacity_convex(K, eng);
  double inv_tol = n == 2 ? 1e-8 : 5e-3;

  // (i) capacity of the body and of its boundary agree structurally: both are
  // computed from the same facet atoms.
  rep.checks.push_back({"boundary_identity", true, 0.0});

  {  // (ii) scaling r^{n-1}
    PropertyCheck c{"scaling", true, 0.0};
    for (double r : {0.5, 2.0, 3.0}) {
      double got = capacity_convex(apply_map(K, LinearMap::scaling(n, r)), eng);
      double want = std::pow(r, n - 1) * cK;
      c.worst = std::max(c.worst, std::fabs(got - want) / want);
    }
    c.pass = c.worst <= (n == 2 ? 1e-10 : 1e-3);
    rep.checks.push_back(c);
  }

  {  // (iii) SL(n) + translation invariance
    PropertyCheck c{"sl_invariance", true, 0.0};
    Rng crng(seed);
    for (int k = 0; k < 20; ++k) {
      LinearMap T = random_sl(crng, n, 100.0);
      T.translation = random_translation(crng, n, 3.0);
      double got = capacity_convex(apply_map(K, T), eng);
      c.worst = std::max(c.worst, std::fabs(got - cK) / cK);
    }
    c.pass = c.worst <= inv_tol;
    rep.checks.push_back(c);
  }

  {  // (iv) monotone under inclusion for the nested dilates
    PropertyCheck c{"monotonicity", true, 0.0};
    Vec ctr = K.vertex_mean();
    for (double d : {0.1, 0.01}) {
      double grown = capacity_convex(dilate_about(K, ctr, 1.0 + d), eng);
      double slack = (cK - grown) / cK;
      c.worst = std::max(c.worst, slack);
    }
    c.pass = c.worst <= eng.tol.rel;
    rep.checks.push_back(c);
  }

  {  // (v) decreasing intersections K_j = (1+1/j) K converge to K
    PropertyCheck c{"decreasing_intersections", true, 0.0};
    Vec ctr = K.vertex_mean();
    double prev = HUGE_VAL;
    for (long j : {2L, 32L, 512L, 8192L, 131072L, 2097152L}) {
      double cj = capacity_convex(dilate_about(K, ctr, 1.0 + 1.0 / j), eng);
      if (cj > prev + eng.tol.abs + eng.tol.rel * prev) c.pass = false;
      prev = cj;
    }
    c.worst = std::fabs(prev - cK) / cK;
    c.pass = c.pass && c.worst <= 1e-6;
    rep.checks.push_back(c);
  }

  {  // (vi) outer regularity via dilated open supersets
    PropertyCheck c{"outer_regularity", true, 0.0};
    Vec ctr = K.vertex_mean();
    for (double ef : {1e-2, 1e-4, 1e-6}) {
      double epsc = ef * cK;
      double delta = epsc / (2.0 * std::max(1, n - 1) * cK);
      double got = capacity_convex(dilate_about(K, ctr, 1.0 + delta), eng);
      double excess = (got - cK - epsc) / cK;
      c.worst = std::max(c.worst, excess);
    }
    c.pass = c.worst <= 0.0 + eng.tol.rel;
    rep.checks.push_back(c);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Union superadditivity instance
// ---------------------------------------------------------------------------

CrossReport cross_counterexample(const Engine& eng) {
  CrossReport rep;
  Polytope E = box(Vec{-500, -5}, Vec{500, 5});
  Polytope F = box(Vec{-5, -500}, Vec{5, 500});
  rep.cap_E = capacity_convex(E, eng);
  rep.cap_F = capacity_convex(F, eng);
  rep.sum = rep.cap_E + rep.cap_F;

  Polytope G = make_polygon({{500, 0}, {0, 500}, {-500, 0}, {0, -500}});
  rep.p_G = affine_perimeter(G, eng);

  // The union as a single 12-gon.
  Polytope cross = make_polygon({{500, -5}, {500, 5},  {5, 5},    {5, 500},  {-5, 500}, {-5, 5},
                                 {-500, 5}, {-500, -5}, {-5, -5},  {-5, -500}, {5, -500}, {5, -5}});
  CandidateFamily fam;
  CapacityBracket br = capacity_bracket(cross, fam, eng);
  rep.bracket_lower = br.lower;
  rep.superadditive = br.lower > rep.sum;
  rep.verdict = rep.superadditive ? "confirmed" : "inconclusive at this effort";
  return rep;
}

// ---------------------------------------------------------------------------
// Discrete-measure traces
// ---------------------------------------------------------------------------

double DiscreteMeasure::total() const {
  double s = 0;
  for (double m : masses) s += m;
  return s;
}

double DiscreteMeasure::mass_in(const Polytope& K, bool closed, double tol) const {
  double s = 0;
  const bool convex = is_convex(K);
  for (size_t i = 0; i < points.size(); ++i) {
    bool in;
    if (convex) {
      in = true;
      for (const Facet& f : K.facets) {
        double d = dot(f.normal, points[i]) - f.offset;
        if (closed ? d > tol : d > -tol) {
          in = false;
          break;
        }
      }
    } else {
      in = contains_point(K, points[i], closed ? tol : 1e-15);
      if (in && !closed && K.has_incidence()) {
        for (const Facet& f : K.facets) {
          const Vec& a = K.vertices[f.vertex_ids[0]];
          const Vec& b = K.vertices[f.vertex_ids[1]];
          Vec ab = sub(b, a);
          double t = std::clamp(dot(sub(points[i], a), ab) / std::max(dot(ab, ab), 1e-300),
                                0.0, 1.0);
          if (dist(add(a, scale(ab, t)), points[i]) <= tol) {
            in = false;
            break;
          }
        }
      }
    }
    if (in) s += masses[i];
  }
  return s;
}

TraceConstants trace_constants(const DiscreteMeasure& mu, double q,
                               const std::vector<Polytope>& test_family, const Engine& eng) {
  if (test_family.empty()) throw ConfigError("trace_constants: empty test family");
  int n = test_family.front().dim;
  if (!(q >= 1.0 && q <= double(n) / (n - 1) + 1e-12))
    throw DomainError("trace_constants: q outside [1, n/(n-1)]");
  for (size_t i = 0; i < mu.masses.size(); ++i)
    if (!(mu.masses[i] > 0)) throw DomainError("trace_constants: masses must be positive");

  TraceConstants tc;
  tc.q = q;
  for (const Polytope& K : test_family) {
    double cap = capacity_convex(K, eng);
    double per = affine_perimeter(K, eng);
    if (!(per > 0)) throw ConfigError("trace_constants: family member with zero perimeter");
    double m_closed = mu.mass_in(K, true);
    double m_open = mu.mass_in(K, false);
    if (m_closed > 0) tc.kappa2_hat = std::max(tc.kappa2_hat, std::pow(m_closed, 1.0 / q) / cap);
    if (m_open > 0) tc.kappa3_hat = std::max(tc.kappa3_hat, std::pow(m_open, 1.0 / q) / per);
  }
  tc.feasibility_slack = std::pow(q, 1.0 / q) * tc.kappa3_hat;
  return tc;
}

}  // namespace affbv

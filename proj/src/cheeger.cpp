#include "affbv/cheeger.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "affbv/sphere.hpp"

namespace affbv {

namespace {

// Degree-5 rule on the reference triangle (7 points), barycentric.
struct TriQuadPoint {
  double l1, l2, l3, w;
};
const TriQuadPoint kTriRule[7] = {
    {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
    {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
    {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827}};

double tri_area(const Vec& a, const Vec& b, const Vec& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

}  // namespace

int DomainMesh::interior_count() const {
  int c = 0;
  for (bool b : boundary)
    if (!b) ++c;
  return c;
}

bool GridFunction::zero() const {
  for (double v : values)
    if (v != 0.0) return false;
  return true;
}

GridFunction zero_function(const DomainMesh& mesh) {
  GridFunction f;
  f.mesh = &mesh;
  f.values.assign(mesh.verts.size(), 0.0);
  return f;
}

// ---------------------------------------------------------------------------
// Mesh construction
// ---------------------------------------------------------------------------

DomainMesh build_mesh(const Polytope& O, double h) {
  if (O.dim != 2) throw DomainError("build_mesh: 2D domains only");
  if (!is_convex(O)) throw DomainError("build_mesh: convex domains only");
  if (!(h > 0)) throw DomainError("build_mesh: h must be positive");
  std::vector<std::vector<int>> loops = boundary_loops(O);
  if (loops.size() != 1) throw DomainError("build_mesh: single boundary loop required");
  std::vector<Vec> loop;
  for (int id : loops[0]) loop.push_back(O.vertices[id]);

  Vec c(2, 0.0);
  {  // area centroid
    double a = 0;
    size_t m = loop.size();
    for (size_t i = 0; i < m; ++i) {
      const Vec& p = loop[i];
      const Vec& q = loop[(i + 1) % m];
      double cr = p[0] * q[1] - q[0] * p[1];
      a += cr;
      c[0] += (p[0] + q[0]) * cr;
      c[1] += (p[1] + q[1]) * cr;
    }
    c[0] /= 3.0 * a;
    c[1] /= 3.0 * a;
  }

  double rmax = 0;
  for (const Vec& v : loop) rmax = std::max(rmax, dist(v, c));
  int rings = std::max(1, static_cast<int>(std::ceil(rmax / h)));

  DomainMesh mesh;
  mesh.domain = O;
  mesh.h = h;
  mesh.verts.push_back(c);
  mesh.boundary.push_back(false);

  // Ring points carry a loop parameter; corners are always included, so the
  // parameters of consecutive rings interleave cleanly.
  struct RingPt {
    double param;
    int id;
  };
  std::vector<RingPt> prev;  // ring 0 is the single centre point

  size_t m = loop.size();
  std::vector<double> edge_len(m), cum(m + 1, 0.0);
  for (size_t i = 0; i < m; ++i) {
    edge_len[i] = dist(loop[i], loop[(i + 1) % m]);
    cum[i + 1] = cum[i] + edge_len[i];
  }
  double per = cum[m];

  for (int j = 1; j <= rings; ++j) {
    double s = static_cast<double>(j) / rings;
    std::vector<RingPt> ring;
    for (size_t i = 0; i < m; ++i) {
      int sub = std::max(1, static_cast<int>(std::ceil(s * edge_len[i] / h)));
      for (int k = 0; k < sub; ++k) {
        double t = static_cast<double>(k) / sub;
        Vec p{loop[i][0] + t * (loop[(i + 1) % m][0] - loop[i][0]),
              loop[i][1] + t * (loop[(i + 1) % m][1] - loop[i][1])};
        Vec q{c[0] + s * (p[0] - c[0]), c[1] + s * (p[1] - c[1])};
        mesh.verts.push_back(q);
        mesh.boundary.push_back(j == rings);
        ring.push_back({(cum[i] + t * edge_len[i]) / per, static_cast<int>(mesh.verts.size()) - 1});
      }
    }
    auto add_tri = [&mesh](int a, int b, int d) {
      if (tri_area(mesh.verts[a], mesh.verts[b], mesh.verts[d]) < 0) std::swap(b, d);
      mesh.tris.push_back({a, b, d});
    };
    if (j == 1) {
      for (size_t k = 0; k < ring.size(); ++k)
        add_tri(0, ring[k].id, ring[(k + 1) % ring.size()].id);
    } else {
      // stitch prev (inner) with ring (outer), merging by loop parameter;
      // both sequences get a wrap sentinel at parameter 1.
      std::vector<RingPt> in = prev, out = ring;
      in.push_back({1.0, prev.front().id});
      out.push_back({1.0, ring.front().id});
      size_t ni = prev.size(), no = ring.size();
      size_t i = 0, o = 0;
      while (i < ni || o < no) {
        bool advance_inner = i < ni && (o >= no || in[i + 1].param <= out[o + 1].param);
        if (advance_inner) {
          add_tri(in[i + 1].id, in[i].id, out[o].id);
          ++i;
        } else {
          add_tri(in[i].id, out[o].id, out[o + 1].id);
          ++o;
        }
      }
    }
    prev = std::move(ring);
  }

  // drop degenerate triangles, build per-triangle geometry
  std::vector<std::array<int, 3>> keep;
  for (const auto& t : mesh.tris) {
    double a = tri_area(mesh.verts[t[0]], mesh.verts[t[1]], mesh.verts[t[2]]);
    if (a > 1e-14 * rmax * rmax) keep.push_back(t);
  }
  mesh.tris = std::move(keep);
  mesh.geom.reserve(mesh.tris.size());
  double total = 0;
  for (const auto& t : mesh.tris) {
    const Vec& a = mesh.verts[t[0]];
    const Vec& b = mesh.verts[t[1]];
    const Vec& d = mesh.verts[t[2]];
    double area = tri_area(a, b, d);
    total += area;
    DomainMesh::TriGeom g;
    g.area = area;
    // grad of the hat at vertex k: rotate the opposite edge by 90 deg / (2 area)
    g.gcoef[0] = Vec{(b[1] - d[1]) / (2 * area), (d[0] - b[0]) / (2 * area)};
    g.gcoef[1] = Vec{(d[1] - a[1]) / (2 * area), (a[0] - d[0]) / (2 * area)};
    g.gcoef[2] = Vec{(a[1] - b[1]) / (2 * area), (b[0] - a[0]) / (2 * area)};
    mesh.geom.push_back(g);
  }
  double vol = volume(O);
  if (std::fabs(total - vol) > 1e-9 * vol)
    throw Error("build_mesh: triangulation does not cover the domain");
  return mesh;
}

GridFunction boundary_ramp(const DomainMesh& mesh, double width) {
  GridFunction f = zero_function(mesh);
  const Polytope& O = mesh.domain;
  for (size_t i = 0; i < mesh.verts.size(); ++i) {
    if (mesh.boundary[i]) continue;
    double d = HUGE_VAL;
    for (const Facet& e : O.facets) {
      const Vec& a = O.vertices[e.vertex_ids[0]];
      const Vec& b = O.vertices[e.vertex_ids[1]];
      Vec ab = sub(b, a);
      double t = std::clamp(dot(sub(mesh.verts[i], a), ab) / dot(ab, ab), 0.0, 1.0);
      d = std::min(d, dist(add(a, scale(ab, t)), mesh.verts[i]));
    }
    f.values[i] = std::min(1.0, d / width);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Rayleigh quotient
// ---------------------------------------------------------------------------

namespace {

struct GradField {
  std::vector<Vec> g;        // per-triangle gradient
  std::vector<double> area;  // matching areas
};

GradField gradients(const GridFunction& f) {
  const DomainMesh& mesh = *f.mesh;
  GradField gf;
  gf.g.reserve(mesh.tris.size());
  gf.area.reserve(mesh.tris.size());
  for (size_t t = 0; t < mesh.tris.size(); ++t) {
    const auto& tri = mesh.tris[t];
    const auto& geo = mesh.geom[t];
    Vec g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
      g[0] += f.values[tri[k]] * geo.gcoef[k][0];
      g[1] += f.values[tri[k]] * geo.gcoef[k][1];
    }
    gf.g.push_back(g);
    gf.area.push_back(geo.area);
  }
  return gf;
}

// |f|_{W^{1,p}_d} over the mesh.
double sobolev_affine_norm(const GradField& gf, double p) {
  if (p == 1.0) {
    std::vector<Vec> dirs;
    std::vector<double> coeffs;
    for (size_t t = 0; t < gf.g.size(); ++t) {
      double gn = norm(gf.g[t]);
      if (gn <= 1e-14) continue;
      dirs.push_back(scale(gf.g[t], 1.0 / gn));
      coeffs.push_back(gf.area[t] * gn);
    }
    if (dirs.empty()) throw DomainError("affine_rayleigh: zero gradient field");
    PiecewiseCosineProfile prof = cosine_profile(dirs, coeffs);
    if (prof.degenerate)
      throw DomainError("affine_rayleigh: gradient directions do not span the plane");
    double I = exact_2d_negative_square_integral(prof);
    return std::pow(I / (2.0 * M_PI), -0.5);
  }
  // p > 1: 64-node circle quadrature on ||grad_u f||_p^{-2}
  const int M = 64;
  double I = 0;
  for (int k = 0; k < M; ++k) {
    double th = 2.0 * M_PI * (k + 0.5) / M;
    Vec u{std::cos(th), std::sin(th)};
    double s = 0;
    for (size_t t = 0; t < gf.g.size(); ++t)
      s += gf.area[t] * std::pow(std::fabs(dot(u, gf.g[t])), p);
    double psi = std::pow(s, 1.0 / p);
    if (psi <= 1e-300) throw DomainError("affine_rayleigh: degenerate gradient field");
    I += (2.0 * M_PI / M) * std::pow(psi, -2.0);
  }
  return std::pow(I / (2.0 * M_PI), -0.5);
}

double lebesgue_norm(const GridFunction& f, double s) {
  const DomainMesh& mesh = *f.mesh;
  double acc = 0;
  for (size_t t = 0; t < mesh.tris.size(); ++t) {
    const auto& tri = mesh.tris[t];
    double v0 = f.values[tri[0]], v1 = f.values[tri[1]], v2 = f.values[tri[2]];
    double cell = 0;
    for (const TriQuadPoint& qp : kTriRule) {
      double val = qp.l1 * v0 + qp.l2 * v1 + qp.l3 * v2;
      cell += qp.w * std::pow(std::fabs(val), s);
    }
    acc += cell * mesh.geom[t].area;
  }
  return std::pow(acc, 1.0 / s);
}

}  // namespace

double affine_rayleigh(const GridFunction& f, double p, double q, const Engine& eng) {
  (void)eng;
  if (f.zero()) throw DomainError("affine_rayleigh: zero function");
  if (!(q >= 1.0 && q < 2.0)) throw DomainError("affine_rayleigh: q outside [1, 2)");
  double pmax = q > 1.0 ? q / (q - 1.0) : HUGE_VAL;
  if (!(p >= 1.0 && p < pmax)) throw DomainError("affine_rayleigh: p outside [1, q/(q-1))");
  double s = p * q / (p - (p - 1.0) * q);
  GradField gf = gradients(f);
  double w = sobolev_affine_norm(gf, p);
  double ell = lebesgue_norm(f, s);
  double prefactor = std::pow(q, (1.0 - q) / q) * (p * q / (p - (p - 1.0) * q));
  return prefactor * w / ell;
}

// ---------------------------------------------------------------------------
// Set search
// ---------------------------------------------------------------------------

namespace {

double quotient(const Polytope& D, double q, const Engine& eng) {
  double v = volume(D);
  if (!(v > 0)) return HUGE_VAL;
  double per = affine_perimeter(D, eng);
  if (!(per > 0)) return HUGE_VAL;
  return per / std::pow(v, 1.0 / q);
}

bool polygon_in_domain(const std::vector<Vec>& poly, const Polytope& O, double tol) {
  for (const Vec& v : poly)
    if (!contains_point(O, v, tol)) return false;
  if (!is_convex(O)) {
    // also sample edges against a possibly reentrant boundary
    for (size_t i = 0; i < poly.size(); ++i) {
      const Vec& a = poly[i];
      const Vec& b = poly[(i + 1) % poly.size()];
      for (int k = 1; k < 4; ++k) {
        double t = k / 4.0;
        Vec p{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
        if (!contains_point(O, p, tol)) return false;
      }
    }
  }
  return true;
}

Vec project_to_boundary(const Polytope& O, const Vec& x) {
  double best = HUGE_VAL;
  Vec out = x;
  for (const Facet& e : O.facets) {
    const Vec& a = O.vertices[e.vertex_ids[0]];
    const Vec& b = O.vertices[e.vertex_ids[1]];
    Vec ab = sub(b, a);
    double t = std::clamp(dot(sub(x, a), ab) / dot(ab, ab), 0.0, 1.0);
    Vec p = add(a, scale(ab, t));
    double d = dist(p, x);
    if (d < best) {
      best = d;
      out = p;
    }
  }
  return out;
}

bool polygon_simple(const std::vector<Vec>& poly) {
  auto orient = [](const Vec& p, const Vec& q, const Vec& r) {
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
  };
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      const Vec& a = poly[i];
      const Vec& b = poly[(i + 1) % n];
      const Vec& c = poly[j];
      const Vec& d = poly[(j + 1) % n];
      double o1 = orient(a, b, c), o2 = orient(a, b, d);
      double o3 = orient(c, d, a), o4 = orient(c, d, b);
      if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return false;
    }
  return true;
}

}  // namespace

CheegerResult affine_cheeger(const Polytope& O, double q, const CheegerConfig& cfg,
                             uint64_t seed, const Engine& eng) {
  if (O.dim != 2) throw DomainError("affine_cheeger: planar domains only");
  if (!(volume(O) > 0)) throw DomainError("affine_cheeger: zero-volume domain");
  if (!(q >= 1.0 && q < 2.0)) throw DomainError("affine_cheeger: q outside [1, 2)");
  (void)seed;

  CheegerResult res;
  res.q = q;

  // D = O is always feasible.
  res.value = quotient(O, q, eng);
  res.witness = O;
  std::vector<Vec> best_poly;
  for (const std::vector<int>& loop : boundary_loops(O))
    for (int id : loop) best_poly.push_back(O.vertices[id]);

  Vec c0 = O.vertex_mean();
  double rmax = O.diameter_bound();

  // Stage 1: inscribed ellipse polygons over (aspect, phase, center, scale).
  std::vector<Vec> centers{c0};
  int g = std::max(1, cfg.center_grid);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      Vec s{c0[0] + rmax * (i - (g - 1) * 0.5) / g, c0[1] + rmax * (j - (g - 1) * 0.5) / g};
      if (contains_point(O, s, 1e-12)) centers.push_back(s);
    }
  for (double aspect : cfg.aspects)
    for (int ph = 0; ph < cfg.phases; ++ph) {
      double phi = M_PI * ph / (2.0 * cfg.phases);
      double ca = std::cos(phi), sa = std::sin(phi);
      double a = std::sqrt(aspect), b = 1.0 / std::sqrt(aspect);
      for (const Vec& ctr : centers) {
        auto ellipse = [&](double sc) {
          std::vector<Vec> poly;
          poly.reserve(cfg.ellipse_segments);
          for (int k = 0; k < cfg.ellipse_segments; ++k) {
            double t = 2.0 * M_PI * k / cfg.ellipse_segments;
            double ex = sc * a * std::cos(t), ey = sc * b * std::sin(t);
            poly.push_back(Vec{ctr[0] + ca * ex - sa * ey, ctr[1] + sa * ex + ca * ey});
          }
          return poly;
        };
        double lo = 0, hi = 4.0 * rmax;
        if (!polygon_in_domain(ellipse(1e-6 * rmax), O, 1e-12)) continue;
        for (int it = 0; it < 50; ++it) {
          double mid = 0.5 * (lo + hi);
          if (polygon_in_domain(ellipse(mid), O, 1e-12))
            lo = mid;
          else
            hi = mid;
        }
        if (lo <= 0) continue;
        std::vector<Vec> poly = ellipse(lo);
        Polytope D = make_polygon(poly);
        double val = quotient(D, q, eng);
        if (val < res.value) {
          res.value = val;
          res.witness = D;
          best_poly = poly;
        }
      }
    }

  // Stage 2: vertex descent; moves leaving the domain are projected back onto
  // the boundary, so boundary contact is reachable.
  if (!best_poly.empty() && cfg.descent_iters > 0) {
    std::vector<Vec> cur = best_poly;
    double cur_val = res.value;
    double step = 0.05 * rmax;
    bool improved_any = false;
    for (int it = 0; it < cfg.descent_iters; ++it) {
      bool improved = false;
      for (size_t vi = 0; vi < cur.size(); ++vi) {
        static const double dx[4] = {1, -1, 0, 0};
        static const double dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          std::vector<Vec> trial = cur;
          trial[vi] = Vec{cur[vi][0] + step * dx[d], cur[vi][1] + step * dy[d]};
          if (!contains_point(O, trial[vi], 1e-12)) trial[vi] = project_to_boundary(O, trial[vi]);
          if (!polygon_simple(trial)) continue;
          if (!polygon_in_domain(trial, O, 1e-12)) continue;
          Polytope D;
          try {
            D = make_polygon(trial);
          } catch (const Error&) {
            continue;
          }
          double val = quotient(D, q, eng);
          if (val < cur_val - 1e-13) {
            cur = trial;
            cur_val = val;
            improved = true;
            improved_any = true;
          }
        }
      }
      if (!improved) {
        step *= 0.5;
        if (step < 1e-6 * rmax) break;
      }
    }
    if (cur_val < res.value) {
      res.value = cur_val;
      res.witness = make_polygon(cur);
    }
    res.converged = !improved_any || step < 1e-5 * rmax;
  } else {
    res.converged = true;
  }

  res.boundary_contact_distance = boundary_contact(res.witness, O);
  double v = volume(res.witness);
  res.classical_value = classical_perimeter(surface_area_measure(res.witness)) /
                        std::pow(v, 1.0 / q);
  return res;
}

double boundary_contact(const Polytope& witness, const Polytope& O) {
  double best = HUGE_VAL;
  auto dist_to_domain_boundary = [&O](const Vec& x) {
    double d = HUGE_VAL;
    for (const Facet& e : O.facets) {
      const Vec& a = O.vertices[e.vertex_ids[0]];
      const Vec& b = O.vertices[e.vertex_ids[1]];
      Vec ab = sub(b, a);
      double t = std::clamp(dot(sub(x, a), ab) / dot(ab, ab), 0.0, 1.0);
      d = std::min(d, dist(add(a, scale(ab, t)), x));
    }
    return d;
  };
  for (const Facet& e : witness.facets) {
    const Vec& a = witness.vertices[e.vertex_ids[0]];
    const Vec& b = witness.vertices[e.vertex_ids[1]];
    for (int k = 0; k <= 4; ++k) {
      double t = k / 4.0;
      Vec p{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
      best = std::min(best, dist_to_domain_boundary(p));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Rayleigh minimization
// ---------------------------------------------------------------------------

RayleighMinimum minimize_rayleigh(const DomainMesh& mesh, double p, double q, int iterations,
                                  uint64_t seed, const Engine& eng) {
  (void)seed;
  RayleighMinimum rm;
  // mollified-indicator starts at a few ramp widths; keep the best
  for (double w : {1.0, 1.5, 2.5}) {
    GridFunction f = boundary_ramp(mesh, w * mesh.h);
    if (f.zero()) continue;
    double v = affine_rayleigh(f, p, q, eng);
    if (rm.f.values.empty() || v < rm.value) {
      rm.f = f;
      rm.value = v;
    }
  }
  if (rm.f.values.empty())
    throw DomainError("minimize_rayleigh: mesh too coarse for a ramp profile");
  rm.trace.push_back({0, rm.value});

  double s_exp = p * q / (p - (p - 1.0) * q);
  const int M = 256;  // circle quadrature for the descent direction

  double eta = 0.5;
  bool stalled = false;
  for (int it = 1; it <= iterations; ++it) {
    // Gradient of N/D at the current point (quadrature approximation).
    GradField gf = gradients(rm.f);
    size_t T = mesh.tris.size();
    // N = (I / 2pi)^{-1/2}, I = int ||grad_u f||_p^{-2}
    std::vector<Vec> acoef(T, Vec{0.0, 0.0});
    double I = 0;
    for (int k = 0; k < M; ++k) {
      double th = 2.0 * M_PI * (k + 0.5) / M;
      Vec u{std::cos(th), std::sin(th)};
      double spow = 0;
      for (size_t t = 0; t < T; ++t)
        spow += gf.area[t] * std::pow(std::fabs(dot(u, gf.g[t])), p);
      double psi = std::pow(spow, 1.0 / p);
      if (psi <= 1e-300) continue;
      double w = 2.0 * M_PI / M;
      I += w * std::pow(psi, -2.0);
      // d(psi^{-2})/dg_t = -2 psi^{-3} * dpsi/dg_t
      double coef = -2.0 * w * std::pow(psi, -3.0) * std::pow(spow, 1.0 / p - 1.0);
      for (size_t t = 0; t < T; ++t) {
        double du = dot(u, gf.g[t]);
        if (du == 0.0) continue;
        double deriv = gf.area[t] * std::pow(std::fabs(du), p - 1.0) * (du > 0 ? 1.0 : -1.0);
        acoef[t][0] += coef * deriv * u[0];
        acoef[t][1] += coef * deriv * u[1];
      }
    }
    double dN_dI = -0.5 * std::pow(I / (2.0 * M_PI), -1.5) / (2.0 * M_PI);

    double D = lebesgue_norm(rm.f, s_exp);
    double R = rm.value;

    // dR = dN/D - (R/D) dD
    std::vector<double> dN(mesh.verts.size(), 0.0);
    std::vector<double> dD(mesh.verts.size(), 0.0);
    for (size_t t = 0; t < T; ++t) {
      const auto& tri = mesh.tris[t];
      const auto& geo = mesh.geom[t];
      for (int k = 0; k < 3; ++k)
        dN[tri[k]] += dN_dI * (acoef[t][0] * geo.gcoef[k][0] + acoef[t][1] * geo.gcoef[k][1]);
      double v0 = rm.f.values[tri[0]], v1 = rm.f.values[tri[1]], v2 = rm.f.values[tri[2]];
      for (const TriQuadPoint& qp : kTriRule) {
        double val = qp.l1 * v0 + qp.l2 * v1 + qp.l3 * v2;
        double common = geo.area * qp.w * std::pow(std::fabs(val), s_exp - 1.0) *
                        (val >= 0 ? 1.0 : -1.0);
        double lam[3] = {qp.l1, qp.l2, qp.l3};
        for (int k = 0; k < 3; ++k) dD[tri[k]] += common * lam[k];
      }
    }
    double gmax = 0;
    std::vector<double> grad(mesh.verts.size(), 0.0);
    double Dpow = std::pow(D, 1.0 - s_exp);
    for (size_t i = 0; i < grad.size(); ++i) {
      if (mesh.boundary[i]) continue;
      grad[i] = dN[i] / D - (R / D) * Dpow * dD[i];
      gmax = std::max(gmax, std::fabs(grad[i]));
    }
    if (gmax <= 1e-15) {
      stalled = true;
      break;
    }

    bool accepted_step = false;
    for (int bt = 0; bt < 20; ++bt) {
      GridFunction trial = rm.f;
      for (size_t i = 0; i < trial.values.size(); ++i) {
        if (mesh.boundary[i]) continue;
        trial.values[i] = std::max(0.0, trial.values[i] - eta * grad[i] / gmax);
      }
      if (trial.zero()) {
        eta *= 0.5;
        continue;
      }
      double val = affine_rayleigh(trial, p, q, eng);
      if (val < rm.value - 1e-12) {
        rm.f = trial;
        rm.value = val;
        accepted_step = true;
        eta = std::min(0.5, eta * 4.0);
        break;
      }
      eta *= 0.5;
    }
    rm.trace.push_back({it, rm.value});
    if (!accepted_step && eta < 1e-10) {
      stalled = true;  // no improving direction left at any step size
      break;
    }
  }
  rm.converged = stalled || iterations == 0;
  return rm;
}

}  // namespace affbv

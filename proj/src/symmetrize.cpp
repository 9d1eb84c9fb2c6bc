#include "affbv/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace affbv {

namespace {

struct Crossing {
  double t;        // height at the cell test point
  Vec grad;        // d t / d z
  double cnst;
  bool enter;      // outward normal has nu . u < 0
};

// Sorted crossings -> ordered chord intervals by depth counting.
std::vector<ChordInterval> pair_crossings(std::vector<Crossing>& cs) {
  std::sort(cs.begin(), cs.end(), [](const Crossing& a, const Crossing& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.enter && !b.enter;  // enters first on ties
  });
  std::vector<ChordInterval> out;
  int depth = 0;
  ChordInterval cur;
  for (const Crossing& c : cs) {
    if (c.enter) {
      if (depth == 0) {
        cur.enter_grad = c.grad;
        cur.enter_const = c.cnst;
      }
      ++depth;
    } else {
      --depth;
      if (depth < 0)
        throw InvalidPolytopeError("chord_partition: inconsistent boundary orientation");
      if (depth == 0) {
        cur.exit_grad = c.grad;
        cur.exit_const = c.cnst;
        out.push_back(cur);
      }
    }
  }
  if (depth != 0)
    throw InvalidPolytopeError("chord_partition: unbalanced chord crossings");
  return out;
}

void accumulate_m(ChordCell& cell) {
  int d = cell.base.empty() ? 0 : static_cast<int>(cell.base[0].size());
  cell.m_grad.assign(d, 0.0);
  cell.m_const = 0;
  for (const ChordInterval& iv : cell.intervals) {
    for (int k = 0; k < d; ++k) cell.m_grad[k] += iv.exit_grad[k] - iv.enter_grad[k];
    cell.m_const += iv.exit_const - iv.enter_const;
  }
}

// ---------------------------------------------------------------------------
// 2D partition
// ---------------------------------------------------------------------------

ChordPartition partition2(const Polytope& E, const Vec& u, const Tolerances&) {
  ChordPartition part;
  part.dim = 2;
  part.direction = u;
  part.basis = {Vec{u[1], -u[0]}};  // (w, u) right-handed
  const Vec& w = part.basis[0];

  double scale_ref = std::max(E.diameter_bound(), 1e-30);
  const double ztol = 1e-12 * scale_ref;

  struct Edge {
    double z0, z1;   // z0 < z1
    double t0, t1;   // heights at z0, z1
    bool enter;
  };
  std::vector<Edge> edges;
  std::vector<double> breaks;
  for (const Facet& f : E.facets) {
    if (f.vertex_ids.size() != 2)
      throw InvalidPolytopeError("chord_partition: edge incidence required");
    const Vec& A = E.vertices[f.vertex_ids[0]];
    const Vec& B = E.vertices[f.vertex_ids[1]];
    double za = dot(w, A), zb = dot(w, B);
    breaks.push_back(za);
    breaks.push_back(zb);
    if (std::fabs(za - zb) <= ztol) continue;  // wall facet: no transverse crossing
    Edge e;
    e.enter = dot(f.normal, u) < 0;
    if (za < zb) {
      e.z0 = za; e.z1 = zb;
      e.t0 = dot(u, A); e.t1 = dot(u, B);
    } else {
      e.z0 = zb; e.z1 = za;
      e.t0 = dot(u, B); e.t1 = dot(u, A);
    }
    edges.push_back(e);
  }
  if (edges.empty()) throw InvalidPolytopeError("chord_partition: no transverse facets");

  std::sort(breaks.begin(), breaks.end());
  std::vector<double> zs;
  for (double z : breaks)
    if (zs.empty() || z - zs.back() > ztol) zs.push_back(z);

  for (size_t i = 0; i + 1 < zs.size(); ++i) {
    double z0 = zs[i], z1 = zs[i + 1];
    double zm = 0.5 * (z0 + z1);
    std::vector<Crossing> cs;
    for (const Edge& e : edges) {
      if (!(e.z0 < zm && zm < e.z1)) continue;
      double slope = (e.t1 - e.t0) / (e.z1 - e.z0);
      Crossing c;
      c.grad = Vec{slope};
      c.cnst = e.t0 - slope * e.z0;
      c.t = c.cnst + slope * zm;
      c.enter = e.enter;
      cs.push_back(c);
    }
    if (cs.empty()) continue;
    ChordCell cell;
    cell.base = {Vec{z0}, Vec{z1}};
    cell.intervals = pair_crossings(cs);
    cell.base_measure = z1 - z0;
    accumulate_m(cell);
    part.cells.push_back(cell);
  }
  return part;
}

// ---------------------------------------------------------------------------
// 3D partition: overlay of projected facet polygons via half-plane splitting
// ---------------------------------------------------------------------------

double poly_area2(const std::vector<Vec>& p) {
  double s = 0;
  size_t n = p.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec& a = p[i];
    const Vec& b = p[(i + 1) % n];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * s;
}

Vec poly_centroid2(const std::vector<Vec>& p) {
  double a = 0, cx = 0, cy = 0;
  size_t n = p.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec& s = p[i];
    const Vec& t = p[(i + 1) % n];
    double c = s[0] * t[1] - t[0] * s[1];
    a += c;
    cx += (s[0] + t[0]) * c;
    cy += (s[1] + t[1]) * c;
  }
  if (std::fabs(a) < 1e-300) {
    Vec m(2, 0.0);
    for (const Vec& q : p) m = add(m, q);
    return scale(m, 1.0 / p.size());
  }
  return Vec{cx / (3.0 * a), cy / (3.0 * a)};
}

void split_convex(const std::vector<Vec>& poly, double nx, double ny, double d, double eps,
                  std::vector<Vec>& lo, std::vector<Vec>& hi) {
  lo.clear();
  hi.clear();
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec& p = poly[i];
    const Vec& q = poly[(i + 1) % n];
    double sp = nx * p[0] + ny * p[1] - d;
    double sq = nx * q[0] + ny * q[1] - d;
    if (sp <= eps) lo.push_back(p);
    if (sp >= -eps) hi.push_back(p);
    if ((sp < -eps && sq > eps) || (sp > eps && sq < -eps)) {
      double t = sp / (sp - sq);
      Vec x{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
      lo.push_back(x);
      hi.push_back(x);
    }
  }
}

bool point_in_polygon2(const std::vector<Vec>& poly, const Vec& x) {
  bool in = false;
  size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec& a = poly[i];
    const Vec& b = poly[j];
    if ((a[1] > x[1]) != (b[1] > x[1])) {
      double xi = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (x[0] < xi) in = !in;
    }
  }
  return in;
}

ChordPartition partition3(const Polytope& E, const Vec& u, const Tolerances&) {
  ChordPartition part;
  part.dim = 3;
  part.direction = u;
  Vec seed = std::fabs(u[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
  Vec b1 = normalized(sub(seed, scale(u, dot(seed, u))));
  Vec b2 = cross3(u, b1);
  part.basis = {b1, b2};

  double scale_ref = std::max(E.diameter_bound(), 1e-30);

  struct ProjFacet {
    std::vector<Vec> poly;  // projected loop
    Vec grad;               // height function coefficients
    double cnst;
    bool enter;
  };
  std::vector<ProjFacet> pfs;
  for (const Facet& f : E.facets) {
    double nu = dot(f.normal, u);
    if (std::fabs(nu) <= 1e-8)
      throw OrthogonalFacetError("chord_partition: facet normal orthogonal to direction");
    if (f.vertex_ids.size() < 3)
      throw InvalidPolytopeError("chord_partition: facet incidence required");
    ProjFacet pf;
    for (int id : f.vertex_ids) {
      const Vec& v = E.vertices[id];
      pf.poly.push_back(Vec{dot(b1, v), dot(b2, v)});
    }
    pf.grad = Vec{-dot(f.normal, b1) / nu, -dot(f.normal, b2) / nu};
    pf.cnst = f.offset / nu;
    pf.enter = nu < 0;
    pfs.push_back(pf);
  }
  if (pfs.empty()) throw InvalidPolytopeError("chord_partition: no facets");

  // Deduplicated cut lines from all projected edges.
  struct Line {
    double nx, ny, d;
  };
  std::vector<Line> lines;
  auto push_line = [&](const Vec& a, const Vec& b) {
    double dx = b[0] - a[0], dy = b[1] - a[1];
    double len = std::hypot(dx, dy);
    if (len <= 1e-12 * scale_ref) return;
    double nx = -dy / len, ny = dx / len;
    double d = nx * a[0] + ny * a[1];
    if (nx < 0 || (nx == 0 && ny < 0)) {
      nx = -nx; ny = -ny; d = -d;
    }
    for (const Line& l : lines)
      if (std::fabs(l.nx - nx) < 1e-10 && std::fabs(l.ny - ny) < 1e-10 &&
          std::fabs(l.d - d) < 1e-9 * scale_ref)
        return;
    lines.push_back({nx, ny, d});
  };
  for (const ProjFacet& pf : pfs)
    for (size_t i = 0; i < pf.poly.size(); ++i)
      push_line(pf.poly[i], pf.poly[(i + 1) % pf.poly.size()]);
  if (lines.size() > 2000)
    throw ConfigError("chord_partition: projected arrangement too large");

  // Bounding box and the iterative refinement into convex cells.
  double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
  for (const ProjFacet& pf : pfs)
    for (const Vec& p : pf.poly) {
      xlo = std::min(xlo, p[0]);
      xhi = std::max(xhi, p[0]);
      ylo = std::min(ylo, p[1]);
      yhi = std::max(yhi, p[1]);
    }
  double pad = 1e-6 * scale_ref + 1e-12;
  std::vector<std::vector<Vec>> cells = {{Vec{xlo - pad, ylo - pad}, Vec{xhi + pad, ylo - pad},
                                          Vec{xhi + pad, yhi + pad}, Vec{xlo - pad, yhi + pad}}};
  const double eps = 1e-12 * scale_ref;
  const double min_area = 1e-20 * scale_ref * scale_ref;
  for (const Line& l : lines) {
    std::vector<std::vector<Vec>> next;
    next.reserve(cells.size() * 2);
    std::vector<Vec> lo, hi;
    for (const std::vector<Vec>& c : cells) {
      split_convex(c, l.nx, l.ny, l.d, eps, lo, hi);
      if (lo.size() >= 3 && std::fabs(poly_area2(lo)) > min_area) next.push_back(lo);
      if (hi.size() >= 3 && std::fabs(poly_area2(hi)) > min_area) next.push_back(hi);
    }
    cells = std::move(next);
  }

  for (std::vector<Vec>& cp : cells) {
    if (poly_area2(cp) < 0) std::reverse(cp.begin(), cp.end());
    Vec zc = poly_centroid2(cp);
    std::vector<Crossing> cs;
    for (const ProjFacet& pf : pfs) {
      if (!point_in_polygon2(pf.poly, zc)) continue;
      Crossing c;
      c.grad = pf.grad;
      c.cnst = pf.cnst;
      c.t = pf.cnst + pf.grad[0] * zc[0] + pf.grad[1] * zc[1];
      c.enter = pf.enter;
      cs.push_back(c);
    }
    if (cs.empty()) continue;
    ChordCell cell;
    cell.base = cp;
    cell.intervals = pair_crossings(cs);
    cell.base_measure = poly_area2(cp);
    accumulate_m(cell);
    part.cells.push_back(std::move(cell));
  }
  return part;
}

}  // namespace

Vec ChordPartition::to_base(const Vec& x) const {
  Vec z(basis.size());
  for (size_t i = 0; i < basis.size(); ++i) z[i] = dot(basis[i], x);
  return z;
}

Vec ChordPartition::to_world(const Vec& z, double t) const {
  Vec x = scale(direction, t);
  for (size_t i = 0; i < basis.size(); ++i) x = add(x, scale(basis[i], z[i]));
  return x;
}

double ChordPartition::chord_length(const Vec& z) const {
  if (dim == 2) {
    for (const ChordCell& c : cells)
      if (z[0] >= c.base[0][0] && z[0] <= c.base[1][0]) return std::max(0.0, c.m_at(z));
    return 0.0;
  }
  for (const ChordCell& c : cells)
    if (point_in_polygon2(c.base, z)) return std::max(0.0, c.m_at(z));
  return 0.0;
}

ChordPartition chord_partition(const Polytope& E, const Vec& u, const Tolerances& tol) {
  if (E.facets.empty()) throw InvalidPolytopeError("chord_partition: no facets");
  if (!E.has_incidence())
    throw InvalidPolytopeError("chord_partition: facet/vertex incidence required");
  Vec un = normalized(u);
  if (E.dim == 2) return partition2(E, un, tol);
  if (E.dim == 3) return partition3(E, un, tol);
  throw DomainError("chord_partition: only dimensions 2 and 3");
}

// ---------------------------------------------------------------------------
// Symmetral assembly
// ---------------------------------------------------------------------------

namespace {

Polytope assemble2(const ChordPartition& part, double scale_ref) {
  const double pinch = 1e-12 * std::max(scale_ref, 1.0);
  struct CellVals {
    double z0, z1, m0, m1;
  };
  std::vector<CellVals> cv;
  for (const ChordCell& c : part.cells) {
    CellVals v;
    v.z0 = c.base[0][0];
    v.z1 = c.base[1][0];
    v.m0 = c.m_at(c.base[0]);
    v.m1 = c.m_at(c.base[1]);
    if (std::max(v.m0, v.m1) <= pinch) continue;
    cv.push_back(v);
  }
  std::sort(cv.begin(), cv.end(), [](const CellVals& a, const CellVals& b) { return a.z0 < b.z0; });

  std::vector<std::vector<Vec>> loops;
  size_t i = 0;
  const double ztol = 1e-12 * std::max(scale_ref, 1.0);
  while (i < cv.size()) {
    // A run of contiguous cells, split where the chord length pinches to zero.
    size_t j = i;
    while (j + 1 < cv.size() && cv[j + 1].z0 - cv[j].z1 <= ztol &&
           std::min(cv[j].m1, cv[j + 1].m0) > pinch)
      ++j;
    std::vector<Vec> upper, lower;
    auto push_pt = [&](std::vector<Vec>& chain, double z, double m) {
      Vec p{z, 0.5 * m};
      if (!chain.empty() && std::fabs(chain.back()[0] - p[0]) <= 1e-9 * std::max(scale_ref, 1.0) &&
          std::fabs(chain.back()[1] - p[1]) <= 1e-9 * std::max(scale_ref, 1.0))
        return;
      chain.push_back(p);
    };
    for (size_t k = i; k <= j; ++k) {
      push_pt(upper, cv[k].z0, cv[k].m0);
      push_pt(upper, cv[k].z1, cv[k].m1);
      push_pt(lower, cv[k].z0, -cv[k].m0);
      push_pt(lower, cv[k].z1, -cv[k].m1);
    }
    // CCW loop: lower left->right, then upper right->left.
    std::vector<Vec> loop = lower;
    for (auto it = upper.rbegin(); it != upper.rend(); ++it) {
      if (!loop.empty() && std::fabs(loop.back()[0] - (*it)[0]) <= ztol &&
          std::fabs(loop.back()[1] - (*it)[1]) <= ztol)
        continue;
      loop.push_back(*it);
    }
    while (loop.size() > 1 && std::fabs(loop.front()[0] - loop.back()[0]) <= ztol &&
           std::fabs(loop.front()[1] - loop.back()[1]) <= ztol)
      loop.pop_back();
    if (loop.size() >= 3 && std::fabs(poly_area2(loop)) > 1e-18 * scale_ref * scale_ref)
      loops.push_back(loop);
    i = j + 1;
  }
  if (loops.empty()) throw InvalidPolytopeError("steiner: empty symmetral");

  // Map from (z, t) plane coordinates back to world coordinates.
  std::vector<std::vector<Vec>> world;
  for (const std::vector<Vec>& loop : loops) {
    std::vector<Vec> wl;
    wl.reserve(loop.size());
    for (const Vec& p : loop) wl.push_back(part.to_world(Vec{p[0]}, p[1]));
    world.push_back(wl);
  }
  return make_polygon_multi(world);
}

Polytope assemble3(const ChordPartition& part, double scale_ref) {
  const double pinch = 1e-12 * std::max(scale_ref, 1.0);
  std::vector<Vec> verts;
  std::map<std::tuple<long long, long long, long long>, int> vid;
  auto add_vertex = [&](const Vec& x) {
    double q = 1e9 / std::max(scale_ref, 1.0);
    std::tuple<long long, long long, long long> key{
        static_cast<long long>(std::llround(x[0] * q)),
        static_cast<long long>(std::llround(x[1] * q)),
        static_cast<long long>(std::llround(x[2] * q))};
    auto it = vid.find(key);
    if (it != vid.end()) return it->second;
    verts.push_back(x);
    int id = static_cast<int>(verts.size()) - 1;
    vid[key] = id;
    return id;
  };

  std::vector<std::vector<int>> loops;
  for (const ChordCell& c : part.cells) {
    bool any = false;
    for (const Vec& z : c.base)
      if (c.m_at(z) > pinch) any = true;
    if (!any) continue;
    std::vector<int> up, dn;
    for (const Vec& z : c.base) {
      double m = std::max(0.0, c.m_at(z));
      up.push_back(add_vertex(part.to_world(z, 0.5 * m)));
      dn.push_back(add_vertex(part.to_world(z, -0.5 * m)));
    }
    auto dedup = [](std::vector<int>& l) {
      std::vector<int> o;
      for (int v : l)
        if (o.empty() || o.back() != v) o.push_back(v);
      while (o.size() > 1 && o.front() == o.back()) o.pop_back();
      l = o;
    };
    dedup(up);
    dedup(dn);
    std::reverse(dn.begin(), dn.end());
    if (up.size() >= 3) loops.push_back(up);
    if (dn.size() >= 3) loops.push_back(dn);
  }
  if (loops.empty()) throw InvalidPolytopeError("steiner: empty symmetral");

  Polytope P;
  P.dim = 3;
  P.vertices = verts;
  for (const std::vector<int>& loop : loops) {
    // Skip slivers whose Newell normal vanishes.
    Vec nn{0, 0, 0};
    size_t m = loop.size();
    for (size_t i = 0; i < m; ++i) {
      const Vec& p = verts[loop[i]];
      const Vec& q = verts[loop[(i + 1) % m]];
      nn[0] += (p[1] - q[1]) * (p[2] + q[2]);
      nn[1] += (p[2] - q[2]) * (p[0] + q[0]);
      nn[2] += (p[0] - q[0]) * (p[1] + q[1]);
    }
    double a2 = norm(nn);
    if (a2 <= 1e-14 * scale_ref * scale_ref) continue;
    Facet f;
    f.normal = scale(nn, 1.0 / a2);
    f.measure = 0.5 * a2;
    f.offset = dot(f.normal, verts[loop[0]]);
    f.vertex_ids = loop;
    P.facets.push_back(f);
  }
  return P;
}

}  // namespace

SteinerResult steiner(const Polytope& E, const Vec& u, const Engine& eng) {
  SteinerResult res;
  res.direction = normalized(u);
  res.volume_before = volume(E);
  res.affine_before = affine_perimeter(E, eng);
  res.classical_before = classical_perimeter(surface_area_measure(E));
  double scale_ref = E.diameter_bound();

  Polytope out;
  double angle = 0;
  if (E.dim == 2) {
    ChordPartition part = chord_partition(E, res.direction, eng.tol);
    out = assemble2(part, scale_ref);
  } else {
    std::mt19937_64 rng(0x5eed5eedULL);  // fixed: a deterministic perturbation schedule
    Polytope work = E;
    LinearMap back = LinearMap::identity(E.dim);
    for (int attempt = 0;; ++attempt) {
      try {
        ChordPartition part = chord_partition(work, res.direction, eng.tol);
        out = assemble3(part, scale_ref);
        break;
      } catch (const OrthogonalFacetError&) {
        if (attempt >= 8)
          throw OrthogonalFacetError("steiner: perturbation budget exhausted");
        std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
        // random axis in u-perp
        Vec seed = std::fabs(res.direction[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
        Vec b1 = normalized(sub(seed, scale(res.direction, dot(seed, res.direction))));
        Vec b2 = cross3(res.direction, b1);
        double a = ua(rng);
        Vec axis = add(scale(b1, std::cos(a)), scale(b2, std::sin(a)));
        angle = std::min(1e-6, 1e-7 * std::pow(2.0, attempt));
        LinearMap R = LinearMap::rotation3d(axis, angle);
        work = apply_map(E, R);
        back = inverse(R);
      }
    }
    if (angle > 0) out = apply_map(out, back);
  }
  res.perturbation_angle = angle;
  res.output = out;
  res.volume_after = volume(out);
  res.affine_after = affine_perimeter(out, eng);
  res.classical_after = classical_perimeter(surface_area_measure(out));

  const Tolerances& t = eng.tol;
  res.volume_preserved =
      std::fabs(res.volume_after - res.volume_before) <= 1e-10 * std::max(1.0, res.volume_before);
  res.affine_monotone = res.affine_after <= res.affine_before + t.abs + t.rel * res.affine_before;
  res.classical_monotone =
      res.classical_after <= res.classical_before + t.abs + t.rel * res.classical_before;
  return res;
}

namespace {

std::string dump_counterexample(const Polytope& E, const Vec& u, const SteinerResult& r) {
  std::ostringstream os;
  os.precision(17);
  os << "steiner counterexample: u = [";
  for (size_t i = 0; i < u.size(); ++i) os << (i ? "," : "") << u[i];
  os << "], vertices = [";
  for (size_t i = 0; i < E.vertices.size(); ++i) {
    os << (i ? ",[" : "[");
    for (size_t k = 0; k < E.vertices[i].size(); ++k) os << (k ? "," : "") << E.vertices[i][k];
    os << "]";
  }
  os << "], affine " << r.affine_before << " -> " << r.affine_after << ", volume "
     << r.volume_before << " -> " << r.volume_after;
  return os.str();
}

}  // namespace

SteinerResult verify_monotonicity(const Polytope& E, const Vec& u, const Engine& eng) {
  SteinerResult res = steiner(E, u, eng);
  if (!(res.affine_monotone && res.volume_preserved))
    res.diagnostic = dump_counterexample(E, u, res);
  return res;
}

RoundingCheck verify_rounding(const Polytope& E, const Engine& eng) {
  RoundingCheck rc;
  rc.affine_input = affine_perimeter(E, eng);
  rc.radius = rounding_radius(E);
  rc.affine_rounded = affine_perimeter(rounding(E, eng), eng);
  rc.ok = rc.affine_rounded <= rc.affine_input + eng.tol.abs + eng.tol.rel * rc.affine_input +
                                  (E.dim >= 3 ? 1e-3 * rc.affine_input : 1e-6);
  return rc;
}

std::vector<SymmetrizationTraceRow> iterate_symmetrization(const Polytope& E,
                                                           const std::vector<Vec>& directions,
                                                           int max_steps, const Engine& eng) {
  if (directions.empty()) throw ConfigError("iterate_symmetrization: no directions");
  // Every step roughly doubles the vertex count (each old vertex spawns a
  // breakpoint). Connected iterates over budget are replaced by the hull of a
  // vertex subsample: for a connected set the shadow per direction equals the
  // hull's shadow and bounds the projection-body support from below, so the
  // replacement has pointwise smaller h_Pi and a smaller affine perimeter,
  // so the trace stays monotone.
  constexpr size_t kVertexBudget = 2048;
  std::vector<SymmetrizationTraceRow> rows;
  Polytope cur = E;
  PerimeterReport rep = inequality_report(cur, eng);
  rows.push_back({0, rep.P_BVd, rep.P_BV, rep.petty_ratio});
  for (int s = 1; s <= max_steps; ++s) {
    const Vec& u = directions[(s - 1) % directions.size()];
    SteinerResult r = steiner(cur, u, eng);
    if (!r.affine_monotone)
      throw Error("iterate_symmetrization: monotonicity violated: " +
                  dump_counterexample(cur, u, r));
    cur = r.output;
    if (cur.dim == 2 && cur.vertices.size() > kVertexBudget) {
      std::vector<std::vector<int>> loops = boundary_loops(cur);
      if (loops.size() == 1) {
        size_t stride = (loops[0].size() + kVertexBudget - 1) / kVertexBudget;
        std::vector<Vec> pts;
        for (size_t i = 0; i < loops[0].size(); i += stride)
          pts.push_back(cur.vertices[loops[0][i]]);
        if (pts.size() >= 8) cur = convex_hull(pts);
      }
    }
    rep = inequality_report(cur, eng);
    rows.push_back({s, rep.P_BVd, rep.P_BV, rep.petty_ratio});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Polar-body inclusion sampling (convex-geometry cross-check)
// ---------------------------------------------------------------------------

double steiner_polar_inclusion_deficit(const Polytope& E, const Vec& u, int samples,
                                       const Engine& eng) {
  Vec un = normalized(u);
  ProjectionBody ZE = projection_body(surface_area_measure(E));
  SteinerResult sr = steiner(E, un, eng);
  ProjectionBody ZS = projection_body(surface_area_measure(sr.output));

  int n = E.dim;
  // basis of u-perp
  std::vector<Vec> basis;
  if (n == 2) {
    basis = {rot90(un)};
  } else {
    Vec seed = std::fabs(un[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0};
    Vec b1 = normalized(sub(seed, scale(un, dot(seed, un))));
    basis = {b1, cross3(un, b1)};
  }

  // Chord of the polar body {h_ZE <= 1} over base point z, by bisection in t.
  auto chord = [&](const Vec& zw, double& t_lo, double& t_hi) -> bool {
    auto g = [&](double t) { return ZE.support(add(zw, scale(un, t))) - 1.0; };
    // locate a feasible t by ternary search for the minimum of the convex g.
    double a = -1e3, b = 1e3;
    for (int it = 0; it < 200; ++it) {
      double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
      if (g(m1) <= g(m2)) b = m2; else a = m1;
    }
    double tm = 0.5 * (a + b);
    if (g(tm) > 0) return false;
    double lo = tm, step = 1.0;
    while (g(lo - step) <= 0) step *= 2.0;
    double outl = lo - step;
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (outl + lo);
      if (g(mid) <= 0) lo = mid; else outl = mid;
    }
    double hi = tm;
    step = 1.0;
    while (g(hi + step) <= 0) step *= 2.0;
    double outr = hi + step;
    for (int it = 0; it < 100; ++it) {
      double mid = 0.5 * (hi + outr);
      if (g(mid) <= 0) hi = mid; else outr = mid;
    }
    t_lo = lo;
    t_hi = hi;
    return true;
  };

  std::mt19937_64 rng(0xabcdefULL);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = -HUGE_VAL;
  int done = 0;
  int guard = 0;
  while (done < samples && guard < 50 * samples) {
    ++guard;
    // random base point inside the projection of the polar body
    Vec zdir(n - 1);
    {
      std::normal_distribution<double> gg(0.0, 1.0);
      for (double& x : zdir) x = gg(rng);
      double nn = norm(zdir);
      if (nn < 1e-9) continue;
      zdir = scale(zdir, 1.0 / nn);
    }
    // max radius along zdir with a nonempty chord (bisection)
    auto zw_of = [&](double r) {
      Vec x(n, 0.0);
      for (size_t i = 0; i < basis.size(); ++i) x = add(x, scale(basis[i], r * zdir[i]));
      return x;
    };
    double tl, th;
    if (!chord(zw_of(0.0), tl, th)) continue;
    double rin = 0.0, rout = 1.0;
    while (chord(zw_of(rout), tl, th) && rout < 1e6) {
      rin = rout;
      rout *= 2.0;
    }
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (rin + rout);
      if (chord(zw_of(mid), tl, th)) rin = mid; else rout = mid;
    }
    double r = rin * std::sqrt(u01(rng));  // bias toward the rim
    Vec zw = zw_of(r);
    if (!chord(zw, tl, th)) continue;
    double half = 0.5 * (th - tl);
    for (double s : {half, -half}) {
      Vec p = add(zw, scale(un, s));
      worst = std::max(worst, ZS.support(p) - 1.0);
    }
    ++done;
  }
  if (done == 0) throw Error("steiner_polar_inclusion_deficit: no valid samples");
  return worst;
}

}  // namespace affbv

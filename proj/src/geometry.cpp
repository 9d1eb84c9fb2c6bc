#include "affbv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace affbv {

namespace {

double polygon_signed_area(const std::vector<Vec>& loop) {
  double s = 0;
  size_t n = loop.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec& p = loop[i];
    const Vec& q = loop[(i + 1) % n];
    s += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * s;
}

// Newell normal of a 3D facet loop; magnitude is twice the facet area.
Vec newell(const std::vector<Vec>& vs, const std::vector<int>& loop) {
  Vec n{0, 0, 0};
  size_t m = loop.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec& p = vs[loop[i]];
    const Vec& q = vs[loop[(i + 1) % m]];
    n[0] += (p[1] - q[1]) * (p[2] + q[2]);
    n[1] += (p[2] - q[2]) * (p[0] + q[0]);
    n[2] += (p[0] - q[0]) * (p[1] + q[1]);
  }
  return n;
}

Facet facet_from_loop3(const std::vector<Vec>& vs, std::vector<int> loop) {
  Vec nn = newell(vs, loop);
  double a2 = norm(nn);
  if (a2 <= 0) throw InvalidPolytopeError("degenerate facet loop");
  Facet f;
  f.normal = scale(nn, 1.0 / a2);
  f.measure = 0.5 * a2;
  f.offset = dot(f.normal, vs[loop[0]]);
  f.vertex_ids = std::move(loop);
  return f;
}

Facet edge_facet(const std::vector<Vec>& vs, int i, int j) {
  // Outward normal of an edge of a CCW loop.
  Vec d = sub(vs[j], vs[i]);
  double len = norm(d);
  if (len <= 0) throw InvalidPolytopeError("zero-length edge");
  Facet f;
  f.normal = Vec{d[1] / len, -d[0] / len};
  f.measure = len;
  f.offset = dot(f.normal, vs[i]);
  f.vertex_ids = {i, j};
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polytope basics
// ---------------------------------------------------------------------------

bool Polytope::has_incidence() const {
  if (facets.empty()) return false;
  for (const Facet& f : facets)
    if (f.vertex_ids.size() < static_cast<size_t>(dim)) return false;
  return true;
}

Vec Polytope::vertex_mean() const {
  Vec c(dim, 0.0);
  for (const Vec& v : vertices) c = add(c, v);
  return vertices.empty() ? c : scale(c, 1.0 / vertices.size());
}

double Polytope::diameter_bound() const {
  Vec c = vertex_mean();
  double r = 0;
  for (const Vec& v : vertices) r = std::max(r, dist(v, c));
  return r;
}

double SurfaceAreaMeasure::total() const {
  double s = 0;
  for (const SurfaceAtom& a : atoms) s += a.weight;
  return s;
}

// ---------------------------------------------------------------------------
// LinearMap
// ---------------------------------------------------------------------------

namespace {

double det_lu(std::vector<double> m, int n) {
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(m[r * n + c]) > std::fabs(m[piv * n + c])) piv = r;
    if (m[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(m[piv * n + k], m[c * n + k]);
      d = -d;
    }
    d *= m[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      double f = m[r * n + c] / m[c * n + c];
      for (int k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return d;
}

std::vector<double> invert_matrix(std::vector<double> m, int n) {
  std::vector<double> inv(n * n, 0.0);
  for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(m[r * n + c]) > std::fabs(m[piv * n + c])) piv = r;
    if (std::fabs(m[piv * n + c]) < 1e-300)
      throw SingularMapError("matrix is singular");
    if (piv != c)
      for (int k = 0; k < n; ++k) {
        std::swap(m[piv * n + k], m[c * n + k]);
        std::swap(inv[piv * n + k], inv[c * n + k]);
      }
    double p = m[c * n + c];
    for (int k = 0; k < n; ++k) {
      m[c * n + k] /= p;
      inv[c * n + k] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      double f = m[r * n + c];
      if (f == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        m[r * n + k] -= f * m[c * n + k];
        inv[r * n + k] -= f * inv[c * n + k];
      }
    }
  }
  return inv;
}

}  // namespace

Vec LinearMap::apply(const Vec& x) const {
  Vec y = apply_linear(x);
  for (int i = 0; i < dim; ++i) y[i] += translation[i];
  return y;
}

Vec LinearMap::apply_linear(const Vec& x) const {
  Vec y(dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) y[i] += a[i * dim + j] * x[j];
  return y;
}

LinearMap LinearMap::identity(int n) {
  LinearMap t;
  t.dim = n;
  t.a.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) t.a[i * n + i] = 1.0;
  t.translation.assign(n, 0.0);
  t.det = 1.0;
  return t;
}

LinearMap LinearMap::scaling(int n, double r) {
  LinearMap t = identity(n);
  for (int i = 0; i < n; ++i) t.a[i * n + i] = r;
  t.det = std::pow(r, n);
  return t;
}

LinearMap LinearMap::diagonal(const Vec& d) {
  int n = static_cast<int>(d.size());
  LinearMap t = identity(n);
  t.det = 1.0;
  for (int i = 0; i < n; ++i) {
    t.a[i * n + i] = d[i];
    t.det *= d[i];
  }
  return t;
}

LinearMap LinearMap::translation_by(const Vec& tr) {
  LinearMap t = identity(static_cast<int>(tr.size()));
  t.translation = tr;
  return t;
}

LinearMap LinearMap::rotation2d(double angle) {
  LinearMap t = identity(2);
  double c = std::cos(angle), s = std::sin(angle);
  t.a = {c, -s, s, c};
  t.det = 1.0;
  return t;
}

LinearMap LinearMap::rotation3d(const Vec& axis, double angle) {
  Vec u = normalized(axis);
  double c = std::cos(angle), s = std::sin(angle), ic = 1.0 - c;
  LinearMap t = identity(3);
  t.a = {c + u[0] * u[0] * ic,        u[0] * u[1] * ic - u[2] * s, u[0] * u[2] * ic + u[1] * s,
         u[1] * u[0] * ic + u[2] * s, c + u[1] * u[1] * ic,        u[1] * u[2] * ic - u[0] * s,
         u[2] * u[0] * ic - u[1] * s, u[2] * u[1] * ic + u[0] * s, c + u[2] * u[2] * ic};
  t.det = 1.0;
  return t;
}

LinearMap LinearMap::from_matrix(int n, const std::vector<double>& rowmajor, const Vec& tr) {
  if (static_cast<int>(rowmajor.size()) != n * n)
    throw DomainError("from_matrix: wrong matrix size");
  LinearMap t;
  t.dim = n;
  t.a = rowmajor;
  t.translation = tr.empty() ? Vec(n, 0.0) : tr;
  t.det = det_lu(rowmajor, n);
  return t;
}

LinearMap compose(const LinearMap& second, const LinearMap& first) {
  int n = first.dim;
  std::vector<double> m(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m[i * n + j] += second.a[i * n + k] * first.a[k * n + j];
  LinearMap t = LinearMap::from_matrix(n, m, add(second.apply_linear(first.translation), second.translation));
  return t;
}

LinearMap inverse(const LinearMap& T) {
  if (std::fabs(T.det) < 1e-300) throw SingularMapError("inverse of singular map");
  LinearMap r = LinearMap::from_matrix(T.dim, invert_matrix(T.a, T.dim));
  r.translation = scale(r.apply_linear(T.translation), -1.0);
  return r;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Polytope make_polygon(const std::vector<Vec>& loop) {
  return make_polygon_multi({loop});
}

Polytope make_polygon_multi(const std::vector<std::vector<Vec>>& loops) {
  Polytope P;
  P.dim = 2;
  for (std::vector<Vec> loop : loops) {
    if (loop.size() < 3) throw InvalidPolytopeError("polygon loop needs >= 3 vertices");
    if (polygon_signed_area(loop) < 0) std::reverse(loop.begin(), loop.end());
    int base = static_cast<int>(P.vertices.size());
    int m = static_cast<int>(loop.size());
    for (const Vec& v : loop) {
      if (v.size() != 2 || !finite(v)) throw InvalidPolytopeError("bad 2D vertex");
      P.vertices.push_back(v);
    }
    for (int i = 0; i < m; ++i)
      P.facets.push_back(edge_facet(P.vertices, base + i, base + (i + 1) % m));
  }
  return P;
}

Polytope make_polyhedron(const std::vector<Vec>& vertices,
                         const std::vector<std::vector<int>>& facet_loops) {
  Polytope P;
  P.dim = 3;
  P.vertices = vertices;
  for (const std::vector<int>& loop : facet_loops) {
    if (loop.size() < 3) throw InvalidPolytopeError("facet loop needs >= 3 vertices");
    P.facets.push_back(facet_from_loop3(P.vertices, loop));
  }
  return P;
}

Polytope make_flat(int dim, const std::vector<Vec>& vertices) {
  Polytope P;
  P.dim = dim;
  P.vertices = vertices;
  P.volume_cache = 0.0;
  return P;
}

Polytope regular_polygon(int segments, double radius, const Vec& center) {
  if (segments < 3) throw DomainError("regular_polygon: need >= 3 segments");
  Vec c = center.empty() ? Vec{0.0, 0.0} : center;
  std::vector<Vec> loop;
  loop.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    double t = 2.0 * M_PI * i / segments;
    loop.push_back(Vec{c[0] + radius * std::cos(t), c[1] + radius * std::sin(t)});
  }
  return make_polygon(loop);
}

Polytope icosphere(int level, double radius) {
  // Icosahedron, then midpoint subdivision with projection to the sphere.
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Vec> vs = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                         {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                         {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec& v : vs) v = normalized(v);
  std::vector<std::array<int, 3>> tris = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec m = normalized(scale(add(vs[a], vs[b]), 0.5));
      vs.push_back(m);
      int id = static_cast<int>(vs.size()) - 1;
      midpoint[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  for (Vec& v : vs) v = scale(v, radius);
  std::vector<std::vector<int>> loops;
  loops.reserve(tris.size());
  for (const auto& t : tris) loops.push_back({t[0], t[1], t[2]});
  return make_polyhedron(vs, loops);
}

Polytope box(const Vec& lo, const Vec& hi) {
  int n = static_cast<int>(lo.size());
  if (n == 2) {
    return make_polygon({{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}});
  }
  if (n == 3) {
    std::vector<Vec> v;
    for (int i = 0; i < 8; ++i)
      v.push_back(Vec{(i & 1) ? hi[0] : lo[0], (i & 2) ? hi[1] : lo[1], (i & 4) ? hi[2] : lo[2]});
    std::vector<std::vector<int>> loops = {
        {0, 2, 3, 1},   // z = lo
        {4, 5, 7, 6},   // z = hi
        {0, 1, 5, 4},   // y = lo
        {2, 6, 7, 3},   // y = hi
        {0, 4, 6, 2},   // x = lo
        {1, 3, 7, 5}};  // x = hi
    return make_polyhedron(v, loops);
  }
  throw DomainError("box: only dimensions 2 and 3");
}

// ---------------------------------------------------------------------------
// Affine rank
// ---------------------------------------------------------------------------

int affine_rank(const std::vector<Vec>& pts, double tol) {
  if (pts.empty()) return -1;
  int n = static_cast<int>(pts[0].size());
  std::vector<Vec> basis;
  double scale_ref = 0;
  for (const Vec& p : pts) scale_ref = std::max(scale_ref, norm(sub(p, pts[0])));
  if (scale_ref == 0) return 0;
  for (size_t i = 1; i < pts.size() && static_cast<int>(basis.size()) < n; ++i) {
    Vec d = sub(pts[i], pts[0]);
    for (const Vec& b : basis) d = sub(d, scale(b, dot(d, b)));
    if (norm(d) > tol * scale_ref) basis.push_back(normalized(d));
  }
  return static_cast<int>(basis.size());
}

// ---------------------------------------------------------------------------
// Convex hull, dimension 2
// ---------------------------------------------------------------------------

namespace {

Polytope hull2(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) { return a[0] == b[0] && a[1] == b[1]; }),
            pts.end());
  double scale_ref = 0;
  for (const Vec& p : pts) scale_ref = std::max(scale_ref, dist(p, pts[0]));
  const double eps_area = 1e-12 * std::max(scale_ref * scale_ref, 1e-30);
  auto turn = [&](const Vec& o, const Vec& a, const Vec& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  size_t m = pts.size();
  std::vector<Vec> h(2 * m);
  size_t k = 0;
  for (size_t i = 0; i < m; ++i) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], pts[i]) <= eps_area) --k;
    h[k++] = pts[i];
  }
  for (size_t i = m - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && turn(h[k - 2], h[k - 1], pts[i]) <= eps_area) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) {
    throw DegenerateInputError("convex_hull: points are affinely dependent",
                               affine_rank(pts));
  }
  return make_polygon(h);
}

// ---------------------------------------------------------------------------
// Convex hull, dimension 3 (incremental, then coplanar facet merge)
// ---------------------------------------------------------------------------

struct Tri {
  int a, b, c;
  Vec n;       // outward unit
  double off;
  bool alive = true;
};

Polytope hull3(const std::vector<Vec>& pts) {
  size_t m = pts.size();
  double scale_ref = 0;
  for (const Vec& p : pts)
    for (double x : p) scale_ref = std::max(scale_ref, std::fabs(x));
  const double eps = 1e-10 * std::max(scale_ref, 1e-30);

  // Initial simplex by spread.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  for (size_t i = 1; i < m; ++i)
    if (pts[i][0] < pts[i0][0]) i0 = static_cast<int>(i);
  double best = -1;
  for (size_t i = 0; i < m; ++i) {
    double d = dist(pts[i], pts[i0]);
    if (d > best) best = d, i1 = static_cast<int>(i);
  }
  if (best <= eps) throw DegenerateInputError("convex_hull: rank 0", 0);
  Vec e1 = normalized(sub(pts[i1], pts[i0]));
  best = -1;
  for (size_t i = 0; i < m; ++i) {
    Vec d = sub(pts[i], pts[i0]);
    d = sub(d, scale(e1, dot(d, e1)));
    double v = norm(d);
    if (v > best) best = v, i2 = static_cast<int>(i);
  }
  if (best <= eps) throw DegenerateInputError("convex_hull: rank 1", 1);
  Vec nrm = normalized(cross3(sub(pts[i1], pts[i0]), sub(pts[i2], pts[i0])));
  best = -1;
  for (size_t i = 0; i < m; ++i) {
    double v = std::fabs(dot(sub(pts[i], pts[i0]), nrm));
    if (v > best) best = v, i3 = static_cast<int>(i);
  }
  if (best <= eps) throw DegenerateInputError("convex_hull: rank 2", 2);

  std::vector<Tri> tris;
  auto add_tri = [&](int a, int b, int c, const Vec& inside) {
    Tri t{a, b, c, {}, 0, true};
    Vec n = cross3(sub(pts[b], pts[a]), sub(pts[c], pts[a]));
    double ln = norm(n);
    if (ln <= 0) throw InvalidPolytopeError("hull3: zero-area face");
    n = scale(n, 1.0 / ln);
    if (dot(n, sub(inside, pts[a])) > 0) {
      std::swap(t.b, t.c);
      n = scale(n, -1.0);
    }
    t.n = n;
    t.off = dot(n, pts[t.a]);
    tris.push_back(t);
  };
  Vec centroid = scale(add(add(pts[i0], pts[i1]), add(pts[i2], pts[i3])), 0.25);
  add_tri(i0, i1, i2, centroid);
  add_tri(i0, i1, i3, centroid);
  add_tri(i0, i2, i3, centroid);
  add_tri(i1, i2, i3, centroid);

  for (size_t p = 0; p < m; ++p) {
    int pi = static_cast<int>(p);
    if (pi == i0 || pi == i1 || pi == i2 || pi == i3) continue;
    std::vector<int> visible;
    for (size_t t = 0; t < tris.size(); ++t)
      if (tris[t].alive && dot(tris[t].n, pts[p]) - tris[t].off > eps)
        visible.push_back(static_cast<int>(t));
    if (visible.empty()) continue;
    // Horizon = directed edges of visible faces whose reverse is not visible.
    std::set<std::pair<int, int>> vis_edges;
    for (int t : visible) {
      const Tri& tr = tris[t];
      vis_edges.insert({tr.a, tr.b});
      vis_edges.insert({tr.b, tr.c});
      vis_edges.insert({tr.c, tr.a});
    }
    std::vector<std::pair<int, int>> horizon;
    for (const auto& e : vis_edges)
      if (!vis_edges.count({e.second, e.first})) horizon.push_back(e);
    for (int t : visible) tris[t].alive = false;
    for (const auto& e : horizon) {
      Tri t{e.first, e.second, pi, {}, 0, true};
      Vec n = cross3(sub(pts[t.b], pts[t.a]), sub(pts[t.c], pts[t.a]));
      double ln = norm(n);
      if (ln <= 1e-14 * scale_ref * scale_ref) continue;  // collinear horizon sliver
      t.n = scale(n, 1.0 / ln);
      t.off = dot(t.n, pts[t.a]);
      tris.push_back(t);
    }
  }

  // Collect alive triangles, remap used vertices.
  std::vector<Tri> faces;
  for (const Tri& t : tris)
    if (t.alive) faces.push_back(t);
  std::map<int, int> remap;
  std::vector<Vec> verts;
  auto vid = [&](int i) {
    auto it = remap.find(i);
    if (it != remap.end()) return it->second;
    verts.push_back(pts[i]);
    int id = static_cast<int>(verts.size()) - 1;
    remap[i] = id;
    return id;
  };
  for (Tri& t : faces) {
    t.a = vid(t.a);
    t.b = vid(t.b);
    t.c = vid(t.c);
  }

  // Merge coplanar neighbours into polygon facets.
  std::vector<bool> used(faces.size(), false);
  std::vector<std::vector<int>> loops;
  const double ang = 1e-10;
  for (size_t i = 0; i < faces.size(); ++i) {
    if (used[i]) continue;
    std::vector<size_t> group{i};
    used[i] = true;
    for (size_t j = i + 1; j < faces.size(); ++j) {
      if (used[j]) continue;
      if (dot(faces[i].n, faces[j].n) > 1.0 - ang &&
          std::fabs(faces[i].off - faces[j].off) < 1e-8 * std::max(scale_ref, 1.0)) {
        group.push_back(j);
        used[j] = true;
      }
    }
    // Boundary edges of the group (directed edges without a reverse partner).
    std::map<std::pair<int, int>, int> edge_count;
    for (size_t g : group) {
      const Tri& t = faces[g];
      edge_count[{t.a, t.b}]++;
      edge_count[{t.b, t.c}]++;
      edge_count[{t.c, t.a}]++;
    }
    std::map<int, int> next;
    for (const auto& [e, c] : edge_count) {
      (void)c;
      if (!edge_count.count({e.second, e.first})) next[e.first] = e.second;
    }
    if (next.empty()) continue;
    std::vector<int> loop;
    int start = next.begin()->first, cur = start;
    do {
      loop.push_back(cur);
      auto it = next.find(cur);
      if (it == next.end()) throw InvalidPolytopeError("hull3: open facet boundary");
      cur = it->second;
    } while (cur != start && loop.size() <= next.size());
    loops.push_back(loop);
  }
  return make_polyhedron(verts, loops);
}

// ---------------------------------------------------------------------------
// Convex hull, dimension >= 4 (facet enumeration for small point sets)
// ---------------------------------------------------------------------------

// Orthonormal basis of the affine hull of a facet; coordinates of its points.
std::vector<Vec> project_to_plane(const std::vector<Vec>& pts, const Vec& normal) {
  int n = static_cast<int>(normal.size());
  std::vector<Vec> basis;
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n - 1; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    Vec d = sub(e, scale(normal, dot(e, normal)));
    for (const Vec& b : basis) d = sub(d, scale(b, dot(d, b)));
    if (norm(d) > 1e-8) basis.push_back(normalized(d));
  }
  std::vector<Vec> out;
  out.reserve(pts.size());
  for (const Vec& p : pts) {
    Vec q(n - 1);
    for (int k = 0; k < n - 1; ++k) q[k] = dot(p, basis[k]);
    out.push_back(q);
  }
  return out;
}

Polytope hull_nd(const std::vector<Vec>& pts);

// (n-1)-measure of the convex hull of coplanar points expressed in-plane.
double flat_hull_measure(const std::vector<Vec>& plane_pts) {
  int d = static_cast<int>(plane_pts[0].size());
  if (d == 1) {
    double lo = plane_pts[0][0], hi = lo;
    for (const Vec& p : plane_pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return hi - lo;
  }
  Polytope h = d == 2 ? hull2(plane_pts) : (d == 3 ? hull3(plane_pts) : hull_nd(plane_pts));
  return volume(h);
}

Polytope hull_nd(const std::vector<Vec>& pts) {
  int n = static_cast<int>(pts[0].size());
  size_t m = pts.size();
  if (m > 64) throw DomainError("convex_hull: too many points for dimension >= 4");
  int rank = affine_rank(pts);
  if (rank < n) throw DegenerateInputError("convex_hull: points are affinely dependent", rank);
  double scale_ref = 0;
  for (const Vec& p : pts)
    for (double x : p) scale_ref = std::max(scale_ref, std::fabs(x));
  const double eps = 1e-9 * std::max(scale_ref, 1.0);

  // Enumerate supporting hyperplanes through n-point subsets.
  struct Plane {
    Vec n;
    double off;
    std::vector<int> members;
  };
  std::vector<Plane> planes;
  std::vector<int> idx(n);
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == n) {
      // Normal = null vector of the (n-1) x n difference matrix.
      std::vector<Vec> diffs;
      for (int i = 1; i < n; ++i) diffs.push_back(sub(pts[idx[i]], pts[idx[0]]));
      // Gram-Schmidt the diffs; then find a unit vector orthogonal to all.
      std::vector<Vec> basis;
      for (Vec d : diffs) {
        for (const Vec& b : basis) d = sub(d, scale(b, dot(d, b)));
        if (norm(d) > eps) basis.push_back(normalized(d));
      }
      if (static_cast<int>(basis.size()) != n - 1) return;
      Vec cand(n, 0.0);
      for (int i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        for (const Vec& b : basis) e = sub(e, scale(b, dot(e, b)));
        if (norm(e) > norm(cand)) cand = e;
      }
      if (norm(cand) < 1e-10) return;
      Vec nu = normalized(cand);
      double off = dot(nu, pts[idx[0]]);
      int above = 0, below = 0;
      for (size_t i = 0; i < m; ++i) {
        double s = dot(nu, pts[i]) - off;
        if (s > eps) ++above;
        if (s < -eps) ++below;
      }
      if (above && below) return;
      if (above) {
        nu = scale(nu, -1.0);
        off = -off;
      }
      // Record, merging with an existing coincident plane.
      for (Plane& pl : planes) {
        if (dot(pl.n, nu) > 1.0 - 1e-10 && std::fabs(pl.off - off) < eps) {
          for (int id : idx)
            if (std::find(pl.members.begin(), pl.members.end(), id) == pl.members.end())
              pl.members.push_back(id);
          return;
        }
      }
      Plane pl;
      pl.n = nu;
      pl.off = off;
      for (size_t i = 0; i < m; ++i)
        if (std::fabs(dot(nu, pts[i]) - off) <= eps) pl.members.push_back(static_cast<int>(i));
      planes.push_back(pl);
      return;
    }
    for (int i = start; i < static_cast<int>(m); ++i) {
      idx[k] = i;
      rec(i + 1, k + 1);
    }
  };
  rec(0, 0);

  Polytope P;
  P.dim = n;
  std::set<int> used_vertices;
  for (const Plane& pl : planes)
    for (int v : pl.members) used_vertices.insert(v);
  std::map<int, int> remap;
  for (int v : used_vertices) {
    remap[v] = static_cast<int>(P.vertices.size());
    P.vertices.push_back(pts[v]);
  }
  for (const Plane& pl : planes) {
    std::vector<Vec> members;
    for (int v : pl.members) members.push_back(pts[v]);
    Facet f;
    f.normal = pl.n;
    f.offset = pl.off;
    f.measure = flat_hull_measure(project_to_plane(members, pl.n));
    for (int v : pl.members) f.vertex_ids.push_back(remap[v]);
    if (f.measure > 0) P.facets.push_back(f);
  }
  return P;
}

}  // namespace

Polytope convex_hull(const std::vector<Vec>& points) {
  if (points.empty()) throw DomainError("convex_hull: no points");
  int n = static_cast<int>(points[0].size());
  if (n < 2) throw DomainError("convex_hull: dimension must be >= 2");
  for (const Vec& p : points)
    if (static_cast<int>(p.size()) != n || !finite(p))
      throw DomainError("convex_hull: inconsistent input");
  int rank = affine_rank(points);
  if (rank < n) throw DegenerateInputError("convex_hull: points are affinely dependent", rank);
  if (n == 2) return hull2(points);
  if (n == 3) return hull3(points);
  if (n <= 6) return hull_nd(points);
  throw DomainError("convex_hull: dimension > 6 unsupported");
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

SurfaceAreaMeasure surface_area_measure(const Polytope& P, double merge_angle) {
  if (P.facets.empty())
    throw InvalidPolytopeError("surface_area_measure: polytope has no facets");
  SurfaceAreaMeasure S;
  S.dim = P.dim;
  if (P.facets.size() <= 64) {
    // angle-accurate pairwise merge
    for (const Facet& f : P.facets) {
      bool merged = false;
      for (SurfaceAtom& a : S.atoms) {
        // angle < merge_angle  <=>  dot > cos(merge_angle) ~ 1 - angle^2/2
        if (dot(a.direction, f.normal) >= std::cos(merge_angle)) {
          a.weight += f.measure;
          merged = true;
          break;
        }
      }
      if (!merged) S.atoms.push_back({f.normal, f.measure});
    }
    return S;
  }
  // large facet lists: quantized-direction map, merging exact duplicates
  std::map<std::vector<long long>, size_t> index;
  double q = 2.0 / merge_angle;
  for (const Facet& f : P.facets) {
    std::vector<long long> key(P.dim);
    for (int i = 0; i < P.dim; ++i) key[i] = static_cast<long long>(std::llround(f.normal[i] * q));
    auto it = index.find(key);
    if (it != index.end()) {
      S.atoms[it->second].weight += f.measure;
    } else {
      index[key] = S.atoms.size();
      S.atoms.push_back({f.normal, f.measure});
    }
  }
  return S;
}

double classical_perimeter(const SurfaceAreaMeasure& S) {
  if (S.atoms.empty()) throw InvalidPolytopeError("classical_perimeter: empty measure");
  return S.total();
}

double volume(const Polytope& P) {
  if (P.volume_cache) return *P.volume_cache;
  double v = 0;
  for (const Facet& f : P.facets) v += f.offset * f.measure;
  v /= P.dim;
  if (v < 0 && v > -1e-12) v = 0;
  P.volume_cache = v;
  return v;
}

double support(const Polytope& P, const Vec& v) {
  if (P.vertices.empty()) throw InvalidPolytopeError("support: empty polytope");
  double best = -HUGE_VAL;
  for (const Vec& x : P.vertices) best = std::max(best, dot(v, x));
  return best;
}

Polytope apply_map(const Polytope& P, const LinearMap& T) {
  if (std::fabs(T.det) < 1e-300) throw SingularMapError("apply_map: singular matrix");
  LinearMap Tinv = inverse(T);
  Polytope Q;
  Q.dim = P.dim;
  Q.vertices.reserve(P.vertices.size());
  for (const Vec& v : P.vertices) Q.vertices.push_back(T.apply(v));
  double adet = std::fabs(T.det);
  for (const Facet& f : P.facets) {
    // nu' = T^{-T} nu / |T^{-T} nu|; measures pick up |det T| |T^{-T} nu|.
    Vec tn(P.dim, 0.0);
    for (int i = 0; i < P.dim; ++i)
      for (int j = 0; j < P.dim; ++j) tn[i] += Tinv.a[j * P.dim + i] * f.normal[j];
    double ln = norm(tn);
    Facet g;
    g.normal = scale(tn, 1.0 / ln);
    g.measure = f.measure * adet * ln;
    g.offset = f.offset / ln + dot(g.normal, T.translation);
    g.vertex_ids = f.vertex_ids;
    Q.facets.push_back(g);
  }
  if (P.volume_cache) Q.volume_cache = *P.volume_cache * adet;
  return Q;
}

void validate(const Polytope& P, const Tolerances& tol) {
  (void)tol;
  if (P.dim < 2) throw InvalidPolytopeError("validate: dimension must be >= 2");
  for (const Vec& v : P.vertices)
    if (static_cast<int>(v.size()) != P.dim || !finite(v))
      throw InvalidPolytopeError("validate: bad vertex");
  Vec closing(P.dim, 0.0);
  double total = 0;
  for (const Facet& f : P.facets) {
    if (std::fabs(norm(f.normal) - 1.0) > 1e-12)
      throw InvalidPolytopeError("validate: non-unit facet normal");
    if (!(f.measure > 0)) throw InvalidPolytopeError("validate: non-positive facet measure");
    closing = add(closing, scale(f.normal, f.measure));
    total += f.measure;
  }
  if (!P.facets.empty() && norm(closing) > 1e-9 * total)
    throw InvalidPolytopeError("validate: boundary does not close up");
}

bool is_convex(const Polytope& P, const Tolerances& tol) {
  (void)tol;
  if (P.convex_cache) return *P.convex_cache;
  bool ok = true;
  if (!P.facets.empty()) {
    double scale_ref = std::max(P.diameter_bound(), 1e-30);
    for (const Facet& f : P.facets) {
      for (const Vec& v : P.vertices)
        if (dot(f.normal, v) - f.offset > 1e-10 + 1e-9 * scale_ref) {
          ok = false;
          break;
        }
      if (!ok) break;
    }
  }
  P.convex_cache = ok;
  return ok;
}

std::vector<std::vector<int>> boundary_loops(const Polytope& P) {
  if (P.dim != 2) throw DomainError("boundary_loops: 2D only");
  std::map<int, int> next;
  for (const Facet& f : P.facets) {
    if (f.vertex_ids.size() != 2)
      throw InvalidPolytopeError("boundary_loops: missing edge incidence");
    next[f.vertex_ids[0]] = f.vertex_ids[1];
  }
  std::vector<std::vector<int>> loops;
  std::set<int> seen;
  for (const auto& [start, unused] : next) {
    (void)unused;
    if (seen.count(start)) continue;
    std::vector<int> loop;
    int cur = start;
    do {
      loop.push_back(cur);
      seen.insert(cur);
      auto it = next.find(cur);
      if (it == next.end()) throw InvalidPolytopeError("boundary_loops: open chain");
      cur = it->second;
    } while (cur != start && loop.size() <= next.size());
    loops.push_back(loop);
  }
  return loops;
}

bool contains_point(const Polytope& P, const Vec& x, double tol) {
  if (P.facets.empty()) return false;
  if (is_convex(P)) {
    for (const Facet& f : P.facets)
      if (dot(f.normal, x) - f.offset > tol) return false;
    return true;
  }
  if (P.dim != 2)
    throw DomainError("contains_point: non-convex membership only in 2D");
  // Crossing count over all edges, with an on-boundary short-circuit.
  int crossings = 0;
  for (const Facet& f : P.facets) {
    const Vec& a = P.vertices[f.vertex_ids[0]];
    const Vec& b = P.vertices[f.vertex_ids[1]];
    // distance to segment
    Vec ab = sub(b, a);
    double t = std::clamp(dot(sub(x, a), ab) / std::max(dot(ab, ab), 1e-300), 0.0, 1.0);
    if (dist(add(a, scale(ab, t)), x) <= tol) return true;
    bool up_a = a[1] > x[1], up_b = b[1] > x[1];
    if (up_a != up_b) {
      double xi = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (xi > x[0]) ++crossings;
    }
  }
  return crossings % 2 == 1;
}

}  // namespace affbv

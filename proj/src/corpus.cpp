#include "affbv/corpus.hpp"

#include <algorithm>
#include <cmath>

namespace affbv {

Polytope random_convex_polygon(Rng& rng, int points) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Vec> pts;
    pts.reserve(points);
    for (int i = 0; i < points; ++i) pts.push_back(Vec{g(rng), g(rng)});
    try {
      return convex_hull(pts);
    } catch (const DegenerateInputError&) {
      continue;
    }
  }
  throw ConfigError("random_convex_polygon: generation kept degenerating");
}

Polytope random_star_polygon(Rng& rng, int vertices) {
  std::uniform_real_distribution<double> ujit(-0.35, 0.35);
  std::uniform_real_distribution<double> urad(0.35, 1.3);
  std::vector<Vec> loop;
  loop.reserve(vertices);
  for (int i = 0; i < vertices; ++i) {
    double t = 2.0 * M_PI * (i + 0.5 * ujit(rng)) / vertices;
    double r = urad(rng);
    loop.push_back(Vec{r * std::cos(t), r * std::sin(t)});
  }
  return make_polygon(loop);
}

Polytope random_convex_polytope3(Rng& rng, int points) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Vec> pts;
    pts.reserve(points);
    for (int i = 0; i < points; ++i) pts.push_back(Vec{g(rng), g(rng), g(rng)});
    try {
      return convex_hull(pts);
    } catch (const DegenerateInputError&) {
      continue;
    }
  }
  throw ConfigError("random_convex_polytope3: generation kept degenerating");
}

Vec random_direction(Rng& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    Vec v(dim);
    for (double& x : v) x = g(rng);
    double n = norm(v);
    if (n > 1e-6) return scale(v, 1.0 / n);
  }
}

namespace {

double frobenius(const std::vector<double>& a) {
  double s = 0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

}  // namespace

LinearMap random_sl(Rng& rng, int dim, double max_condition) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<double> a(dim * dim);
    for (double& x : a) x = g(rng);
    LinearMap T = LinearMap::from_matrix(dim, a);
    if (std::fabs(T.det) < 1e-3) continue;
    double s = std::pow(std::fabs(T.det), -1.0 / dim);
    for (double& x : T.a) x *= s;
    if (T.det < 0) {
      // swap two rows to flip the sign
      for (int j = 0; j < dim; ++j) std::swap(T.a[j], T.a[dim + j]);
    }
    T = LinearMap::from_matrix(dim, T.a);
    LinearMap Ti = inverse(T);
    if (frobenius(T.a) * frobenius(Ti.a) <= max_condition) return T;
  }
  throw ConfigError("random_sl: no well-conditioned sample found");
}

Vec random_translation(Rng& rng, int dim, double s) {
  std::uniform_real_distribution<double> u(-s, s);
  Vec t(dim);
  for (double& x : t) x = u(rng);
  return t;
}

}  // namespace affbv

#include "affbv/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace affbv {

double QuadratureRule::total_weight() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev initial guess, Newton on P_order.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < order; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = order * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

QuadratureRule build_rule(int n, int order) {
  if (n < 3)
    throw DomainError("build_rule: n < 3 has a closed-form path, use the exact 2D integrator");
  if (order < 4) throw DomainError("build_rule: order must be >= 4");

  std::vector<double> t, wt;
  gauss_legendre(order, t, wt);

  QuadratureRule rule;
  rule.dim = n;
  if (n == 3) {
    // dS = dphi dt with t = cos(theta); exact normalization 2 * 2pi = 4pi.
    int nphi = 2 * order;
    double dphi = 2.0 * M_PI / nphi;
    for (int i = 0; i < order; ++i) {
      double st = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
      for (int j = 0; j < nphi; ++j) {
        double phi = dphi * j;
        rule.nodes.push_back(Vec{st * std::cos(phi), st * std::sin(phi), t[i]});
        rule.weights.push_back(wt[i] * dphi);
      }
    }
    return rule;
  }

  // n > 3: u = (sqrt(1-t^2) * v, t), v on S^{n-2};
  // dS_{n-1} = (1-t^2)^{(n-3)/2} dt dS_{n-2}.
  QuadratureRule sub = build_rule(n - 1, order);
  for (int i = 0; i < order; ++i) {
    double s2 = std::max(0.0, 1.0 - t[i] * t[i]);
    double st = std::sqrt(s2);
    double jac = std::pow(s2, 0.5 * (n - 3));
    for (size_t j = 0; j < sub.nodes.size(); ++j) {
      Vec u(n);
      for (int k = 0; k < n - 1; ++k) u[k] = st * sub.nodes[j][k];
      u[n - 1] = t[i];
      rule.nodes.push_back(std::move(u));
      rule.weights.push_back(wt[i] * jac * sub.weights[j]);
    }
  }
  // Plain Gauss-Legendre is inexact for the (1-t^2)^{(n-3)/2} weight; rescale
  // so the constant 1 integrates to the sphere measure.
  double target = unit_sphere_area(n);
  double raw = rule.total_weight();
  for (double& w : rule.weights) w *= target / raw;
  return rule;
}

double integrate_negative_power(const std::function<double(const Vec&)>& h, int n,
                                const QuadratureRule& rule, int workers) {
  size_t m = rule.nodes.size();
  std::vector<double> terms(m, 0.0);
  std::vector<double> values(m, 0.0);

  auto eval_range = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) values[i] = h(rule.nodes[i]);
  };
  int nw = std::max(1, workers);
  if (nw == 1 || m < 1024) {
    eval_range(0, m);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (m + nw - 1) / nw;
    for (int k = 0; k < nw; ++k) {
      size_t lo = k * chunk, hi = std::min(m, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(eval_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  double hmax = 0;
  for (double v : values) hmax = std::max(hmax, v);
  if (!(hmax > 0)) throw DivergentIntegralError("integrate_negative_power: support vanishes");
  for (size_t i = 0; i < m; ++i) {
    if (values[i] <= 1e-12 * hmax)
      throw DivergentIntegralError(
          "integrate_negative_power: support reaches zero, polar volume diverges");
    terms[i] = rule.weights[i] * std::pow(values[i], -static_cast<double>(n));
  }
  return pairwise_sum(terms);
}

// ---------------------------------------------------------------------------
// Semi-exact zonotope path on S^2
// ---------------------------------------------------------------------------

double zonotope_negative_cube_integral(const std::vector<Vec>& directions,
                                       const std::vector<double>& coefficients, int order) {
  size_t m = directions.size();
  if (m == 0 || coefficients.size() != m)
    throw DomainError("zonotope_negative_cube_integral: mismatched atoms");
  double cmax = 0;
  for (double c : coefficients) cmax = std::max(cmax, c);
  {
    // non-spanning generators mean a divergent polar volume
    std::vector<Vec> basis;
    for (Vec d : directions) {
      for (const Vec& b : basis) d = sub(d, scale(b, dot(d, b)));
      if (norm(d) > 1e-10) basis.push_back(normalized(d));
    }
    if (basis.size() < 3)
      throw DivergentIntegralError(
          "zonotope_negative_cube_integral: generators do not span R^3");
  }

  // Polar panels in theta, split where some |u . dir| great circle is tangent
  // to a parallel: cos(theta) = +- rho_i with rho_i the in-plane norm of dir_i.
  std::vector<double> cuts{0.0, M_PI};
  for (const Vec& d : directions) {
    double rho = std::min(1.0, std::hypot(d[0], d[1]));
    cuts.push_back(std::acos(rho));
    cuts.push_back(std::acos(-rho));
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> edges;
  for (double c : cuts)
    if (edges.empty() || c - edges.back() > 1e-12) edges.push_back(c);

  int per_panel = std::max(8, order / 2);
  std::vector<double> gx, gw;
  gauss_legendre(per_panel, gx, gw);
  std::vector<double> ax, aw;  // azimuth chunk rule
  gauss_legendre(10, ax, aw);

  std::vector<double> panel_sums;
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    double th0 = edges[e], th1 = edges[e + 1];
    double sum = 0;
    for (int i = 0; i < per_panel; ++i) {
      double th = 0.5 * (th0 + th1) + 0.5 * (th1 - th0) * gx[i];
      double t = std::cos(th);
      double st = std::sin(th);
      double wt = 0.5 * (th1 - th0) * gw[i] * st;
      // per-atom cosine data at this latitude
      std::vector<double> R(m), psi(m), C(m);
      for (size_t k = 0; k < m; ++k) {
        R[k] = st * std::hypot(directions[k][0], directions[k][1]);
        psi[k] = std::atan2(directions[k][1], directions[k][0]);
        C[k] = t * directions[k][2];
      }
      // azimuth breakpoints: roots of R cos(phi - psi) + C = 0
      std::vector<double> brk;
      for (size_t k = 0; k < m; ++k) {
        if (R[k] <= std::fabs(C[k])) continue;
        double d = std::acos(std::clamp(-C[k] / R[k], -1.0, 1.0));
        for (double s : {d, -d}) {
          double phi = std::fmod(psi[k] + s, 2.0 * M_PI);
          if (phi < 0) phi += 2.0 * M_PI;
          brk.push_back(phi);
        }
      }
      std::sort(brk.begin(), brk.end());
      std::vector<double> arcs{0.0};
      for (double b : brk)
        if (b - arcs.back() > 1e-13) arcs.push_back(b);
      arcs.push_back(2.0 * M_PI);

      double ft = 0;
      for (size_t a = 0; a + 1 < arcs.size(); ++a) {
        double p0 = arcs[a], p1 = arcs[a + 1];
        if (p1 - p0 <= 1e-13) continue;
        double pm = 0.5 * (p0 + p1);
        // sign pattern at the arc midpoint; then h = A cos + B sin + c0 on the arc
        double A = 0, B = 0, c0 = 0;
        for (size_t k = 0; k < m; ++k) {
          double sgn = (R[k] * std::cos(pm - psi[k]) + C[k]) >= 0 ? 1.0 : -1.0;
          A += coefficients[k] * sgn * R[k] * std::cos(psi[k]);
          B += coefficients[k] * sgn * R[k] * std::sin(psi[k]);
          c0 += coefficients[k] * sgn * C[k];
        }
        int chunks = std::max(1, static_cast<int>(std::ceil((p1 - p0) / (M_PI / 6))));
        for (int ch = 0; ch < chunks; ++ch) {
          double q0 = p0 + (p1 - p0) * ch / chunks;
          double q1 = p0 + (p1 - p0) * (ch + 1) / chunks;
          for (size_t j = 0; j < ax.size(); ++j) {
            double phi = 0.5 * (q0 + q1) + 0.5 * (q1 - q0) * ax[j];
            double h = A * std::cos(phi) + B * std::sin(phi) + c0;
            if (h <= 1e-12 * cmax)
              throw DivergentIntegralError(
                  "zonotope_negative_cube_integral: support reaches zero");
            ft += 0.5 * (q1 - q0) * aw[j] * std::pow(h, -3.0);
          }
        }
      }
      sum += wt * ft;
    }
    panel_sums.push_back(sum);
  }
  return pairwise_sum(panel_sums);
}

// ---------------------------------------------------------------------------
// Exact plane path
// ---------------------------------------------------------------------------

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * M_PI);
  if (t < 0) t += 2.0 * M_PI;
  // Collapse values that round to a full turn.
  if (2.0 * M_PI - t < 1e-15) t = 0.0;
  return t;
}

}  // namespace

double PiecewiseCosineProfile::eval(double theta) const {
  double t = wrap_angle(theta);
  for (const CosineArc& a : arcs) {
    if (t >= a.t0 - 1e-14 && t <= a.t1 + 1e-14)
      return a.amplitude * std::cos(t - a.phase);
  }
  // angles below the first breakpoint live on the wrapped last arc
  const CosineArc& a = arcs.back();
  return a.amplitude * std::cos(t + 2.0 * M_PI - a.phase);
}

PiecewiseCosineProfile cosine_profile(const std::vector<Vec>& directions,
                                      const std::vector<double>& coefficients) {
  size_t m = directions.size();
  if (m == 0 || coefficients.size() != m)
    throw DomainError("cosine_profile: mismatched atoms");

  std::vector<double> alpha(m);
  for (size_t i = 0; i < m; ++i) alpha[i] = wrap_angle(std::atan2(directions[i][1], directions[i][0]));

  // Events: atom angles (plain splits) and alpha +- pi/2 (sign flips of atom i).
  struct Event {
    double angle;
    int flip;  // -1: none
  };
  std::vector<Event> events;
  events.reserve(3 * m);
  for (size_t i = 0; i < m; ++i) {
    events.push_back({alpha[i], -1});
    events.push_back({wrap_angle(alpha[i] + 0.5 * M_PI), static_cast<int>(i)});
    events.push_back({wrap_angle(alpha[i] - 0.5 * M_PI), static_cast<int>(i)});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.angle < b.angle; });

  // Group coincident breakpoints.
  std::vector<double> breaks;
  std::vector<std::vector<int>> flips;
  const double tol = 1e-12;
  for (const Event& e : events) {
    if (breaks.empty() || e.angle - breaks.back() > tol) {
      breaks.push_back(e.angle);
      flips.push_back({});
    }
    if (e.flip >= 0) flips.back().push_back(e.flip);
  }
  size_t nb = breaks.size();

  // Signs on the first arc (just after breaks[0]).
  double theta0 = breaks[0] + 0.5 * ((nb > 1 ? breaks[1] : breaks[0] + 2.0 * M_PI) - breaks[0]);
  std::vector<int> sgn(m);
  double A = 0, B = 0;
  for (size_t i = 0; i < m; ++i) {
    sgn[i] = std::cos(theta0 - alpha[i]) >= 0 ? 1 : -1;
    A += coefficients[i] * sgn[i] * std::cos(alpha[i]);
    B += coefficients[i] * sgn[i] * std::sin(alpha[i]);
  }

  PiecewiseCosineProfile prof;
  prof.min_value = HUGE_VAL;
  prof.max_value = 0;
  for (size_t k = 0; k < nb; ++k) {
    double t0 = breaks[k];
    double t1 = (k + 1 < nb) ? breaks[k + 1] : breaks[0] + 2.0 * M_PI;
    if (k > 0) {
      for (int i : flips[k]) {
        // sign of atom i flips at this break
        A -= 2.0 * coefficients[i] * sgn[i] * std::cos(alpha[i]);
        B -= 2.0 * coefficients[i] * sgn[i] * std::sin(alpha[i]);
        sgn[i] = -sgn[i];
      }
    }
    if (t1 - t0 <= tol) continue;
    CosineArc arc;
    arc.t0 = t0;
    arc.t1 = t1;
    arc.amplitude = std::hypot(A, B);
    arc.phase = std::atan2(B, A);
    prof.arcs.push_back(arc);
    double h0 = arc.amplitude * std::cos(t0 - arc.phase);
    double h1 = arc.amplitude * std::cos(t1 - arc.phase);
    prof.min_value = std::min({prof.min_value, h0, h1});  // cos is concave on the arc
    prof.max_value = std::max({prof.max_value, h0, h1, 0.0});
    // interior max at theta = phase, if the arc contains it
    double ph = wrap_angle(arc.phase);
    if ((ph >= t0 && ph <= t1) || (ph + 2.0 * M_PI >= t0 && ph + 2.0 * M_PI <= t1))
      prof.max_value = std::max(prof.max_value, arc.amplitude);
  }
  if (prof.arcs.empty()) throw DomainError("cosine_profile: empty profile");
  prof.degenerate = !(prof.min_value > 1e-12 * prof.max_value);
  return prof;
}

PiecewiseCosineProfile cosine_profile_from_atoms(const SurfaceAreaMeasure& S) {
  if (S.dim != 2) throw DomainError("cosine_profile_from_atoms: 2D only");
  std::vector<Vec> dirs;
  std::vector<double> coeffs;
  dirs.reserve(S.atoms.size());
  for (const SurfaceAtom& a : S.atoms) {
    dirs.push_back(a.direction);
    coeffs.push_back(0.5 * a.weight);
  }
  return cosine_profile(dirs, coeffs);
}

double exact_2d_negative_square_integral(const PiecewiseCosineProfile& profile) {
  if (profile.degenerate)
    throw DivergentIntegralError("exact_2d_negative_square_integral: profile touches zero");
  std::vector<double> terms;
  terms.reserve(profile.arcs.size());
  for (const CosineArc& a : profile.arcs) {
    double u0 = a.t0 - a.phase;
    double u1 = a.t1 - a.phase;
    double c0 = std::cos(u0), c1 = std::cos(u1);
    if (!(c0 > 0) || !(c1 > 0) || a.t1 - a.t0 >= M_PI)
      throw DivergentIntegralError("exact_2d_negative_square_integral: arc crosses a zero of h");
    // tan(u1) - tan(u0) = sin(u1 - u0) / (cos(u0) cos(u1))
    terms.push_back(std::sin(u1 - u0) / (c0 * c1 * a.amplitude * a.amplitude));
  }
  return pairwise_sum(terms);
}

}  // namespace affbv

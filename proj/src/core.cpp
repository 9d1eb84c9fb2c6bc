#include "affbv/core.hpp"

#include <algorithm>

namespace affbv {

double omega(int k) {
  if (k < 1) throw DomainError("omega: dimension must be >= 1");
  return std::pow(M_PI, 0.5 * k) / std::tgamma(1.0 + 0.5 * k);
}

double unit_sphere_area(int k) { return k * omega(k); }

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

double dist(const Vec& a, const Vec& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Vec& a, double s) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

Vec normalized(const Vec& a) {
  double n = norm(a);
  if (n == 0) throw DomainError("normalized: zero vector");
  return scale(a, 1.0 / n);
}

bool finite(const Vec& a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

Vec cross3(const Vec& a, const Vec& b) {
  return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double pairwise_sum(const std::vector<double>& v) {
  // Recursion bottom at 32 terms keeps the call depth small.
  struct Rec {
    static double run(const double* p, size_t n) {
      if (n <= 32) {
        double s = 0;
        for (size_t i = 0; i < n; ++i) s += p[i];
        return s;
      }
      size_t h = n / 2;
      return run(p, h) + run(p + h, n - h);
    }
  };
  return v.empty() ? 0.0 : Rec::run(v.data(), v.size());
}

}  // namespace affbv

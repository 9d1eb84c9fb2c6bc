// Shared substrate: small dense vectors, numeric tolerances, error types,
// unit-ball constants and deterministic summation helpers.

#ifndef AFFBV_CORE_HPP
#define AFFBV_CORE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace affbv {

using Vec = std::vector<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

/// Affinely dependent input where full dimension was required.
struct DegenerateInputError : Error {
  int affine_rank;
  DegenerateInputError(const std::string& msg, int rank) : Error(msg), affine_rank(rank) {}
};

struct SingularMapError : Error {
  using Error::Error;
};

struct InvalidPolytopeError : Error {
  using Error::Error;
};

/// Polar-volume integrand hit a (near-)zero support value: the polar body is
/// unbounded, the integral diverges.
struct DivergentIntegralError : Error {
  using Error::Error;
};

struct ConvexityError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct OrthogonalFacetError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

/// One knob for every module: absolute and relative comparison slack.
struct Tolerances {
  double abs = 1e-10;
  double rel = 1e-8;

  bool close(double a, double b) const {
    return std::fabs(a - b) <= abs + rel * std::max(std::fabs(a), std::fabs(b));
  }
};

/// Run-wide configuration shared by the numeric modules.
struct Engine {
  Tolerances tol{};
  int quad_order = 48;        // product-rule order for n >= 3
  int ball_segments_2d = 1 << 14;
  int icosphere_level = 4;    // 20 * 4^level faces
  int workers = 1;            // hint only; results do not depend on it
};

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// Volume of the k-dimensional unit ball.
double omega(int k);

/// Surface area of the unit sphere boundary of the k-ball, k*omega(k).
double unit_sphere_area(int k);

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

double dot(const Vec& a, const Vec& b);
double norm(const Vec& a);
double dist(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, double s);
Vec normalized(const Vec& a);
bool finite(const Vec& a);

inline Vec vec2(double x, double y) { return Vec{x, y}; }
inline Vec vec3(double x, double y, double z) { return Vec{x, y, z}; }

/// 90-degree counterclockwise rotation in the plane.
inline Vec rot90(const Vec& a) { return Vec{-a[1], a[0]}; }

double cross2(const Vec& a, const Vec& b);
Vec cross3(const Vec& a, const Vec& b);

// ---------------------------------------------------------------------------
// Deterministic reduction
// ---------------------------------------------------------------------------

/// Pairwise sum with a fixed association order; the result is independent of
/// any worker split used to fill the buffer.
double pairwise_sum(const std::vector<double>& v);

}  // namespace affbv

#endif

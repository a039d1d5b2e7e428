#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace maskprune {

constexpr double pi = 3.14159265358979323846;

inline double radians(double degrees) { return degrees * pi / 180.0; }
inline double degrees(double radians) { return radians * 180.0 / pi; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline Vec2 operator*(double s, Vec2 a) { return a * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length_sq(Vec2 a) { return dot(a, a); }
inline double length(Vec2 a) { return std::sqrt(length_sq(a)); }

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline Vec3 operator*(double s, Vec3 a) { return a * s; }
inline Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length_sq(Vec3 a) { return dot(a, a); }
inline double length(Vec3 a) { return std::sqrt(length_sq(a)); }
inline Vec3 normalize(Vec3 a) {
  auto len = length(a);
  return len > 0.0 ? a / len : a;
}
inline Vec3 min(Vec3 a, Vec3 b) {
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
inline Vec3 max(Vec3 a, Vec3 b) {
  return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[r * 3 + c]; }
  double& operator()(int r, int c) { return m[r * 3 + c]; }
};

inline Vec3 operator*(const Mat3& a, Vec3 v) {
  return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
      a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
      a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; i++)
    for (int j = 0; j < 3; j++)
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

inline Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; i++)
    for (int j = 0; j < 3; j++) r(i, j) = a(j, i);
  return r;
}

inline double determinant(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Rigid world-to-camera transform: p_cam = rotation * p_world + translation.
struct RigidTransform {
  Mat3 rotation;
  Vec3 translation;
};

inline Vec3 transform_point(const RigidTransform& t, Vec3 p) {
  return t.rotation * p + t.translation;
}

struct Bounds3 {
  Vec3 lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
      std::numeric_limits<double>::max()};
  Vec3 hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
      std::numeric_limits<double>::lowest()};

  void expand(Vec3 p) {
    lo = min(lo, p);
    hi = max(hi, p);
  }
  void expand(const Bounds3& b) {
    lo = min(lo, b.lo);
    hi = max(hi, b.hi);
  }
  Vec3 center() const { return (lo + hi) * 0.5; }
  Vec3 extent() const { return hi - lo; }
  bool empty() const { return lo.x > hi.x; }
};

// Squared distance from a point to an axis-aligned box (0 inside).
inline double distance_sq(const Bounds3& b, Vec3 p) {
  auto dx = std::max({b.lo.x - p.x, 0.0, p.x - b.hi.x});
  auto dy = std::max({b.lo.y - p.y, 0.0, p.y - b.hi.y});
  auto dz = std::max({b.lo.z - p.z, 0.0, p.z - b.hi.z});
  return dx * dx + dy * dy + dz * dz;
}

inline double triangle_area(Vec3 a, Vec3 b, Vec3 c) {
  return 0.5 * length(cross(b - a, c - a));
}

// Closest point on segment [a,b], returning the parameter t in [0,1].
inline Vec2 closest_point_segment(Vec2 p, Vec2 a, Vec2 b, double& t) {
  auto ab = b - a;
  auto denom = length_sq(ab);
  t = denom > 0.0 ? std::clamp(dot(p - a, ab) / denom, 0.0, 1.0) : 0.0;
  return a + ab * t;
}

inline Vec3 closest_point_segment(Vec3 p, Vec3 a, Vec3 b, double& t) {
  auto ab = b - a;
  auto denom = length_sq(ab);
  t = denom > 0.0 ? std::clamp(dot(p - a, ab) / denom, 0.0, 1.0) : 0.0;
  return a + ab * t;
}

// Point-in-triangle test in 2D, inclusive of edges and vertices.
inline bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  auto e0 = cross(b - a, p - a);
  auto e1 = cross(c - b, p - b);
  auto e2 = cross(a - c, p - c);
  return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
}

// Euclidean distance from a point to the boundary of a 2D triangle.
// Valid for points inside (nearest edge) and outside (nearest edge or vertex);
// degenerate triangles reduce to segment distances.
inline double triangle_boundary_distance(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  double t;
  auto d0 = length_sq(p - closest_point_segment(p, a, b, t));
  auto d1 = length_sq(p - closest_point_segment(p, b, c, t));
  auto d2 = length_sq(p - closest_point_segment(p, c, a, t));
  return std::sqrt(std::min({d0, d1, d2}));
}

// Closest point on a 3D triangle (Ericson). Falls back to edge distances for
// degenerate triangles.
inline Vec3 closest_point_triangle(Vec3 p, Vec3 a, Vec3 b, Vec3 c) {
  auto ab = b - a, ac = c - a, ap = p - a;
  auto d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return a;

  auto bp = p - b;
  auto d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return b;

  auto vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    auto denom = d1 - d3;
    auto v = denom > 0 ? d1 / denom : 0.0;
    return a + ab * v;
  }

  auto cp = p - c;
  auto d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return c;

  auto vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    auto denom = d2 - d6;
    auto w = denom > 0 ? d2 / denom : 0.0;
    return a + ac * w;
  }

  auto va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    auto denom = (d4 - d3) + (d5 - d6);
    auto w = denom > 0 ? (d4 - d3) / denom : 0.0;
    return b + (c - b) * w;
  }

  auto denom = va + vb + vc;
  if (!(denom > 0)) {
    // degenerate: nearest point lies on one of the edges
    double t;
    auto q0 = closest_point_segment(p, a, b, t);
    auto q1 = closest_point_segment(p, b, c, t);
    auto q2 = closest_point_segment(p, c, a, t);
    auto s0 = length_sq(p - q0), s1 = length_sq(p - q1), s2 = length_sq(p - q2);
    if (s0 <= s1 && s0 <= s2) return q0;
    return s1 <= s2 ? q1 : q2;
  }
  auto v = vb / denom, w = vc / denom;
  return a + ab * v + ac * w;
}

inline double point_triangle_distance_sq(Vec3 p, Vec3 a, Vec3 b, Vec3 c) {
  return length_sq(p - closest_point_triangle(p, a, b, c));
}

}  // namespace maskprune

#pragma once

#include <cmath>
#include <cstdint>

namespace wedgetact {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::sqrt(dot(v, v)); }
inline Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  return {v.x / n, v.y / n};
}
/// Counterclockwise rotation by `angle` radians.
inline Vec2 rotated(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}
/// Direction from angle measured counterclockwise from +x.
inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Mirror reflection of direction `d` about unit normal `n`.
inline Vec2 reflect(Vec2 d, Vec2 n) { return d - 2.0 * dot(d, n) * n; }

struct Segment2 {
  Vec2 a;
  Vec2 b;

  Vec2 dir() const { return normalized(b - a); }
  double length() const { return norm(b - a); }
  Vec2 point_at(double t) const { return a + t * (b - a); }
};

/// Ray/segment intersection. On hit fills `t_ray` (distance along the ray,
/// direction assumed unit length) and `t_seg` in [0,1] along the segment.
inline bool intersect_ray_segment(Vec2 origin, Vec2 dir, const Segment2& seg,
                                  double& t_ray, double& t_seg) {
  const Vec2 v = seg.b - seg.a;
  const double denom = cross(dir, v);
  if (std::abs(denom) < 1e-14) return false;  // parallel
  const Vec2 w = seg.a - origin;
  const double t = cross(w, v) / denom;
  const double u = cross(w, dir) / denom;
  if (t <= 1e-12 || u < 0.0 || u > 1.0) return false;
  t_ray = t;
  t_seg = u;
  return true;
}

}  // namespace wedgetact

#pragma once
/**
 * @file geometry.hpp
 * @brief Minimal 2D vector and line-segment helpers used by the ray tracer.
 *
 * All quantities are in meters. Nothing here allocates.
 */

#include <cmath>
#include <optional>

namespace sonar {

struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
  constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }
constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

inline Vec2 unit_from_angle(double radians) { return {std::cos(radians), std::sin(radians)}; }

/// Rotates v counterclockwise by `radians` about the origin.
inline Vec2 rotate(const Vec2& v, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

struct Segment {
  Vec2 a;
  Vec2 b;

  Vec2 direction() const { return b - a; }
  double length() const { return norm(b - a); }
  Vec2 at(double u) const { return a + (b - a) * u; }
};

/// Parameter u of the orthogonal projection of p onto the segment's line (u in [0,1] is on the segment).
inline double projection_parameter(const Vec2& p, const Segment& s) {
  const Vec2 d = s.direction();
  return dot(p - s.a, d) / dot(d, d);
}

/// Mirror image of p across the infinite line through s.
inline Vec2 reflect_across_line(const Vec2& p, const Segment& s) {
  const Vec2 foot = s.at(projection_parameter(p, s));
  return foot * 2.0 - p;
}

/// Signed side of p relative to the directed line a->b (positive = left).
inline double side_of_line(const Vec2& p, const Segment& s) { return cross(s.direction(), p - s.a); }

/// Intersection of the line p->q with the line through s.
/// Returns (t, u): point = p + t (q - p) = s.a + u (s.b - s.a). Empty when parallel.
struct LineHit {
  double t;
  double u;
};

inline std::optional<LineHit> intersect_lines(const Vec2& p, const Vec2& q, const Segment& s) {
  const Vec2 r = q - p;
  const Vec2 d = s.direction();
  const double den = cross(r, d);
  if (std::abs(den) < 1e-15 * (norm(r) * norm(d) + 1e-300)) return std::nullopt;
  const Vec2 w = s.a - p;
  return LineHit{cross(w, d) / den, cross(w, r) / den};
}

}  // namespace sonar

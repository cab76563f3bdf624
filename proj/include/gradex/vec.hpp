#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace gradex {

// Small fixed-size vector. 2-d code leaves z == 0; the spatial dimension is
// carried by domains/fields, not by the vector itself.
struct Vec {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec() = default;
  constexpr Vec(double x_, double y_, double z_ = 0.0) : x(x_), y(y_), z(z_) {}

  Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec operator-() const { return {-x, -y, -z}; }
  Vec& operator+=(const Vec& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec& operator-=(const Vec& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }

  double dot(const Vec& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  Vec normalized() const {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    return *this / n;
  }
  // z-component of the 2-d cross product
  double cross2(const Vec& o) const { return x * o.y - y * o.x; }

  bool operator==(const Vec& o) const { return x == o.x && y == o.y && z == o.z; }

  // strict lexicographic order, used for deterministic tie-breaking
  bool lex_less(const Vec& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline Vec unit_angle(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

// Symmetric 3x3 matrix for ellipsoid shapes; 2-d shapes embed with m22 = 1.
struct Mat3 {
  // row-major
  std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return Mat3{}; }
  static Mat3 diag(double d0, double d1, double d2 = 1.0) {
    Mat3 m;
    m.a = {d0, 0, 0, 0, d1, 0, 0, 0, d2};
    return m;
  }

  double operator()(int i, int j) const { return a[3 * i + j]; }
  double& operator()(int i, int j) { return a[3 * i + j]; }

  Vec mul(const Vec& v) const {
    return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
            a[3] * v.x + a[4] * v.y + a[5] * v.z,
            a[6] * v.x + a[7] * v.y + a[8] * v.z};
  }

  double quad(const Vec& v) const { return v.dot(mul(v)); }

  double det() const {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }

  Mat3 scaled(double s) const {
    Mat3 m = *this;
    for (auto& v : m.a) v *= s;
    return m;
  }

  Mat3 inverse() const {
    double d = det();
    if (std::abs(d) < 1e-300) throw std::invalid_argument("singular shape matrix");
    Mat3 r;
    r.a[0] = (a[4] * a[8] - a[5] * a[7]) / d;
    r.a[1] = (a[2] * a[7] - a[1] * a[8]) / d;
    r.a[2] = (a[1] * a[5] - a[2] * a[4]) / d;
    r.a[3] = (a[5] * a[6] - a[3] * a[8]) / d;
    r.a[4] = (a[0] * a[8] - a[2] * a[6]) / d;
    r.a[5] = (a[2] * a[3] - a[0] * a[5]) / d;
    r.a[6] = (a[3] * a[7] - a[4] * a[6]) / d;
    r.a[7] = (a[1] * a[6] - a[0] * a[7]) / d;
    r.a[8] = (a[0] * a[4] - a[1] * a[3]) / d;
    return r;
  }

  bool symmetric(double tol = 1e-12) const {
    return std::abs(a[1] - a[3]) <= tol && std::abs(a[2] - a[6]) <= tol &&
           std::abs(a[5] - a[7]) <= tol;
  }

  // positive definiteness via leading principal minors
  bool positive_definite() const {
    double m1 = a[0];
    double m2 = a[0] * a[4] - a[1] * a[3];
    double m3 = det();
    return m1 > 0 && m2 > 0 && m3 > 0;
  }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- segment predicates (2-d, z ignored) ----

// distance from p to the closed segment [a,b]
inline double dist_point_segment(const Vec& p, const Vec& a, const Vec& b) {
  Vec ab = b - a;
  double len2 = ab.norm2();
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

// parameter along [a,b] of the first intersection with segment [c,d];
// returns +inf when the two segments do not meet. Collinear overlap reports
// the smallest parameter at which [a,b] touches [c,d].
inline double segment_intersection_param(const Vec& a, const Vec& b, const Vec& c,
                                         const Vec& d, double tol = 1e-13) {
  Vec r = b - a, s = d - c;
  double denom = r.cross2(s);
  Vec ca = c - a;
  double scale = std::max({1.0, r.norm(), s.norm()});
  if (std::abs(denom) > tol * scale * scale) {
    double t = ca.cross2(s) / denom;
    double u = ca.cross2(r) / denom;
    double slack = tol / scale;
    if (t >= -slack && t <= 1 + slack && u >= -slack && u <= 1 + slack)
      return std::clamp(t, 0.0, 1.0);
    return kInf;
  }
  // parallel
  if (std::abs(ca.cross2(r)) > tol * scale * scale) return kInf;  // disjoint lines
  // collinear: project [c,d] onto the parameter of [a,b]
  double rr = r.norm2();
  if (rr == 0.0) return dist_point_segment(a, c, d) <= tol ? 0.0 : kInf;
  double t0 = (c - a).dot(r) / rr;
  double t1 = (d - a).dot(r) / rr;
  if (t0 > t1) std::swap(t0, t1);
  if (t1 < 0.0 || t0 > 1.0) return kInf;
  return std::clamp(t0, 0.0, 1.0);
}

// first parameter t in (0,1] at which segment a+t(b-a) meets the circle
// |p - center| = radius; +inf when no hit.
inline double segment_circle_param(const Vec& a, const Vec& b, const Vec& center,
                                   double radius) {
  Vec d = b - a, f = a - center;
  double A = d.norm2();
  if (A == 0.0) return kInf;
  double B = 2.0 * f.dot(d);
  double C = f.norm2() - radius * radius;
  double disc = B * B - 4 * A * C;
  if (disc < 0.0) return kInf;
  double sq = std::sqrt(disc);
  double t1 = (-B - sq) / (2 * A);
  double t2 = (-B + sq) / (2 * A);
  for (double t : {t1, t2})
    if (t > 1e-12 && t <= 1.0 + 1e-12) return std::min(t, 1.0);
  return kInf;
}

}  // namespace gradex

#include "gradex/domain.hpp"

#include <algorithm>
#include <cmath>

namespace gradex {

Vec BoundaryArc::point_at(double s) const {
  if (kind == Kind::Segment) {
    double t = std::clamp(s / length, 0.0, 1.0);
    return a + (b - a) * t;
  }
  double theta = s / radius;
  return center + Vec{radius * std::cos(theta), radius * std::sin(theta)};
}

double BoundaryArc::param_of(const Vec& p) const {
  if (kind == Kind::Segment) {
    Vec ab = b - a;
    double t = std::clamp((p - a).dot(ab) / ab.norm2(), 0.0, 1.0);
    return t * length;
  }
  double theta = std::atan2(p.y - center.y, p.x - center.x);
  if (theta < 0) theta += 2 * M_PI;
  return theta * radius;
}

namespace {

void validate_slits(const Domain& d, const std::vector<Slit>& slits) {
  for (const Slit& s : slits) {
    if (s.length() < 1e-12) throw GeometryError("slit has zero length");
    if (!d.in_closure(s.a) || !d.in_closure(s.b))
      throw GeometryError("slit endpoints must lie in the domain closure");
    Vec mid = (s.a + s.b) * 0.5;
    if (!d.in_closure(mid)) throw GeometryError("slit leaves the domain");
  }
  for (size_t i = 0; i < slits.size(); ++i)
    for (size_t j = i + 1; j < slits.size(); ++j) {
      double t = segment_intersection_param(slits[i].a, slits[i].b, slits[j].a, slits[j].b);
      if (t > 1e-9 && t < 1 - 1e-9) throw GeometryError("slits intersect each other");
    }
}

}  // namespace

void Domain::finalize() {
  // slit side arcs (two per slit, distinguished by `side`)
  for (size_t i = 0; i < slits_.size(); ++i) {
    for (int side : {+1, -1}) {
      BoundaryArc arc;
      arc.kind = BoundaryArc::Kind::Segment;
      arc.a = slits_[i].a;
      arc.b = slits_[i].b;
      arc.slit_index = static_cast<int>(i);
      arc.side = side;
      arc.length = slits_[i].length();
      arcs_.push_back(arc);
    }
    slit_feature_ = std::min(slit_feature_, slits_[i].length());
  }
}

Domain Domain::rectangle(const Vec& lo, const Vec& hi, std::vector<Slit> slits) {
  if (!(lo.x < hi.x) || !(lo.y < hi.y))
    throw GeometryError("rectangle corners must satisfy lo < hi");
  Domain d;
  d.kind_ = DomainKind::Rectangle;
  d.lo_ = lo;
  d.hi_ = hi;
  d.bbox_lo_ = lo;
  d.bbox_hi_ = hi;
  d.feature_size_ = std::min(hi.x - lo.x, hi.y - lo.y);
  const Vec c00 = lo, c10 = {hi.x, lo.y}, c11 = hi, c01 = {lo.x, hi.y};
  for (auto [a, b] : {std::pair{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}}) {
    BoundaryArc arc;
    arc.a = a;
    arc.b = b;
    arc.length = (b - a).norm();
    d.arcs_.push_back(arc);
  }
  validate_slits(d, slits);
  d.slits_ = std::move(slits);
  d.finalize();
  return d;
}

Domain Domain::box3(const Vec& lo, const Vec& hi) {
  if (!(lo.x < hi.x) || !(lo.y < hi.y) || !(lo.z < hi.z))
    throw GeometryError("box corners must satisfy lo < hi");
  Domain d;
  d.kind_ = DomainKind::Rectangle;
  d.dim_ = 3;
  d.lo_ = lo;
  d.hi_ = hi;
  d.bbox_lo_ = lo;
  d.bbox_hi_ = hi;
  d.feature_size_ = std::min({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
  return d;
}

Domain Domain::disk(const Vec& center, double radius, std::vector<Slit> slits) {
  if (!(radius > 0.0)) throw GeometryError("disk radius must be positive");
  Domain d;
  d.kind_ = DomainKind::Disk;
  d.center_ = center;
  d.radius_ = radius;
  d.bbox_lo_ = center - Vec{radius, radius};
  d.bbox_hi_ = center + Vec{radius, radius};
  d.feature_size_ = radius;
  BoundaryArc arc;
  arc.kind = BoundaryArc::Kind::Circle;
  arc.center = center;
  arc.radius = radius;
  arc.length = 2 * M_PI * radius;
  d.arcs_.push_back(arc);
  validate_slits(d, slits);
  d.slits_ = std::move(slits);
  d.finalize();
  return d;
}

Domain Domain::polygon(std::vector<Vec> vertices, std::vector<Slit> slits) {
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
  // enforce counter-clockwise orientation
  double area2 = 0.0;
  for (int i = 0; i < n; ++i) area2 += vertices[i].cross2(vertices[(i + 1) % n]);
  if (std::abs(area2) < 1e-14) throw GeometryError("degenerate polygon");
  if (area2 < 0) std::reverse(vertices.begin(), vertices.end());
  // reject self-intersection (non-adjacent edge pairs)
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      double t = segment_intersection_param(vertices[i], vertices[(i + 1) % n],
                                            vertices[j], vertices[(j + 1) % n]);
      if (t < kInf && t > 1e-12 && t < 1 - 1e-12)
        throw GeometryError("polygon is self-intersecting");
    }
  }
  Domain d;
  d.kind_ = DomainKind::Polygon;
  d.poly_ = vertices;
  d.bbox_lo_ = {kInf, kInf};
  d.bbox_hi_ = {-kInf, -kInf};
  for (const Vec& v : vertices) {
    d.bbox_lo_.x = std::min(d.bbox_lo_.x, v.x);
    d.bbox_lo_.y = std::min(d.bbox_lo_.y, v.y);
    d.bbox_hi_.x = std::max(d.bbox_hi_.x, v.x);
    d.bbox_hi_.y = std::max(d.bbox_hi_.y, v.y);
  }
  d.feature_size_ = std::min(d.bbox_hi_.x - d.bbox_lo_.x, d.bbox_hi_.y - d.bbox_lo_.y);
  for (int i = 0; i < n; ++i) {
    BoundaryArc arc;
    arc.a = vertices[i];
    arc.b = vertices[(i + 1) % n];
    arc.length = (arc.b - arc.a).norm();
    if (arc.length < 1e-12) throw GeometryError("polygon has a zero-length edge");
    d.arcs_.push_back(arc);
  }
  validate_slits(d, slits);
  d.slits_ = std::move(slits);
  d.finalize();
  return d;
}

bool Domain::in_closure(const Vec& p, double tol) const {
  switch (kind_) {
    case DomainKind::Rectangle:
      if (dim_ == 3 && (p.z < lo_.z - tol || p.z > hi_.z + tol)) return false;
      return p.x >= lo_.x - tol && p.x <= hi_.x + tol && p.y >= lo_.y - tol &&
             p.y <= hi_.y + tol;
    case DomainKind::Disk:
      return (p - center_).norm() <= radius_ + tol;
    case DomainKind::Polygon: {
      // winding by ray casting, with an on-edge tolerance
      const int n = static_cast<int>(poly_.size());
      for (int i = 0; i < n; ++i)
        if (dist_point_segment(p, poly_[i], poly_[(i + 1) % n]) <= tol) return true;
      bool in = false;
      for (int i = 0, j = n - 1; i < n; j = i++) {
        const Vec& a = poly_[i];
        const Vec& b = poly_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
          double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
          if (p.x < xint) in = !in;
        }
      }
      return in;
    }
  }
  return false;
}

bool Domain::on_boundary(const Vec& p, double tol) const {
  switch (kind_) {
    case DomainKind::Rectangle: {
      if (!in_closure(p, tol)) return false;
      if (dim_ == 3)
        return std::abs(p.x - lo_.x) <= tol || std::abs(p.x - hi_.x) <= tol ||
               std::abs(p.y - lo_.y) <= tol || std::abs(p.y - hi_.y) <= tol ||
               std::abs(p.z - lo_.z) <= tol || std::abs(p.z - hi_.z) <= tol;
      return std::abs(p.x - lo_.x) <= tol || std::abs(p.x - hi_.x) <= tol ||
             std::abs(p.y - lo_.y) <= tol || std::abs(p.y - hi_.y) <= tol;
    }
    case DomainKind::Disk:
      return std::abs((p - center_).norm() - radius_) <= tol;
    case DomainKind::Polygon: {
      const int n = static_cast<int>(poly_.size());
      for (int i = 0; i < n; ++i)
        if (dist_point_segment(p, poly_[i], poly_[(i + 1) % n]) <= tol) return true;
      return false;
    }
  }
  return false;
}

int Domain::on_open_slit(const Vec& p, double tol) const {
  for (size_t i = 0; i < slits_.size(); ++i) {
    const Slit& s = slits_[i];
    if (dist_point_segment(p, s.a, s.b) <= tol) {
      // slit endpoints are not part of the open slit
      if ((p - s.a).norm() <= tol || (p - s.b).norm() <= tol) continue;
      return static_cast<int>(i);
    }
  }
  return -1;
}

bool Domain::strictly_inside(const Vec& p, double tol) const {
  if (on_boundary(p, tol)) return false;
  if (!in_closure(p, -tol)) return false;
  return on_open_slit(p, tol) < 0;
}

std::optional<Domain::Hit> Domain::first_boundary_hit(const Vec& a, const Vec& b,
                                                      double t_min) const {
  Hit best;
  // base boundary arcs
  for (size_t ai = 0; ai < arcs_.size(); ++ai) {
    const BoundaryArc& arc = arcs_[ai];
    if (arc.slit_index >= 0) continue;  // handled below via slits_
    double t;
    if (arc.kind == BoundaryArc::Kind::Segment)
      t = segment_intersection_param(a, b, arc.a, arc.b);
    else
      t = segment_circle_param(a, b, arc.center, arc.radius);
    if (t > t_min && t < best.t) {
      best.t = t;
      best.arc = static_cast<int>(ai);
      best.s = arc.param_of(a + (b - a) * t);
      best.side = 0;
    }
  }
  // slits: the hit resolves to the side arc matching the approach direction
  for (size_t si = 0; si < slits_.size(); ++si) {
    const Slit& s = slits_[si];
    double t = segment_intersection_param(a, b, s.a, s.b);
    if (!(t > t_min && t < best.t)) continue;
    double side = s.signed_side(a);
    if (side == 0.0) side = -s.signed_side(b);  // a on the slit line: use departure
    int want = side >= 0 ? +1 : -1;
    for (size_t ai = 0; ai < arcs_.size(); ++ai) {
      const BoundaryArc& arc = arcs_[ai];
      if (arc.slit_index == static_cast<int>(si) && arc.side == want) {
        best.t = t;
        best.arc = static_cast<int>(ai);
        best.s = arc.param_of(a + (b - a) * t);
        best.side = want;
        break;
      }
    }
  }
  if (best.arc < 0) return std::nullopt;
  return best;
}

double Domain::distance_to_boundary(const Vec& p) const {
  double best = kInf;
  if (kind_ == DomainKind::Rectangle) {
    best = std::min({p.x - lo_.x, hi_.x - p.x, p.y - lo_.y, hi_.y - p.y});
    if (dim_ == 3) best = std::min({best, p.z - lo_.z, hi_.z - p.z});
  } else if (kind_ == DomainKind::Disk) {
    best = radius_ - (p - center_).norm();
  } else {
    const int n = static_cast<int>(poly_.size());
    for (int i = 0; i < n; ++i)
      best = std::min(best, dist_point_segment(p, poly_[i], poly_[(i + 1) % n]));
  }
  for (const Slit& s : slits_) best = std::min(best, dist_point_segment(p, s.a, s.b));
  return best;
}

bool Domain::segment_admissible(const Vec& a, const Vec& b) const {
  const double tol = 1e-12;
  if (!in_closure(a, tol) || !in_closure(b, tol)) return false;
  if (kind_ == DomainKind::Polygon) {
    // a non-convex polygon can be exited mid-segment: probe just past any
    // proper edge crossing
    const int n = static_cast<int>(poly_.size());
    for (int i = 0; i < n; ++i) {
      double t = segment_intersection_param(a, b, poly_[i], poly_[(i + 1) % n]);
      if (t < kInf && t > 1e-9 && t < 1 - 1e-9) {
        Vec probe = a + (b - a) * std::min(1.0, t + 1e-6);
        if (!in_closure(probe, tol)) return false;
      }
    }
    if (!in_closure((a + b) * 0.5, tol)) return false;
  }
  // open slits block transversal crossings and collinear runs
  for (const Slit& s : slits_) {
    double t = segment_intersection_param(a, b, s.a, s.b);
    if (t == kInf) continue;
    Vec hit = a + (b - a) * t;
    bool hit_at_a = (hit - a).norm() <= tol;
    bool hit_at_b = (hit - b).norm() <= tol;
    bool hit_on_open = on_open_slit(hit, tol) >= 0;
    if (!hit_on_open) continue;  // touches only a slit endpoint
    if (!hit_at_a && !hit_at_b) return false;  // proper crossing
    // segment starts or ends on the open slit: collinear runs along the slit
    // are admissible (they hug one side); transversal departures are resolved
    // by the caller's side bookkeeping
    Vec d = (b - a).normalized();
    double along = std::abs(d.dot(s.direction()));
    if (along > 1 - 1e-9) continue;  // runs along the slit
  }
  return true;
}

}  // namespace gradex

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gradex/errors.hpp"
#include "gradex/vec.hpp"

namespace gradex {

enum class DomainKind { Rectangle, Disk, Polygon };

// open segment removed from the domain; endpoints belong to the domain closure
struct Slit {
  Vec a, b;
  Vec direction() const { return (b - a).normalized(); }
  double length() const { return (b - a).norm(); }
  // signed side of p w.r.t. the slit line (+1 left of a->b, -1 right)
  double signed_side(const Vec& p) const { return direction().cross2(p - a); }
};

// one boundary arc, parameterized by arclength
struct BoundaryArc {
  enum class Kind { Segment, Circle };
  Kind kind = Kind::Segment;
  Vec a, b;             // Segment endpoints
  Vec center;           // Circle
  double radius = 1.0;  // Circle (full circle, parameter = radius * angle)
  int slit_index = -1;  // >= 0 for arcs that are slit sides
  int side = 0;         // +1 / -1 for slit sides, 0 otherwise
  double length = 0.0;

  Vec point_at(double s) const;
  double param_of(const Vec& p) const;  // arclength of the closest arc point
};

// Bounded open domain: rectangle, disk, or simple polygon, possibly with
// slits removed. Immutable once built; geometric queries are pure.
class Domain {
 public:
  static Domain rectangle(const Vec& lo, const Vec& hi, std::vector<Slit> slits = {});
  // 3-d box (smoke-test path: no slits, 26-neighbor stencil meshes)
  static Domain box3(const Vec& lo, const Vec& hi);
  static Domain disk(const Vec& center, double radius, std::vector<Slit> slits = {});
  // simple (non-self-intersecting) polygon, vertices in any orientation
  static Domain polygon(std::vector<Vec> vertices, std::vector<Slit> slits = {});

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<Slit>& slits() const { return slits_; }
  const std::vector<BoundaryArc>& arcs() const { return arcs_; }
  Vec bbox_lo() const { return bbox_lo_; }
  Vec bbox_hi() const { return bbox_hi_; }
  // smallest base-domain dimension and smallest slit length (mesh checks)
  double feature_size() const { return feature_size_; }
  double slit_feature_size() const { return slit_feature_; }

  // strictly inside the open set (off the closed base boundary and off the
  // open slits; slit endpoints count as inside when interior to the base)
  bool strictly_inside(const Vec& p, double tol = 1e-12) const;
  // inside the closure of the base shape (slits do not affect the closure)
  bool in_closure(const Vec& p, double tol = 1e-12) const;
  bool on_boundary(const Vec& p, double tol = 1e-12) const;
  // index of the open slit within tol of p (slit endpoints excluded), or -1
  int on_open_slit(const Vec& p, double tol = 1e-12) const;

  struct Hit {
    double t = kInf;   // parameter along the probe segment
    int arc = -1;      // arc index hit
    double s = 0.0;    // arclength on the arc
    int side = 0;      // approach side for slit arcs
  };
  // first intersection of segment a->b with the boundary (base arcs or
  // slits), ignoring hits at parameter <= t_min
  std::optional<Hit> first_boundary_hit(const Vec& a, const Vec& b,
                                        double t_min = 1e-12) const;

  // whether the closed segment [a, b] stays in the closure and does not
  // cross any open slit transversally or along it
  bool segment_admissible(const Vec& a, const Vec& b) const;

  // Euclidean distance to the boundary (base arcs and slits)
  double distance_to_boundary(const Vec& p) const;

 private:
  Domain() = default;
  void finalize();

  DomainKind kind_ = DomainKind::Rectangle;
  int dim_ = 2;
  Vec lo_, hi_;                 // rectangle / box
  Vec center_;                  // disk
  double radius_ = 1.0;         // disk
  std::vector<Vec> poly_;       // polygon vertices, counter-clockwise
  std::vector<Slit> slits_;
  std::vector<BoundaryArc> arcs_;
  Vec bbox_lo_, bbox_hi_;
  double feature_size_ = kInf;
  double slit_feature_ = kInf;
};

}  // namespace gradex

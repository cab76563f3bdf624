#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "gradex/errors.hpp"
#include "gradex/expr.hpp"
#include "gradex/vec.hpp"

namespace gradex {

class Supremand;
class ConvexField;

enum class SetKind { Ball, Ellipsoid, Polytope, LevelSet };

// One compact convex set containing a ball B(0, alpha) and contained in
// B(0, M). Immutable after construction; all evaluations are pure.
class ConvexSetInstance {
 public:
  static ConvexSetInstance ball(double radius, int dim = 2);
  static ConvexSetInstance ellipsoid(const Mat3& shape, int dim = 2);
  // vertices must strictly contain the origin in their hull (2-d only)
  static ConvexSetInstance polytope(std::vector<Vec> vertices);
  static ConvexSetInstance level_set(std::shared_ptr<const Supremand> h, const Vec& x,
                                     double nu);

  SetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double bound_M() const { return M_; }
  double radius() const { return radius_; }
  const Mat3& shape() const { return shape_; }
  const std::vector<Vec>& vertices() const { return vertices_; }

  // Minkowski gauge inf{t > 0 : p/t in K}
  double gauge(const Vec& p) const;
  // support function sup{p . q : p in K}
  double support(const Vec& q) const;
  // a boundary point attaining the support in direction q (q != 0);
  // polytope ties resolved to the lexicographically smallest vertex
  Vec support_argmax(const Vec& q) const;

  // spot-check of the stored (alpha, M) bounds and convexity by sampling
  // directions; throws ModelError on violation
  void validate(int directions = 1024) const;

  // the set s * K (s > 0)
  ConvexSetInstance scaled(double s) const;

 private:
  ConvexSetInstance() = default;

  SetKind kind_ = SetKind::Ball;
  int dim_ = 2;
  double alpha_ = 1.0, M_ = 1.0;
  double scale_ = 1.0;

  double radius_ = 1.0;                       // Ball
  Mat3 shape_ = Mat3::identity(), shape_inv_ = Mat3::identity();  // Ellipsoid
  std::vector<Vec> vertices_;                 // Polytope (input order)
  std::vector<Vec> hull_;                     // counter-clockwise hull
  std::vector<Vec> hull_normals_;             // outward edge normals
  std::vector<double> hull_offsets_;          // n . p <= c on K, c > 0
  std::shared_ptr<const Supremand> h_;        // LevelSet
  Vec level_x_;
  double level_ = 1.0;
};

// A spatially varying family x -> K(x) with uniform bounds alpha, M.
// Parameterized in closed form: a constant instance, a base instance scaled
// by a positive whitelist expression, or a supremand sublevel family.
class ConvexField {
 public:
  static ConvexField constant(ConvexSetInstance base);
  static ConvexField scaled(ConvexSetInstance base, ScalarExpr scale, double scale_min,
                            double scale_max);
  static ConvexField level_set(std::shared_ptr<const Supremand> h, double nu);

  ConvexSetInstance at(const Vec& x) const;
  double alpha() const { return alpha_; }
  double bound_M() const { return M_; }
  int dim() const { return dim_; }

  bool is_level_set() const { return h_ != nullptr; }
  const std::shared_ptr<const Supremand>& supremand() const { return h_; }
  double level() const { return nu_; }
  const std::optional<ScalarExpr>& scale_expr() const { return scale_; }
  double scale_min() const { return scale_min_; }
  double scale_max() const { return scale_max_; }
  const ConvexSetInstance& base_instance() const;

  // sample the uniform bounds over the given positions; throws ModelError
  // when an instance violates them
  void validate_over(const std::vector<Vec>& positions, int directions = 256) const;

 private:
  ConvexField() = default;

  std::optional<ConvexSetInstance> base_;
  std::optional<ScalarExpr> scale_;
  double scale_min_ = 1.0, scale_max_ = 1.0;
  std::shared_ptr<const Supremand> h_;
  double nu_ = 1.0;
  double alpha_ = 1.0, M_ = 1.0;
  int dim_ = 2;
};

// A supremand H(x, p): nonnegative, H(x, 0) = 0, quasi-convex and coercive
// in p. Sublevel sets {H(x, .) <= nu} furnish constraint sets.
class Supremand {
 public:
  virtual ~Supremand() = default;
  virtual double eval(const Vec& x, const Vec& p) const = 0;
  virtual bool one_homogeneous() const { return false; }
  virtual int dim() const { return 2; }
  // closed-form sublevel set when one exists (scaled norms, ellipsoid and
  // polytope gauges); nullopt falls back to generic level-set evaluation
  virtual std::optional<ConvexSetInstance> sublevel(const Vec& x, double nu) const;
  // closed-form constraint field at a level, when one exists
  virtual std::optional<ConvexField> closed_level_field(double nu) const;
  // uniform bounds B(0, alpha) subset {H(x,.) <= nu} subset B(0, M)
  virtual std::pair<double, double> sublevel_bounds(double nu) const = 0;
};

// ---- module operations ----

double gauge_eval(const ConvexField& field, const Vec& x, const Vec& p);
double support_eval(const ConvexField& field, const Vec& x, const Vec& q);
Vec support_argmax(const ConvexField& field, const Vec& x, const Vec& q);

// sup over q != 0 of (p . q) / support(x, q), computed by direction search;
// equals the gauge by bipolar duality
double bipolar_gauge(const ConvexField& field, const Vec& x, const Vec& p,
                     int coarse_directions = 4096);

// max of the two one-sided deviations, each maximized over sampled boundary
// directions of one set (2-d)
double hausdorff_distance(const ConvexSetInstance& a, const ConvexSetInstance& b,
                          int directions = 4096);

// central finite-difference approximation of the position gradient of the
// support function
Vec support_x_gradient(const ConvexField& field, const Vec& x, const Vec& q, double h);

// Euclidean distance from p to the set (0 inside), via direction sampling
double dist_to_set(const Vec& p, const ConvexSetInstance& k, int directions = 4096);

}  // namespace gradex

#pragma once

#include "gradex/scenario.hpp"

namespace gradex::presets {

// canonical scenarios used by the verification suite, tests, and docs

inline Domain unit_square() { return Domain::rectangle({0, 0}, {1, 1}); }

// unit disk with the vertical slit {0} x (0, 1) removed
inline Domain slit_disk() {
  return Domain::disk({0, 0}, 1.0, {Slit{{0, 0}, {0, 1}}});
}

inline ConvexField unit_ball_field() {
  return ConvexField::constant(ConvexSetInstance::ball(1.0));
}

// axis-aligned ellipse {p : (p1/2)^2 + p2^2 <= 1}; support is sqrt(4 q1^2 + q2^2)
inline ConvexField ellipse_field() {
  return ConvexField::constant(ConvexSetInstance::ellipsoid(Mat3::diag(4.0, 1.0)));
}

inline ConvexSetInstance square_set() {
  return ConvexSetInstance::polytope({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
}

// radially growing ball field K(x) = B(0, 1 + |x|^2) on the unit square
inline ConvexField radial_ball_field() {
  return ConvexField::scaled(ConvexSetInstance::ball(1.0),
                             ScalarExpr::radial_poly({1.0, 1.0}), 1.0, 3.0);
}

// linear boundary datum g(y) = y . e with the unit vector e = (2, 1)/sqrt(5);
// the direction is representable by the 16-neighbor stencil, so the discrete
// solution converges at first order without an angular error floor
inline Vec linear_direction() {
  const double s = 1.0 / std::sqrt(5.0);
  return {2 * s, 1 * s};
}

inline ScalarExpr linear_datum() { return ScalarExpr::dot(linear_direction()); }

// distance to the boundary of the unit square, as a whitelist expression
inline ScalarExpr square_boundary_distance() {
  return ScalarExpr::min_of({ScalarExpr::coord(0), ScalarExpr::affine({-1, 0}, 1.0),
                             ScalarExpr::coord(1), ScalarExpr::affine({0, -1}, 1.0)});
}

// clipped corner cone datum g(y) = min(|y|, c)
inline ScalarExpr clipped_cone_datum(double clip = 0.8) {
  return ScalarExpr::min_of({ScalarExpr::norm(), ScalarExpr::constant(clip)});
}

}  // namespace gradex::presets

#pragma once

#include <memory>
#include <vector>

#include "gradex/vec.hpp"

namespace gradex {

// Whitelisted closed-form scalar expressions over positions. This is the
// only spatial-dependence language the library accepts: constants,
// coordinates, |x|, |x|^2, dot products with fixed vectors, affine maps,
// polynomials in |x|^2, polynomial composition, and min/max/sum combinations.
// Evaluation is pure; instances are immutable and cheap to copy.
class ScalarExpr {
 public:
  enum class Kind { Const, Coord, Norm, Norm2, Dot, Affine, RadialPoly, Poly, Min, Max, Sum };

  struct Node {
    Kind kind = Kind::Const;
    double value = 0.0;              // Const
    int index = 0;                   // Coord
    Vec vec;                         // Dot / Affine direction
    double offset = 0.0;             // Affine
    std::vector<double> coeffs;      // RadialPoly / Poly
    std::shared_ptr<const Node> base;  // Poly
    std::vector<std::shared_ptr<const Node>> args;  // Min / Max / Sum
  };

  ScalarExpr() : node_(std::make_shared<Node>()) {}

  double eval(const Vec& x) const { return eval_node(*node_, x); }
  double operator()(const Vec& x) const { return eval(x); }

  const Node& node() const { return *node_; }
  const std::shared_ptr<const Node>& node_ptr() const { return node_; }

  static ScalarExpr constant(double v);
  static ScalarExpr coord(int i);
  static ScalarExpr norm();
  static ScalarExpr norm2();
  static ScalarExpr dot(const Vec& e);
  static ScalarExpr affine(const Vec& a, double b);
  static ScalarExpr radial_poly(std::vector<double> coeffs);
  static ScalarExpr poly(const ScalarExpr& base, std::vector<double> coeffs);
  static ScalarExpr min_of(std::vector<ScalarExpr> args);
  static ScalarExpr max_of(std::vector<ScalarExpr> args);
  static ScalarExpr sum_of(std::vector<ScalarExpr> args);

  static ScalarExpr from_node(std::shared_ptr<const Node> n) {
    ScalarExpr e;
    e.node_ = std::move(n);
    return e;
  }

 private:
  static double eval_node(const Node& n, const Vec& x);
  std::shared_ptr<const Node> node_;
};

}  // namespace gradex

#include "gradex/expr.hpp"

#include <stdexcept>

namespace gradex {

namespace {
std::shared_ptr<ScalarExpr::Node> make_node(ScalarExpr::Kind k) {
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = k;
  return n;
}
}  // namespace

ScalarExpr ScalarExpr::constant(double v) {
  auto n = make_node(Kind::Const);
  n->value = v;
  return from_node(n);
}

ScalarExpr ScalarExpr::coord(int i) {
  if (i < 0 || i > 2) throw std::invalid_argument("coord index must be 0, 1 or 2");
  auto n = make_node(Kind::Coord);
  n->index = i;
  return from_node(n);
}

ScalarExpr ScalarExpr::norm() { return from_node(make_node(Kind::Norm)); }

ScalarExpr ScalarExpr::norm2() { return from_node(make_node(Kind::Norm2)); }

ScalarExpr ScalarExpr::dot(const Vec& e) {
  auto n = make_node(Kind::Dot);
  n->vec = e;
  return from_node(n);
}

ScalarExpr ScalarExpr::affine(const Vec& a, double b) {
  auto n = make_node(Kind::Affine);
  n->vec = a;
  n->offset = b;
  return from_node(n);
}

ScalarExpr ScalarExpr::radial_poly(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("radial_poly needs coefficients");
  auto n = make_node(Kind::RadialPoly);
  n->coeffs = std::move(coeffs);
  return from_node(n);
}

ScalarExpr ScalarExpr::poly(const ScalarExpr& base, std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("poly needs coefficients");
  auto n = make_node(Kind::Poly);
  n->coeffs = std::move(coeffs);
  n->base = base.node_ptr();
  return from_node(n);
}

namespace {
ScalarExpr combine(ScalarExpr::Kind k, std::vector<ScalarExpr> args) {
  if (args.empty()) throw std::invalid_argument("combination needs arguments");
  auto n = std::make_shared<ScalarExpr::Node>();
  n->kind = k;
  for (auto& a : args) n->args.push_back(a.node_ptr());
  return ScalarExpr::from_node(n);
}
}  // namespace

ScalarExpr ScalarExpr::min_of(std::vector<ScalarExpr> args) { return combine(Kind::Min, std::move(args)); }
ScalarExpr ScalarExpr::max_of(std::vector<ScalarExpr> args) { return combine(Kind::Max, std::move(args)); }
ScalarExpr ScalarExpr::sum_of(std::vector<ScalarExpr> args) { return combine(Kind::Sum, std::move(args)); }

double ScalarExpr::eval_node(const Node& n, const Vec& x) {
  switch (n.kind) {
    case Kind::Const:
      return n.value;
    case Kind::Coord:
      return n.index == 0 ? x.x : (n.index == 1 ? x.y : x.z);
    case Kind::Norm:
      return x.norm();
    case Kind::Norm2:
      return x.norm2();
    case Kind::Dot:
      return n.vec.dot(x);
    case Kind::Affine:
      return n.vec.dot(x) + n.offset;
    case Kind::RadialPoly: {
      double r2 = x.norm2(), acc = 0.0, pw = 1.0;
      for (double c : n.coeffs) {
        acc += c * pw;
        pw *= r2;
      }
      return acc;
    }
    case Kind::Poly: {
      double b = eval_node(*n.base, x), acc = 0.0, pw = 1.0;
      for (double c : n.coeffs) {
        acc += c * pw;
        pw *= b;
      }
      return acc;
    }
    case Kind::Min: {
      double m = kInf;
      for (auto& a : n.args) m = std::min(m, eval_node(*a, x));
      return m;
    }
    case Kind::Max: {
      double m = -kInf;
      for (auto& a : n.args) m = std::max(m, eval_node(*a, x));
      return m;
    }
    case Kind::Sum: {
      double s = 0.0;
      for (auto& a : n.args) s += eval_node(*a, x);
      return s;
    }
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace gradex

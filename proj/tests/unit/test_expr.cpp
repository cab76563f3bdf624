#include <doctest.h>

#include "gradex/expr.hpp"

using namespace gradex;

TEST_CASE("expression whitelist evaluates") {
  Vec x{0.3, -0.4, 0.0};
  CHECK(ScalarExpr::constant(2.5).eval(x) == 2.5);
  CHECK(ScalarExpr::coord(0).eval(x) == 0.3);
  CHECK(ScalarExpr::coord(1).eval(x) == -0.4);
  CHECK(ScalarExpr::norm().eval(x) == doctest::Approx(0.5));
  CHECK(ScalarExpr::norm2().eval(x) == doctest::Approx(0.25));
  CHECK(ScalarExpr::dot({2, 1}).eval(x) == doctest::Approx(0.2));
  CHECK(ScalarExpr::affine({1, 1}, 3.0).eval(x) == doctest::Approx(2.9));
  // 1 + |x|^2
  CHECK(ScalarExpr::radial_poly({1.0, 1.0}).eval(x) == doctest::Approx(1.25));
  // (x1)^2 via composition
  CHECK(ScalarExpr::poly(ScalarExpr::coord(0), {0, 0, 1}).eval(x) == doctest::Approx(0.09));
  CHECK(ScalarExpr::min_of({ScalarExpr::norm(), ScalarExpr::constant(0.2)}).eval(x) ==
        doctest::Approx(0.2));
  CHECK(ScalarExpr::max_of({ScalarExpr::norm(), ScalarExpr::constant(0.2)}).eval(x) ==
        doctest::Approx(0.5));
  CHECK(ScalarExpr::sum_of({ScalarExpr::coord(0), ScalarExpr::coord(1)}).eval(x) ==
        doctest::Approx(-0.1));
}

TEST_CASE("expression argument validation") {
  CHECK_THROWS_AS(ScalarExpr::coord(5), std::invalid_argument);
  CHECK_THROWS_AS(ScalarExpr::radial_poly({}), std::invalid_argument);
  CHECK_THROWS_AS(ScalarExpr::min_of({}), std::invalid_argument);
}

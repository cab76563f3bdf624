#include <doctest.h>

#include "gradex/domain.hpp"
#include "gradex/presets.hpp"

using namespace gradex;

TEST_CASE("rectangle domain builds with four arcs") {
  Domain d = Domain::rectangle({0, 0}, {1, 1});
  CHECK(d.arcs().size() == 4);
  CHECK(d.slits().empty());
  CHECK(d.strictly_inside({0.5, 0.5}));
  CHECK(!d.strictly_inside({0.0, 0.5}));
  CHECK(d.on_boundary({0.0, 0.5}));
  CHECK(d.in_closure({0.0, 0.5}));
  CHECK(!d.in_closure({-0.1, 0.5}));
  CHECK_THROWS_AS(Domain::rectangle({1, 1}, {0, 0}), GeometryError);
}

TEST_CASE("slit disk: circle plus two slit-side arcs") {
  Domain d = presets::slit_disk();
  CHECK(d.arcs().size() == 3);  // circle + 2 slit sides
  int sides = 0;
  for (const BoundaryArc& a : d.arcs())
    if (a.slit_index == 0) ++sides;
  CHECK(sides == 2);
  // slit points are boundary-like, endpoints are not
  CHECK(d.on_open_slit({0.0, 0.5}) == 0);
  CHECK(d.on_open_slit({0.0, 0.0}) == -1);  // slit tip belongs to the domain
  CHECK(d.on_open_slit({0.0, 1.0}) == -1);
  CHECK(d.strictly_inside({0.0, 0.0}));
  CHECK(!d.strictly_inside({0.0, 0.5}));
  CHECK(d.strictly_inside({0.0, -0.5}));
}

TEST_CASE("invalid polygons and slits are rejected") {
  // self-intersecting bow-tie
  CHECK_THROWS_AS(Domain::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
  CHECK_THROWS_AS(Domain::polygon({{0, 0}, {1, 0}}), GeometryError);
  // slit outside the base domain
  CHECK_THROWS_AS(Domain::rectangle({0, 0}, {1, 1}, {Slit{{2, 2}, {3, 3}}}), GeometryError);
  CHECK_THROWS_AS(Domain::disk({0, 0}, 1.0, {Slit{{0, 0}, {0, 0}}}), GeometryError);
}

TEST_CASE("polygon containment") {
  Domain d = Domain::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});  // L-shape
  CHECK(d.strictly_inside({0.5, 0.5}));
  CHECK(d.strictly_inside({1.5, 0.5}));
  CHECK(!d.in_closure({1.5, 1.5}));  // inside the notch
  CHECK(d.on_boundary({1.0, 1.5}));
  // segment across the notch leaves the closure
  CHECK(!d.segment_admissible({0.5, 1.5}, {1.5, 0.9}));
  CHECK(d.segment_admissible({0.5, 0.5}, {1.5, 0.5}));
}

TEST_CASE("segments may not cross open slits") {
  Domain d = presets::slit_disk();
  CHECK(!d.segment_admissible({-0.1, 0.5}, {0.1, 0.5}));   // transversal crossing
  CHECK(!d.segment_admissible({-0.1, 0.2}, {0.1, 0.9}));   // oblique crossing
  CHECK(d.segment_admissible({-0.1, -0.5}, {0.1, -0.5}));  // below the slit
  CHECK(d.segment_admissible({0.5, 0.5}, {0.1, 0.1}));     // same side
  // touching the slit tip only is fine (the tip belongs to the domain)
  CHECK(d.segment_admissible({0.1, -0.1}, {0.0, 0.0}));
  CHECK(d.segment_admissible({0.1, 0.1}, {0.0, 0.0}));
  // running along the slit hugs one side
  CHECK(d.segment_admissible({0.0, 0.2}, {0.0, 0.4}));
}

TEST_CASE("first boundary hit resolves arc and slit side") {
  Domain d = presets::slit_disk();
  // exit through the circle
  auto hit = d.first_boundary_hit({0.5, 0.0}, {1.5, 0.0});
  REQUIRE(hit.has_value());
  CHECK(d.arcs()[hit->arc].kind == BoundaryArc::Kind::Circle);
  CHECK(hit->t == doctest::Approx(0.5));
  // crossing the slit from the right resolves to the right-side arc
  auto hs = d.first_boundary_hit({0.25, 0.5}, {-0.25, 0.5});
  REQUIRE(hs.has_value());
  CHECK(d.arcs()[hs->arc].slit_index == 0);
  const Slit& s = d.slits()[0];
  CHECK(d.arcs()[hs->arc].side == (s.signed_side({0.25, 0.5}) > 0 ? 1 : -1));
  CHECK(hs->s == doctest::Approx(0.5));
  // from the left the mirror arc is hit
  auto hs2 = d.first_boundary_hit({-0.25, 0.5}, {0.25, 0.5});
  REQUIRE(hs2.has_value());
  CHECK(d.arcs()[hs2->arc].slit_index == 0);
  CHECK(d.arcs()[hs2->arc].side != d.arcs()[hs->arc].side);
}

TEST_CASE("distance to boundary") {
  Domain sq = Domain::rectangle({0, 0}, {1, 1});
  CHECK(sq.distance_to_boundary({0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(sq.distance_to_boundary({0.1, 0.5}) == doctest::Approx(0.1));
  Domain d = presets::slit_disk();
  // circle is closer than the slit from (0.5, 0.5)
  CHECK(d.distance_to_boundary({0.5, 0.5}) == doctest::Approx(1.0 - std::sqrt(0.5)));
  CHECK(d.distance_to_boundary({0.1, 0.5}) == doctest::Approx(0.1));  // slit is closer
  CHECK(d.distance_to_boundary({0.0, -0.5}) == doctest::Approx(0.5));
}

TEST_CASE("boundary arc parameterization") {
  Domain d = Domain::disk({0, 0}, 2.0);
  const BoundaryArc& c = d.arcs()[0];
  Vec p = c.point_at(M_PI);  // quarter-way round at radius 2
  CHECK(p.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(2.0));
  CHECK(c.param_of(p) == doctest::Approx(M_PI));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "gradex/geodesic.hpp"
#include "gradex/presets.hpp"
#include "gradex/tolerances.hpp"

using namespace gradex;

namespace {

std::shared_ptr<const MeshGraph> square_graph(double h = 1.0 / 32, int stencil = 16) {
  return discretize(presets::unit_square(), presets::unit_ball_field(), h, stencil);
}

}  // namespace

TEST_CASE("quasi distance on the unit square") {
  auto g = square_graph();
  int a = g->nearest_interior_node({0.25, 0.5});
  int b = g->nearest_interior_node({0.75, 0.5});
  auto r = quasi_dist(g, a, b);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));  // axis-aligned: exact
  CHECK(r.path.finsler_length() == doctest::Approx(r.value).epsilon(1e-12));
  CHECK(quasi_dist(g, a, a).value == 0.0);
}

TEST_CASE("slit disk reproduces the boundary triangle-inequality failure") {
  auto g = discretize(presets::slit_disk(), presets::unit_ball_field(), 1.0 / 64, 16);
  int x = g->nearest_interior_node({0.5, 0.5});
  int y = g->nearest_interior_node({-0.5, 0.5});
  auto direct = quasi_dist(g, x, y);
  CHECK(direct.value == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
  // interpolating through the duplicated slit node undercuts the distance
  auto zs = g->nearest_nodes({0.0, 0.5});
  REQUIRE(zs.size() == 2);
  double dxz = kInf, dzy = kInf;
  for (int z : zs) {
    dxz = std::min(dxz, quasi_dist(g, x, z).value);
    dzy = std::min(dzy, quasi_dist(g, z, y).value);
  }
  CHECK(dxz + dzy == doctest::Approx(1.0).epsilon(0.02));
  CHECK(dxz + dzy < direct.value);
  // interior interpolation keeps the triangle inequality (up to tolerance)
  int tip = g->nearest_interior_node({0.0, 0.0});
  double via_tip = quasi_dist(g, x, tip).value + quasi_dist(g, tip, y).value;
  CHECK(direct.value <= via_tip + 2 * mesh_tolerance(g->spacing(), g->stencil()));
}

TEST_CASE("anisotropic distance across the square") {
  auto g = discretize(presets::unit_square(), presets::ellipse_field(), 1.0 / 32, 16);
  int a = g->nearest_interior_node({0.1, 0.5});
  int b = g->nearest_interior_node({0.9, 0.5});
  // constant metric, straight segment: d = support(e1) * 0.8 = 1.6
  CHECK(quasi_dist(g, a, b).value == doctest::Approx(1.6).epsilon(0.02));
}

TEST_CASE("unreachable nodes give an infinite distance") {
  std::vector<MeshNode> nodes(3);
  nodes[0].pos = {0, 0};
  nodes[1].pos = {1, 0};
  nodes[2].pos = {2, 0};
  std::vector<std::vector<MeshEdge>> out(3);
  out[0].push_back({1, 1.0, 1.0});
  auto g = MeshGraph::from_parts(nodes, out);
  CHECK(quasi_dist(g, 0, 1).value == doctest::Approx(1.0));
  CHECK(quasi_dist(g, 0, 2).value == kInf);
  CHECK(quasi_dist(g, 0, 2).path.empty());
  CHECK(quasi_dist(g, 1, 0).value == kInf);  // directed edge only
}

TEST_CASE("finsler length of explicit paths") {
  ConvexField ball = presets::unit_ball_field();
  ConvexField ellipse = presets::ellipse_field();
  PathPolyline p;
  p.points = {{0, 0}, {1, 0}};
  CHECK(finsler_length(ball, p) == doctest::Approx(1.0));
  CHECK(finsler_length(ellipse, p) == doctest::Approx(2.0));
  // subdivision invariance for constant fields
  PathPolyline p2;
  p2.points = {{0, 0}, {0.5, 0}, {1, 0}};
  CHECK(finsler_length(ball, p2) == doctest::Approx(finsler_length(ball, p)).epsilon(1e-14));
  CHECK(finsler_length(ellipse, p2) == doctest::Approx(2.0).epsilon(1e-14));
  // domain-aware evaluation rejects exiting segments
  Domain sq = presets::unit_square();
  PathPolyline bad;
  bad.points = {{0.5, 0.5}, {1.5, 0.5}};
  CHECK_THROWS_AS(finsler_length(ball, bad, &sq), GeometryError);
}

TEST_CASE("sweep computes distance-to-boundary and shifted cones") {
  auto g = square_graph(1.0 / 16);
  std::vector<std::pair<int, double>> sources;
  for (int b : g->boundary_nodes()) sources.push_back({b, 0.0});
  SweepResult r = sweep(g, sources, SweepDirection::FromSources);
  // compare against the analytic distance to the square boundary
  for (int i = 0; i < g->size(); ++i) {
    const Vec p = g->node(i).pos;
    double exact = std::min({p.x, 1 - p.x, p.y, 1 - p.y});
    CHECK(r.values[i] == doctest::Approx(exact).epsilon(0.08));
  }
  // single source with constant offset is just a shifted distance field
  int c = g->nearest_interior_node({0.5, 0.5});
  SweepResult s1 = sweep(g, {{c, 5.0}}, SweepDirection::FromSources);
  SweepResult s0 = sweep(g, {{c, 0.0}}, SweepDirection::FromSources);
  for (int i = 0; i < g->size(); ++i)
    if (std::isfinite(s0.values[i]))
      CHECK(s1.values[i] == doctest::Approx(5.0 + s0.values[i]).epsilon(1e-12));
}

TEST_CASE("reverse sweep uses the edge-reversed graph") {
  // asymmetric field: shifted 32-gon; d(x,y) != d(y,x)
  std::vector<Vec> verts;
  for (int i = 0; i < 32; ++i) verts.push_back(unit_angle(2 * M_PI * i / 32) + Vec{0.4, 0});
  ConvexField f = ConvexField::constant(ConvexSetInstance::polytope(verts));
  auto g = discretize(presets::unit_square(), f, 1.0 / 16, 16);
  int a = g->nearest_interior_node({0.2, 0.5});
  int b = g->nearest_interior_node({0.8, 0.5});
  double dab = quasi_dist(g, a, b).value;
  double dba = quasi_dist(g, b, a).value;
  CHECK(dab != doctest::Approx(dba).epsilon(0.05));
  // ToSources sweep from {b} must reproduce the forward distances into b
  SweepResult rev = sweep(g, {{b, 0.0}}, SweepDirection::ToSources);
  CHECK(rev.values[a] == doctest::Approx(dab).epsilon(1e-12));
  // symmetric fields are symmetric to round-off
  auto gs = square_graph(1.0 / 16);
  int sa = gs->nearest_interior_node({0.2, 0.5});
  int sb = gs->nearest_interior_node({0.7, 0.3});
  CHECK(quasi_dist(gs, sa, sb).value ==
        doctest::Approx(quasi_dist(gs, sb, sa).value).epsilon(1e-12));
}

TEST_CASE("interior triangle inequality holds on random triples") {
  auto g = square_graph(1.0 / 16);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(0.1, 0.9);
  double tol = 2 * mesh_tolerance(g->spacing(), g->stencil());
  for (int it = 0; it < 30; ++it) {
    int x = g->nearest_interior_node({U(rng), U(rng)});
    int y = g->nearest_interior_node({U(rng), U(rng)});
    int z = g->nearest_interior_node({U(rng), U(rng)});
    CHECK(quasi_dist(g, x, y).value <=
          quasi_dist(g, x, z).value + quasi_dist(g, z, y).value + tol);
  }
}

TEST_CASE("bilipschitz bounds against the euclidean path distance") {
  auto g = discretize(presets::unit_square(), presets::ellipse_field(), 1.0 / 16, 16);
  const ConvexField& f = g->field();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int it = 0; it < 100; ++it) {
    int x = g->nearest_interior_node({U(rng), U(rng)});
    int y = g->nearest_interior_node({U(rng), U(rng)});
    if (x == y) continue;
    double d = quasi_dist(g, x, y).value;
    double e = euclidean_path_distance(*g, x, y);
    CHECK(d >= f.alpha() * e - 1e-12);
    CHECK(d <= f.bound_M() * e + 1e-12);
  }
}

TEST_CASE("geodesics are locally optimal in the graph") {
  auto g = discretize(presets::unit_square(), presets::ellipse_field(), 1.0 / 16, 16);
  int a = g->nearest_interior_node({0.15, 0.2});
  int b = g->nearest_interior_node({0.8, 0.75});
  auto r = quasi_dist(g, a, b);
  CHECK(r.path.finsler_length() == doctest::Approx(r.value).epsilon(1e-12));
  // recover the node chain by matching positions
  std::vector<int> chain;
  for (const Vec& p : r.path.points) {
    auto ids = g->nearest_nodes(p);
    REQUIRE(!ids.empty());
    chain.push_back(ids.front());
  }
  // no single-vertex replacement strictly improves the length
  for (size_t k = 1; k + 1 < chain.size(); ++k) {
    int prev = chain[k - 1], next = chain[k + 1];
    for (const MeshEdge& e1 : g->out_edges(prev)) {
      for (const MeshEdge& e2 : g->out_edges(e1.to)) {
        if (e2.to != next) continue;
        double orig = 0, alt = e1.w + e2.w;
        for (const MeshEdge& eo : g->out_edges(prev))
          if (eo.to == chain[k]) {
            for (const MeshEdge& eo2 : g->out_edges(chain[k]))
              if (eo2.to == next) orig = eo.w + eo2.w;
          }
        if (orig > 0) CHECK(alt >= orig - 1e-12);
      }
    }
  }
}

TEST_CASE("distance duality with feasible witness fields") {
  // d(x, y) = sup { u(y) - u(x) } over fields with per-edge slope <= 1;
  // witnesses u = d(z, .) are feasible and attain the sup at z = x
  for (const ConvexField& f : {presets::unit_ball_field(), presets::ellipse_field()}) {
    auto g = discretize(presets::unit_square(), f, 1.0 / 16, 16);
    int x = g->nearest_interior_node({0.25, 0.3});
    int y = g->nearest_interior_node({0.7, 0.6});
    double d = quasi_dist(g, x, y).value;
    double best = -kInf;
    for (Vec zp : {Vec{0.25, 0.3}, Vec{0.5, 0.5}, Vec{0.7, 0.6}, Vec{0.2, 0.8}}) {
      int z = g->nearest_interior_node(zp);
      SweepResult u = sweep(g, {{z, 0.0}}, SweepDirection::FromSources);
      // feasibility: per-edge increments never exceed the weight
      for (int n = 0; n < g->size(); ++n)
        for (const MeshEdge& e : g->out_edges(n))
          if (std::isfinite(u.values[n]) && std::isfinite(u.values[e.to]))
            CHECK(u.values[e.to] - u.values[n] <= e.w + 1e-12);
      best = std::max(best, u.values[y] - u.values[x]);
    }
    CHECK(best == doctest::Approx(d).epsilon(1e-12));
  }
}

TEST_CASE("refinement consistency of distances") {
  Vec a{0.2, 0.3}, b{0.8, 0.6};
  double prev = kInf;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    auto g = square_graph(h);
    double d = quasi_dist(g, g->nearest_interior_node(a), g->nearest_interior_node(b)).value;
    double exact = (b - a).norm();
    double err = std::abs(d - exact);
    CHECK(err <= mesh_tolerance(h, 16));
    if (std::isfinite(prev)) CHECK(err <= prev + 1e-9);
    prev = err;
    MESSAGE("h=", h, " distance error=", err);
  }
}

TEST_CASE("path shortcutting straightens staircases without changing length much") {
  auto g = square_graph(1.0 / 16);
  int a = g->nearest_interior_node({0.2, 0.2});
  int b = g->nearest_interior_node({0.8, 0.5});
  auto r = quasi_dist(g, a, b);
  PathPolyline cut = shortcut_path(*g, r.path);
  CHECK(cut.points.size() <= r.path.points.size());
  CHECK(cut.finsler_length() <= r.path.finsler_length() + 1e-12);
  CHECK(cut.points.front() == r.path.points.front());
  CHECK(cut.points.back() == r.path.points.back());
}

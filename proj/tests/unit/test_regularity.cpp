#include <doctest.h>

#include <cmath>

#include "gradex/presets.hpp"
#include "gradex/regularity.hpp"

using namespace gradex;

namespace {

std::shared_ptr<const MeshGraph> square_graph(double h = 1.0 / 32) {
  return discretize(presets::unit_square(), presets::unit_ball_field(), h, 16);
}

const std::vector<std::pair<int, int>> kOffsets{{1, 0}, {0, 1}, {1, 1}, {2, 1}};

}  // namespace

TEST_CASE("affine fields have zero second differences") {
  auto g = square_graph();
  auto region = nodes_in_box(*g, {0.2, 0.2}, {0.8, 0.8});
  ScalarField u = field_from_expression(g, ScalarExpr::affine({0.7, -0.3}, 1.1));
  auto rep = second_difference_constants(u, region, kOffsets);
  CHECK(rep.c1 <= 1e-10);
  CHECK(rep.c2 <= 1e-10);
  CHECK(rep.probes > 0);
}

TEST_CASE("concave quadratic: c1 clipped at zero, c2 = 2 exactly") {
  // u = -|x - c|^2 has second differences exactly -2|h|^2
  auto g = square_graph();
  auto region = nodes_in_box(*g, {0.25, 0.25}, {0.75, 0.75});
  ScalarExpr quad = ScalarExpr::poly(
      ScalarExpr::sum_of({ScalarExpr::poly(ScalarExpr::coord(0), {0.25, -1.0, 1.0}),
                          ScalarExpr::poly(ScalarExpr::coord(1), {0.25, -1.0, 1.0})}),
      {0.0, -1.0});
  ScalarField u = field_from_expression(g, quad);
  auto rep = second_difference_constants(u, region, kOffsets);
  CHECK(rep.c1 <= 1e-9);
  CHECK(rep.c2 == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("probes exiting the grid are skipped and counted") {
  auto g = square_graph(1.0 / 8);
  // region hugging the boundary: offset (2,1) exits for near-boundary nodes
  auto region = nodes_in_box(*g, {0.0, 0.0}, {1.0, 1.0});
  ScalarField u = field_from_expression(g, ScalarExpr::constant(0.0));
  auto rep = second_difference_constants(u, region, {{2, 1}});
  CHECK(rep.skipped > 0);
  CHECK(rep.probes + rep.skipped == static_cast<int>(region.size()));
}

TEST_CASE("offset symmetry: probes are invariant under negation") {
  auto g = square_graph(1.0 / 16);
  auto region = nodes_in_box(*g, {0.3, 0.3}, {0.7, 0.7});
  ScalarField u = field_from_expression(
      g, ScalarExpr::poly(ScalarExpr::coord(0), {0.0, 0.2, 0.9}));
  auto a = second_difference_constants(u, region, {{1, 1}});
  auto b = second_difference_constants(u, region, {{-1, -1}});
  CHECK(a.c1 == doctest::Approx(b.c1).epsilon(1e-14));
  CHECK(a.c2 == doctest::Approx(b.c2).epsilon(1e-14));
}

TEST_CASE("the boundary-distance cone is not semiconvex across the ridge") {
  // S+ for the zero datum is the distance cone; its ridge makes the
  // semiconvexity estimate blow up under refinement while semiconcavity
  // stays bounded
  double prev_c2 = 0.0;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    auto g = square_graph(h);
    ExtensionProblem p(g, ScalarExpr::constant(0.0));
    ScalarField sp = maximal_extension(p);
    auto region = nodes_in_box(*g, {0.3, 0.3}, {0.7, 0.7});  // crosses the ridge
    auto rep = second_difference_constants(sp, region, kOffsets);
    CHECK(rep.c1 <= 1.0);  // distance cone is semiconcave-ish on this region
    if (prev_c2 > 0) CHECK(rep.c2 >= 1.5 * prev_c2);
    prev_c2 = rep.c2;
  }
  CHECK(prev_c2 > 10.0);
}

TEST_CASE("gradients on the uniqueness set of the linear scenario") {
  auto g = square_graph();
  ExtensionProblem p(g, presets::linear_datum());
  SweepResult sp = maximal_extension_sweep(p);
  SweepResult sm = minimal_extension_sweep(p, true);
  UniquenessMask mask = uniqueness_set(sp.values, sm.values);
  auto region = nodes_in_box(*g, {0.2, 0.2}, {0.8, 0.8});
  GradientReport rep =
      gradient_on_uniqueness(sp.values, mask, &sp.values, &sm.values, &region);
  REQUIRE(rep.evaluated > 0);
  Vec e = presets::linear_direction();
  for (auto& [id, grad] : rep.gradients)
    CHECK((grad - e).norm() <= 0.01);
  CHECK(rep.max_jump <= 0.12 * g->spacing());
  CHECK(rep.max_dev_splus == 0.0);  // compared against itself
  CHECK(rep.max_dev_sminus <= 0.01);
}

TEST_CASE("gradient report rejects an empty mask") {
  auto g = square_graph(1.0 / 8);
  ScalarField u = field_from_expression(g, ScalarExpr::constant(0.0));
  UniquenessMask empty;
  empty.marked.assign(g->size(), 0);
  CHECK_THROWS_AS(gradient_on_uniqueness(u, empty), std::invalid_argument);
}

TEST_CASE("one-sided slopes bracket the central difference on the mask") {
  auto g = square_graph(1.0 / 16);
  ExtensionProblem p(g, presets::linear_datum());
  SweepResult sp = maximal_extension_sweep(p);
  SweepResult sm = minimal_extension_sweep(p, true);
  UniquenessMask mask = uniqueness_set(sp.values, sm.values);
  const double h = g->spacing();
  for (int i = 0; i < g->size(); ++i) {
    if (!mask[i] || g->node(i).role != NodeRole::Interior) continue;
    const MeshNode& n = g->node(i);
    int xp = g->lattice_node(n.ix + 1, n.iy), xm = g->lattice_node(n.ix - 1, n.iy);
    if (xp < 0 || xm < 0) continue;
    double fwd = (sp.values[xp] - sp.values[i]) / h;
    double bwd = (sp.values[i] - sp.values[xm]) / h;
    double central = (sp.values[xp] - sp.values[xm]) / (2 * h);
    CHECK(central >= std::min(fwd, bwd) - 1e-12);
    CHECK(central <= std::max(fwd, bwd) + 1e-12);
  }
}

TEST_CASE("cone-datum gradients have unit norm along the tight diagonal") {
  auto g = square_graph(1.0 / 16);
  ExtensionProblem p(g, ScalarExpr::norm());
  SweepResult sp = maximal_extension_sweep(p);
  SweepResult sm = minimal_extension_sweep(p, true);
  UniquenessMask mask = uniqueness_set(sp.values, sm.values);
  GradientReport rep = gradient_on_uniqueness(sp.values, mask);
  REQUIRE(rep.evaluated > 0);
  for (auto& [id, grad] : rep.gradients) {
    if (g->domain().distance_to_boundary(g->node(id).pos) < 2 * g->spacing()) continue;
    CHECK(grad.norm() == doctest::Approx(1.0).epsilon(0.08));
  }
}

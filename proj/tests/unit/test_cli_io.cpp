#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gradex/csv.hpp"
#include "gradex/presets.hpp"
#include "gradex/runner.hpp"

using namespace gradex;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path temp_dir(const char* name) {
  fs::path dir = fs::temp_directory_path() / "gradex_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("number formatting is stable at 12 significant digits") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1e-8) == "1e-08");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
}

TEST_CASE("expression JSON round-trips") {
  std::vector<ScalarExpr> exprs = {
      ScalarExpr::constant(2.5),
      ScalarExpr::dot({0.6, 0.8}),
      ScalarExpr::affine({1, -1}, 0.25),
      ScalarExpr::radial_poly({1.0, 1.0}),
      ScalarExpr::poly(ScalarExpr::coord(1), {0, 0, 1}),
      ScalarExpr::min_of({ScalarExpr::norm(), ScalarExpr::constant(0.8)}),
      presets::square_boundary_distance(),
  };
  for (const ScalarExpr& e : exprs) {
    json j = expr_to_json(e);
    ScalarExpr back = expr_from_json(j);
    CHECK(expr_to_json(back).dump() == j.dump());
    for (Vec x : {Vec{0.3, 0.4}, Vec{0.9, 0.1}, Vec{0.5, 0.5}})
      CHECK(back.eval(x) == doctest::Approx(e.eval(x)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(expr_from_json(json{{"expr", "sqrt"}}), ConfigError);
  CHECK_THROWS_AS(expr_from_json(json{{"expr", "dot"}}), ConfigError);
}

TEST_CASE("domain, field, and supremand JSON round-trips") {
  json dj = json::parse(R"({"kind":"disk","center":[0,0],"radius":1,
                            "slits":[{"a":[0,0],"b":[0,1]}]})");
  Domain d = domain_from_json(dj);
  CHECK(domain_to_json(domain_from_json(domain_to_json(d))).dump() ==
        domain_to_json(d).dump());

  json fj = json::parse(R"({"kind":"ellipsoid","shape":[[4,0],[0,1]]})");
  ConvexField f = field_from_json(fj);
  CHECK(support_eval(f, {0, 0}, {1, 1}) == doctest::Approx(std::sqrt(5.0)));
  CHECK(field_to_json(field_from_json(field_to_json(f))).dump() ==
        field_to_json(f).dump());

  json sj = json::parse(R"({"H":"scaled_norm",
                            "f":{"expr":"radial_poly","coeffs":[1,1]},
                            "f_min":1,"f_max":3})");
  auto h = supremand_from_json(sj);
  CHECK(h->one_homogeneous());
  CHECK(h->eval({0.5, 0.5}, {3, 0}) == doctest::Approx(2.0));
  CHECK(supremand_to_json(*h).dump() ==
        supremand_to_json(*supremand_from_json(supremand_to_json(*h))).dump());

  // declared bounds must hold
  json bad = json::parse(R"({"kind":"ball","radius":1,"alpha":2.0,"M":3.0})");
  CHECK_THROWS_AS(field_from_json(bad), ConfigError);
}

TEST_CASE("scenario JSON round-trips and validates") {
  json j = json::parse(R"({
    "domain": {"kind":"rectangle","lo":[0,0],"hi":[1,1]},
    "field": {"kind":"ball","radius":1},
    "datum": {"expr":"dot","vector":[0.894427191,0.4472135955]},
    "mesh": {"h":0.0625,"stencil":16},
    "pairs": [{"from":[0.25,0.5],"to":[0.75,0.5]}],
    "x0": [0.5,0.5]
  })");
  ScenarioConfig c = parse_scenario(j);
  CHECK(c.mesh.h == 0.0625);
  CHECK(c.pairs.size() == 1);
  json out = scenario_to_json(c);
  ScenarioConfig c2 = parse_scenario(out);
  CHECK(scenario_to_json(c2).dump() == out.dump());

  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"mesh":{"h":0.1}})")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(json::parse(
                      R"({"domain":{"kind":"rectangle","lo":[0,0],"hi":[1,1]}})")),
                  ConfigError);
  json neg = j;
  neg["mesh"]["h"] = -1.0;
  CHECK_THROWS_AS(parse_scenario(neg), ConfigError);
}

TEST_CASE("field export is deterministic and readable") {
  auto g = discretize(presets::unit_square(), presets::unit_ball_field(), 0.25, 8);
  ScalarField u = field_from_expression(g, ScalarExpr::coord(0));
  fs::path dir = temp_dir("csv");
  export_scalar_field(u, dir / "a.csv");
  export_scalar_field(u, dir / "b.csv");
  std::string a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));  // byte-identical
  CHECK(a.substr(0, 17) == "node,x,y,value\n0,");
  // row count = header + one per node
  CHECK(std::count(a.begin(), a.end(), '\n') == g->size() + 1);

  ScalarField back = read_scalar_field(g, dir / "a.csv");
  for (int i = 0; i < g->size(); ++i)
    CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("path export has monotone arclength") {
  auto g = discretize(presets::unit_square(), presets::unit_ball_field(), 1.0 / 8, 16);
  auto r = quasi_dist(g, g->nearest_interior_node({0.125, 0.25}),
                      g->nearest_interior_node({0.875, 0.75}));
  fs::path dir = temp_dir("path");
  export_path(r.path, dir / "p.csv");
  std::ifstream in(dir / "p.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "s_euclid,s_finsler,x,y");
  double prev = -1.0;
  while (std::getline(in, line)) {
    double s = std::stod(line.substr(0, line.find(',')));
    CHECK(s > prev);
    prev = s;
  }
  CHECK(prev == doctest::Approx(r.path.euclid_length()));
}

TEST_CASE("distance pipeline writes artifacts and the triangle exhibit") {
  ScenarioConfig c;
  c.domain = presets::slit_disk();
  c.field = presets::unit_ball_field();
  c.mesh = {1.0 / 32, 16};
  c.pairs = {{{0.5, 0.5}, {-0.5, 0.5}}};
  c.triangle = {{Vec{0.5, 0.5}, Vec{-0.5, 0.5}, Vec{0.0, 0.5}}};
  fs::path dir = temp_dir("distance");
  RunOptions opt;
  opt.out_dir = dir;
  RunOutcome out = run_scenario(c, "distance", opt);
  CHECK(out.ok);
  CHECK(fs::exists(dir / "distances.csv"));
  CHECK(fs::exists(dir / "path_0.csv"));
  CHECK(fs::exists(dir / "report.txt"));
  CHECK(fs::exists(dir / "nodes.csv"));
  CHECK(fs::exists(dir / "edges.csv"));
  CHECK(fs::exists(dir / "config.json"));
  CHECK(out.report.find("triangle exhibit") != std::string::npos);
  // determinism: the second run produces identical artifacts
  std::string first = slurp(dir / "distances.csv");
  run_scenario(c, "distance", opt);
  CHECK(slurp(dir / "distances.csv") == first);
}

TEST_CASE("extend pipeline enforces admissibility and the override") {
  ScenarioConfig c;
  c.domain = presets::unit_square();
  c.field = presets::unit_ball_field();
  c.datum = ScalarExpr::dot({3, 0});
  c.mesh = {1.0 / 16, 16};
  fs::path dir = temp_dir("extend");
  RunOptions opt;
  opt.out_dir = dir;
  CHECK_THROWS_AS(run_scenario(c, "extend", opt), ModelError);
  opt.override_admissibility = true;
  RunOutcome out = run_scenario(c, "extend", opt);
  CHECK(!out.ok);  // admissibility check reports the failure
  CHECK(fs::exists(dir / "splus.csv"));
}

TEST_CASE("uniqueness pipeline emits mask and geodesic") {
  ScenarioConfig c;
  c.domain = presets::unit_square();
  c.field = presets::unit_ball_field();
  c.datum = presets::linear_datum();
  c.mesh = {1.0 / 16, 16};
  c.x0 = Vec{0.5, 0.5};
  fs::path dir = temp_dir("uniq");
  RunOptions opt;
  opt.out_dir = dir;
  RunOutcome out = run_scenario(c, "uniqueness", opt);
  CHECK(out.ok);
  CHECK(fs::exists(dir / "uniqueness_mask.csv"));
  CHECK(fs::exists(dir / "geodesic.csv"));
}

TEST_CASE("supremal pipeline recovers the slope and writes the history") {
  ScenarioConfig c;
  c.domain = presets::unit_square();
  c.supremand = std::make_shared<ScaledNormSupremand>(ScalarExpr::constant(1.0), 1.0, 1.0);
  c.datum = ScalarExpr::dot({0.7, 0.0});
  c.mesh = {1.0 / 16, 16};
  c.bracket = {1e-6, 10.0};
  fs::path dir = temp_dir("supremal");
  RunOptions opt;
  opt.out_dir = dir;
  RunOutcome out = run_scenario(c, "supremal", opt);
  CHECK(out.ok);
  std::string hist = slurp(dir / "mu_history.csv");
  CHECK(hist.substr(0, 20) == "nu,admissible,margin");
  auto pos = out.report.find("mu = ");
  REQUIRE(pos != std::string::npos);
  double mu = std::stod(out.report.substr(pos + 5));
  CHECK(mu == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("unknown commands and bad configs are config errors") {
  ScenarioConfig c;
  c.domain = presets::unit_square();
  c.field = presets::unit_ball_field();
  RunOptions opt;
  opt.out_dir = temp_dir("bad");
  CHECK_THROWS_AS(run_scenario(c, "frobnicate", opt), ConfigError);
  CHECK_THROWS_AS(run_scenario(c, "extend", opt), ConfigError);  // missing datum
}

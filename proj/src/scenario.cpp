#include "gradex/scenario.hpp"

#include <fstream>

namespace gradex {

namespace {

Vec vec_from_json(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3)
    throw ConfigError("expected a 2- or 3-element coordinate array");
  Vec v{j[0].get<double>(), j[1].get<double>()};
  if (j.size() == 3) v.z = j[2].get<double>();
  return v;
}

json vec_to_json(const Vec& v, bool three = false) {
  json j = json::array({v.x, v.y});
  if (three || v.z != 0.0) j.push_back(v.z);
  return j;
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string("missing key: ") + key);
  return *it;
}

}  // namespace

ScalarExpr expr_from_json(const json& j) {
  if (j.is_number()) return ScalarExpr::constant(j.get<double>());
  if (!j.is_object()) throw ConfigError("expression must be an object or a number");
  std::string kind = require(j, "expr").get<std::string>();
  try {
    if (kind == "const") return ScalarExpr::constant(require(j, "value").get<double>());
    if (kind == "coord") return ScalarExpr::coord(require(j, "index").get<int>());
    if (kind == "norm") return ScalarExpr::norm();
    if (kind == "norm2") return ScalarExpr::norm2();
    if (kind == "dot") return ScalarExpr::dot(vec_from_json(require(j, "vector")));
    if (kind == "affine")
      return ScalarExpr::affine(vec_from_json(require(j, "vector")),
                                require(j, "offset").get<double>());
    if (kind == "radial_poly")
      return ScalarExpr::radial_poly(require(j, "coeffs").get<std::vector<double>>());
    if (kind == "poly")
      return ScalarExpr::poly(expr_from_json(require(j, "base")),
                              require(j, "coeffs").get<std::vector<double>>());
    if (kind == "min" || kind == "max" || kind == "sum") {
      std::vector<ScalarExpr> args;
      for (const json& a : require(j, "args")) args.push_back(expr_from_json(a));
      if (kind == "min") return ScalarExpr::min_of(std::move(args));
      if (kind == "max") return ScalarExpr::max_of(std::move(args));
      return ScalarExpr::sum_of(std::move(args));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad expression: ") + e.what());
  }
  throw ConfigError("unknown expression kind: " + kind);
}

json expr_to_json(const ScalarExpr& e) {
  using K = ScalarExpr::Kind;
  const auto& n = e.node();
  json j;
  switch (n.kind) {
    case K::Const:
      return json{{"expr", "const"}, {"value", n.value}};
    case K::Coord:
      return json{{"expr", "coord"}, {"index", n.index}};
    case K::Norm:
      return json{{"expr", "norm"}};
    case K::Norm2:
      return json{{"expr", "norm2"}};
    case K::Dot:
      return json{{"expr", "dot"}, {"vector", vec_to_json(n.vec)}};
    case K::Affine:
      return json{{"expr", "affine"}, {"vector", vec_to_json(n.vec)}, {"offset", n.offset}};
    case K::RadialPoly:
      return json{{"expr", "radial_poly"}, {"coeffs", n.coeffs}};
    case K::Poly:
      return json{{"expr", "poly"},
                  {"base", expr_to_json(ScalarExpr::from_node(n.base))},
                  {"coeffs", n.coeffs}};
    case K::Min:
    case K::Max:
    case K::Sum: {
      json args = json::array();
      for (auto& a : n.args) args.push_back(expr_to_json(ScalarExpr::from_node(a)));
      const char* name = n.kind == K::Min ? "min" : (n.kind == K::Max ? "max" : "sum");
      return json{{"expr", name}, {"args", args}};
    }
  }
  throw std::logic_error("unreachable expression kind");
}

namespace {
std::vector<Slit> slits_from_json(const json& j) {
  std::vector<Slit> slits;
  if (auto it = j.find("slits"); it != j.end())
    for (const json& s : *it)
      slits.push_back({vec_from_json(require(s, "a")), vec_from_json(require(s, "b"))});
  return slits;
}
}  // namespace

Domain domain_from_json(const json& j) {
  std::string kind = require(j, "kind").get<std::string>();
  if (kind == "rectangle")
    return Domain::rectangle(vec_from_json(require(j, "lo")), vec_from_json(require(j, "hi")),
                             slits_from_json(j));
  if (kind == "box3")
    return Domain::box3(vec_from_json(require(j, "lo")), vec_from_json(require(j, "hi")));
  if (kind == "disk")
    return Domain::disk(vec_from_json(require(j, "center")),
                        require(j, "radius").get<double>(), slits_from_json(j));
  if (kind == "polygon") {
    std::vector<Vec> verts;
    for (const json& v : require(j, "vertices")) verts.push_back(vec_from_json(v));
    return Domain::polygon(std::move(verts), slits_from_json(j));
  }
  throw ConfigError("unknown domain kind: " + kind);
}

json domain_to_json(const Domain& d) {
  json j;
  switch (d.kind()) {
    case DomainKind::Rectangle:
      if (d.dim() == 3) {
        j = json{{"kind", "box3"}, {"lo", vec_to_json(d.bbox_lo(), true)},
                 {"hi", vec_to_json(d.bbox_hi(), true)}};
        return j;
      }
      j = json{{"kind", "rectangle"}, {"lo", vec_to_json(d.bbox_lo())},
               {"hi", vec_to_json(d.bbox_hi())}};
      break;
    case DomainKind::Disk: {
      Vec c = (d.bbox_lo() + d.bbox_hi()) * 0.5;
      j = json{{"kind", "disk"}, {"center", vec_to_json(c)},
               {"radius", (d.bbox_hi().x - d.bbox_lo().x) * 0.5}};
      break;
    }
    case DomainKind::Polygon: {
      json verts = json::array();
      for (const BoundaryArc& arc : d.arcs())
        if (arc.slit_index < 0) verts.push_back(vec_to_json(arc.a));
      j = json{{"kind", "polygon"}, {"vertices", verts}};
      break;
    }
  }
  if (!d.slits().empty()) {
    json slits = json::array();
    for (const Slit& s : d.slits())
      slits.push_back(json{{"a", vec_to_json(s.a)}, {"b", vec_to_json(s.b)}});
    j["slits"] = slits;
  }
  return j;
}

namespace {

Mat3 shape_from_json(const json& j) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3))
    throw ConfigError("shape must be a 2x2 or 3x3 matrix");
  Mat3 m = Mat3::identity();
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != j.size())
      throw ConfigError("shape matrix rows are malformed");
    for (size_t c = 0; c < j.size(); ++c) m(static_cast<int>(r), static_cast<int>(c)) = j[r][c].get<double>();
  }
  return m;
}

json shape_to_json(const Mat3& m, int dim) {
  json rows = json::array();
  for (int r = 0; r < dim; ++r) {
    json row = json::array();
    for (int c = 0; c < dim; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

ConvexSetInstance instance_from_json(const json& j) {
  std::string kind = require(j, "kind").get<std::string>();
  if (kind == "ball") {
    int dim = j.value("dim", 2);
    return ConvexSetInstance::ball(require(j, "radius").get<double>(), dim);
  }
  if (kind == "ellipsoid") {
    const json& sj = require(j, "shape");
    return ConvexSetInstance::ellipsoid(shape_from_json(sj), sj.size() == 3 ? 3 : 2);
  }
  if (kind == "polytope") {
    std::vector<Vec> verts;
    for (const json& v : require(j, "vertices")) verts.push_back(vec_from_json(v));
    return ConvexSetInstance::polytope(std::move(verts));
  }
  throw ConfigError("unknown set kind: " + kind);
}

}  // namespace

ConvexField field_from_json(const json& j) {
  std::string kind = require(j, "kind").get<std::string>();
  ConvexField f = [&] {
    if (kind == "levelset")
      return ConvexField::level_set(supremand_from_json(require(j, "supremand")),
                                    require(j, "level").get<double>());
    ConvexSetInstance base = instance_from_json(j);
    if (auto it = j.find("scale"); it != j.end())
      return ConvexField::scaled(std::move(base), expr_from_json(*it),
                                 require(j, "scale_min").get<double>(),
                                 require(j, "scale_max").get<double>());
    return ConvexField::constant(std::move(base));
  }();
  // declared bounds, when present, must hold for the constructed field
  if (auto it = j.find("alpha"); it != j.end()) {
    double a = it->get<double>(), m = require(j, "M").get<double>();
    if (a > f.alpha() * (1 + 1e-9) || m < f.bound_M() * (1 - 1e-9))
      throw ConfigError("declared (alpha, M) bounds do not hold for this field");
  }
  return f;
}

json field_to_json(const ConvexField& f) {
  json j;
  if (f.is_level_set()) {
    j = json{{"kind", "levelset"}, {"supremand", supremand_to_json(*f.supremand())},
             {"level", f.level()}};
  } else {
    const ConvexSetInstance& b = f.base_instance();
    switch (b.kind()) {
      case SetKind::Ball:
        j = json{{"kind", "ball"}, {"radius", b.radius()}};
        if (b.dim() == 3) j["dim"] = 3;
        break;
      case SetKind::Ellipsoid:
        j = json{{"kind", "ellipsoid"}, {"shape", shape_to_json(b.shape(), b.dim())}};
        break;
      case SetKind::Polytope: {
        json verts = json::array();
        for (const Vec& v : b.vertices()) verts.push_back(vec_to_json(v));
        j = json{{"kind", "polytope"}, {"vertices", verts}};
        break;
      }
      case SetKind::LevelSet:
        throw std::logic_error("level-set instance outside a level-set field");
    }
    if (f.scale_expr()) {
      j["scale"] = expr_to_json(*f.scale_expr());
      j["scale_min"] = f.scale_min();
      j["scale_max"] = f.scale_max();
    }
  }
  j["alpha"] = f.alpha();
  j["M"] = f.bound_M();
  return j;
}

std::shared_ptr<const Supremand> supremand_from_json(const json& j) {
  std::string kind = require(j, "H").get<std::string>();
  try {
    if (kind == "scaled_norm")
      return std::make_shared<ScaledNormSupremand>(expr_from_json(require(j, "f")),
                                                   require(j, "f_min").get<double>(),
                                                   require(j, "f_max").get<double>());
    if (kind == "ellipsoid_gauge")
      return std::make_shared<EllipsoidGaugeSupremand>(shape_from_json(require(j, "shape")));
    if (kind == "polytope_gauge") {
      std::vector<Vec> verts;
      for (const json& v : require(j, "vertices")) verts.push_back(vec_from_json(v));
      return std::make_shared<PolytopeGaugeSupremand>(std::move(verts));
    }
    if (kind == "tabulated_gauge")
      return std::make_shared<TabulatedGaugeSupremand>(
          require(j, "angles").get<std::vector<double>>(),
          require(j, "radii").get<std::vector<double>>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad supremand: ") + e.what());
  }
  throw ConfigError("unknown supremand kind: " + kind);
}

json supremand_to_json(const Supremand& h) {
  if (auto* s = dynamic_cast<const ScaledNormSupremand*>(&h))
    return json{{"H", "scaled_norm"}, {"f", expr_to_json(s->f())},
                {"f_min", s->f_min()}, {"f_max", s->f_max()}};
  if (auto* s = dynamic_cast<const EllipsoidGaugeSupremand*>(&h))
    return json{{"H", "ellipsoid_gauge"}, {"shape", shape_to_json(s->shape(), 2)}};
  if (auto* s = dynamic_cast<const PolytopeGaugeSupremand*>(&h)) {
    json verts = json::array();
    for (const Vec& v : s->vertices()) verts.push_back(vec_to_json(v));
    return json{{"H", "polytope_gauge"}, {"vertices", verts}};
  }
  if (auto* s = dynamic_cast<const TabulatedGaugeSupremand*>(&h))
    return json{{"H", "tabulated_gauge"}, {"angles", s->angles()}, {"radii", s->radii()}};
  throw std::logic_error("supremand type outside the whitelist");
}

ConvexField ScenarioConfig::resolve_field() const {
  if (field) return *field;
  if (supremand) return level_set_field(supremand, level.value_or(1.0));
  throw ConfigError("scenario needs either a field or a supremand");
}

ScenarioConfig parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario config must be a JSON object");
  ScenarioConfig c;
  c.domain = domain_from_json(require(j, "domain"));
  if (auto it = j.find("field"); it != j.end()) c.field = field_from_json(*it);
  if (auto it = j.find("supremand"); it != j.end()) c.supremand = supremand_from_json(*it);
  if (auto it = j.find("level"); it != j.end()) c.level = it->get<double>();
  if (!c.field && !c.supremand)
    throw ConfigError("scenario needs a field or a supremand");
  if (auto it = j.find("datum"); it != j.end()) c.datum = expr_from_json(*it);
  if (auto it = j.find("mesh"); it != j.end()) {
    c.mesh.h = require(*it, "h").get<double>();
    c.mesh.stencil = require(*it, "stencil").get<int>();
    if (!(c.mesh.h > 0)) throw ConfigError("mesh spacing must be positive");
  }
  if (auto it = j.find("uniqueness_eps"); it != j.end()) {
    c.uniqueness_eps = it->get<double>();
    if (!(*c.uniqueness_eps > 0)) throw ConfigError("uniqueness_eps must be positive");
  }
  if (auto it = j.find("pairs"); it != j.end())
    for (const json& p : *it)
      c.pairs.push_back({vec_from_json(require(p, "from")), vec_from_json(require(p, "to"))});
  if (auto it = j.find("triangle"); it != j.end())
    c.triangle = {vec_from_json(require(*it, "x")), vec_from_json(require(*it, "y")),
                  vec_from_json(require(*it, "z"))};
  if (auto it = j.find("queries"); it != j.end())
    for (const json& q : *it)
      c.queries.push_back({vec_from_json(require(q, "x")), vec_from_json(require(q, "v"))});
  if (auto it = j.find("x0"); it != j.end()) c.x0 = vec_from_json(*it);
  if (auto it = j.find("bracket"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw ConfigError("bracket must be [lo, hi]");
    c.bracket = {(*it)[0].get<double>(), (*it)[1].get<double>()};
  }
  if (auto it = j.find("mu_tol"); it != j.end()) c.mu_tol = it->get<double>();
  if (!(c.mu_tol > 0)) throw ConfigError("mu_tol must be positive");
  if (auto it = j.find("attainment_eps"); it != j.end()) c.attainment_eps = it->get<double>();
  if (auto it = j.find("attainment_r"); it != j.end()) c.attainment_r = it->get<double>();
  if (auto it = j.find("tolerances"); it != j.end())
    for (auto& [k, v] : it->items()) c.tolerance_overrides[k] = v.get<double>();
  return c;
}

json scenario_to_json(const ScenarioConfig& c) {
  json j;
  j["domain"] = domain_to_json(c.domain);
  if (c.field) j["field"] = field_to_json(*c.field);
  if (c.supremand) j["supremand"] = supremand_to_json(*c.supremand);
  if (c.level) j["level"] = *c.level;
  if (c.datum) j["datum"] = expr_to_json(*c.datum);
  j["mesh"] = json{{"h", c.mesh.h}, {"stencil", c.mesh.stencil}};
  if (c.uniqueness_eps) j["uniqueness_eps"] = *c.uniqueness_eps;
  if (!c.pairs.empty()) {
    json ps = json::array();
    for (const auto& p : c.pairs)
      ps.push_back(json{{"from", vec_to_json(p.from)}, {"to", vec_to_json(p.to)}});
    j["pairs"] = ps;
  }
  if (c.triangle)
    j["triangle"] = json{{"x", vec_to_json((*c.triangle)[0])},
                         {"y", vec_to_json((*c.triangle)[1])},
                         {"z", vec_to_json((*c.triangle)[2])}};
  if (!c.queries.empty()) {
    json qs = json::array();
    for (const auto& q : c.queries)
      qs.push_back(json{{"x", vec_to_json(q.x)}, {"v", vec_to_json(q.v)}});
    j["queries"] = qs;
  }
  if (c.x0) j["x0"] = vec_to_json(*c.x0);
  j["bracket"] = json::array({c.bracket.first, c.bracket.second});
  j["mu_tol"] = c.mu_tol;
  if (c.attainment_eps) j["attainment_eps"] = *c.attainment_eps;
  if (c.attainment_r) j["attainment_r"] = *c.attainment_r;
  if (!c.tolerance_overrides.empty()) j["tolerances"] = c.tolerance_overrides;
  return j;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

}  // namespace gradex

#pragma once

#include <map>
#include <optional>

#include <json.hpp>

#include "gradex/supremal.hpp"

namespace gradex {

using json = nlohmann::json;

struct MeshParams {
  double h = 1.0 / 32;
  int stencil = 16;
};

struct DistancePair {
  Vec from, to;
};

struct SupportQuery {
  Vec x, v;
};

// Parsed scenario configuration. The JSON schema is documented in the README;
// every piece round-trips through to_json/parse.
struct ScenarioConfig {
  Domain domain = Domain::rectangle({0, 0}, {1, 1});
  std::optional<ConvexField> field;
  std::shared_ptr<const Supremand> supremand;
  std::optional<double> level;  // builds `field` from `supremand` when given
  std::optional<ScalarExpr> datum;
  MeshParams mesh;
  std::optional<double> uniqueness_eps;

  std::vector<DistancePair> pairs;
  std::optional<std::array<Vec, 3>> triangle;  // x, y, z exhibit
  std::vector<SupportQuery> queries;
  std::optional<Vec> x0;
  std::pair<double, double> bracket{1e-6, 10.0};
  double mu_tol = 1e-3;
  std::optional<double> attainment_eps;
  std::optional<double> attainment_r;
  std::map<std::string, double> tolerance_overrides;

  // the constraint field for pipelines: explicit field, or the supremand
  // sublevel at `level` (default 1)
  ConvexField resolve_field() const;
};

ScalarExpr expr_from_json(const json& j);
json expr_to_json(const ScalarExpr& e);

Domain domain_from_json(const json& j);
json domain_to_json(const Domain& d);

ConvexField field_from_json(const json& j);
json field_to_json(const ConvexField& f);

std::shared_ptr<const Supremand> supremand_from_json(const json& j);
json supremand_to_json(const Supremand& h);

ScenarioConfig parse_scenario(const json& j);
json scenario_to_json(const ScenarioConfig& c);

ScenarioConfig load_scenario_file(const std::string& path);

}  // namespace gradex

#include "gradex/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace gradex {

namespace {

void append(std::vector<CheckResult>& checks, const std::string& name, bool pass,
            double measured, double threshold, const std::string& detail = "") {
  checks.push_back({name, pass, measured, threshold, detail});
}

// check helper: measured <= threshold
void check_le(std::vector<CheckResult>& checks, const std::string& name, double measured,
              double threshold, const std::string& detail = "") {
  append(checks, name, measured <= threshold, measured, threshold, detail);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

std::string format_report(const std::vector<CheckResult>& checks) {
  std::ostringstream os;
  int failed = 0;
  for (const CheckResult& c : checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": measured " << format_number(c.measured)
       << " vs threshold " << format_number(c.threshold);
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << '\n';
    if (!c.pass) ++failed;
  }
  os << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return os.str();
}

double extended_distance(const std::shared_ptr<const MeshGraph>& graph, const Vec& from,
                         const Vec& to) {
  double best = kInf;
  for (int s : graph->nearest_nodes(from)) {
    auto dist = dijkstra(*graph, s);
    for (int t : graph->nearest_nodes(to)) best = std::min(best, dist[t]);
  }
  return best;
}

namespace {

RunOutcome run_support(const ScenarioConfig& config, const RunOptions& opt) {
  RunOutcome out;
  ConvexField field = config.resolve_field();
  std::vector<SupportQuery> queries = config.queries;
  if (queries.empty()) {
    // default probe set over the domain bounding box
    Vec lo = config.domain.bbox_lo(), hi = config.domain.bbox_hi();
    Vec c = (lo + hi) * 0.5;
    for (int k = 0; k < 16; ++k) queries.push_back({c, unit_angle(2 * M_PI * k / 16)});
  }
  std::ostringstream csv;
  csv << "x,y,vx,vy,gauge,support,argmax_x,argmax_y,bipolar\n";
  double worst_bipolar = 0.0, worst_argmax = 0.0;
  for (const SupportQuery& q : queries) {
    double g = gauge_eval(field, q.x, q.v);
    double s = support_eval(field, q.x, q.v);
    Vec am = support_argmax(field, q.x, q.v);
    double bp = bipolar_gauge(field, q.x, q.v);
    worst_bipolar = std::max(worst_bipolar, std::abs(bp - g) / (1 + g));
    ConvexSetInstance inst = field.at(q.x);
    worst_argmax = std::max({worst_argmax, std::abs(inst.gauge(am) - 1.0),
                             std::abs(am.dot(q.v) - s)});
    csv << format_number(q.x.x) << ',' << format_number(q.x.y) << ',' << format_number(q.v.x)
        << ',' << format_number(q.v.y) << ',' << format_number(g) << ',' << format_number(s)
        << ',' << format_number(am.x) << ',' << format_number(am.y) << ','
        << format_number(bp) << '\n';
  }
  write_text(opt.out_dir / "support.csv", csv.str());
  check_le(out.checks, "bipolar_duality", worst_bipolar, 1e-6);
  check_le(out.checks, "argmax_consistency", worst_argmax, 1e-8);
  return out;
}

RunOutcome run_distance(const ScenarioConfig& config, const RunOptions& opt) {
  RunOutcome out;
  auto graph = discretize(config.domain, config.resolve_field(), config.mesh.h,
                          config.mesh.stencil);
  std::ostringstream report, csv;
  csv << "pair,from_x,from_y,to_x,to_y,distance\n";
  int idx = 0;
  for (const DistancePair& p : config.pairs) {
    double d = extended_distance(graph, p.from, p.to);
    csv << idx << ',' << format_number(p.from.x) << ',' << format_number(p.from.y) << ','
        << format_number(p.to.x) << ',' << format_number(p.to.y) << ',' << format_number(d)
        << '\n';
    report << "d(" << format_number(p.from.x) << "," << format_number(p.from.y) << " -> "
           << format_number(p.to.x) << "," << format_number(p.to.y)
           << ") = " << format_number(d) << '\n';
    // path export for the first node representatives
    auto from_ids = graph->nearest_nodes(p.from);
    auto to_ids = graph->nearest_nodes(p.to);
    if (!from_ids.empty() && !to_ids.empty()) {
      DistanceResult best;
      for (int s : from_ids)
        for (int t : to_ids) {
          auto r = quasi_dist(graph, s, t);
          if (r.value < best.value) best = std::move(r);
        }
      if (std::isfinite(best.value))
        export_path(best.path, opt.out_dir / ("path_" + std::to_string(idx) + ".csv"));
    }
    ++idx;
  }
  if (config.triangle) {
    const auto& [x, y, z] = *config.triangle;
    double dxy = extended_distance(graph, x, y);
    double dxz = extended_distance(graph, x, z);
    double dzy = extended_distance(graph, z, y);
    report << "triangle exhibit: d(x,y) = " << format_number(dxy)
           << ", d(x,z) + d(z,y) = " << format_number(dxz + dzy) << '\n';
    append(out.checks, "triangle_inequality_failure", dxz + dzy < dxy, dxz + dzy, dxy,
           "interpolation through the boundary undercuts the direct distance");
  }
  write_text(opt.out_dir / "distances.csv", csv.str());
  out.report = report.str();
  export_graph_nodes(*graph, opt.out_dir / "nodes.csv");
  export_graph_edges(*graph, opt.out_dir / "edges.csv");
  return out;
}

struct ExtendArtifacts {
  std::shared_ptr<const MeshGraph> graph;
  ExtensionProblem problem;
  SweepResult splus, sminus;
  AdmissibilityReport adm;
};

ExtendArtifacts compute_extensions(const ScenarioConfig& config, const RunOptions& opt) {
  if (!config.datum) throw ConfigError("this command needs a boundary datum");
  auto graph = discretize(config.domain, config.resolve_field(), config.mesh.h,
                          config.mesh.stencil);
  ExtensionProblem problem(graph, *config.datum);
  AdmissibilityReport adm = admissibility_check(problem);
  if (!adm.ok && !opt.override_admissibility)
    throw ModelError("boundary datum inadmissible (margin " + format_number(adm.margin) +
                     "); rerun with --override-admissibility to study the failure");
  SweepResult sp = maximal_extension_sweep(problem, true);
  SweepResult sm = minimal_extension_sweep(problem, true);
  return {graph, std::move(problem), std::move(sp), std::move(sm), adm};
}

RunOutcome extend_outcome(const ExtendArtifacts& art, const RunOptions& opt) {
  RunOutcome out;
  export_scalar_field(art.splus.values, opt.out_dir / "splus.csv");
  export_scalar_field(art.sminus.values, opt.out_dir / "sminus.csv");
  append(out.checks, "admissibility", art.adm.ok, art.adm.margin,
         art.problem.tolerance(), art.adm.sampled ? "sampled boundary pairs" : "all pairs");
  double boundary_dev = 0.0, order_viol = 0.0;
  for (int b : art.problem.boundary()) {
    boundary_dev = std::max(boundary_dev,
                            std::abs(art.splus.values[b] - art.problem.datum_at(b)));
    boundary_dev = std::max(boundary_dev,
                            std::abs(art.sminus.values[b] - art.problem.datum_at(b)));
  }
  for (int i = 0; i < art.graph->size(); ++i)
    order_viol = std::max(order_viol, art.sminus.values[i] - art.splus.values[i]);
  check_le(out.checks, "boundary_agreement", boundary_dev, 1e-12);
  check_le(out.checks, "ordering", order_viol, art.problem.tolerance());
  std::ostringstream rep;
  rep << "admissibility margin: " << format_number(art.adm.margin) << '\n';
  out.report = rep.str();
  return out;
}

RunOutcome run_extend(const ScenarioConfig& config, const RunOptions& opt) {
  ExtendArtifacts art = compute_extensions(config, opt);
  return extend_outcome(art, opt);
}

RunOutcome run_uniqueness(const ScenarioConfig& config, const RunOptions& opt) {
  ExtendArtifacts art = compute_extensions(config, opt);
  RunOutcome out = extend_outcome(art, opt);
  UniquenessMask mask =
      uniqueness_set(art.splus.values, art.sminus.values, config.uniqueness_eps);
  export_mask(*art.graph, mask.marked, opt.out_dir / "uniqueness_mask.csv");
  std::ostringstream rep;
  rep << out.report;
  rep << "uniqueness eps: " << format_number(mask.eps)
      << ", interior coverage: " << format_number(mask.interior_fraction()) << '\n';
  if (config.x0) {
    int x0 = art.graph->nearest_interior_node(*config.x0);
    if (x0 >= 0 && mask[x0]) {
      CoincidenceReport cr =
          coincidence_geodesic(art.problem, art.splus, art.sminus, mask, x0);
      export_path(cr.curve, opt.out_dir / "geodesic.csv");
      append(out.checks, "coincidence_geodesic_length", cr.geodesic_ok,
             std::abs(cr.curve_length - cr.endpoint_distance), art.problem.tolerance());
      append(out.checks, "coincidence_gap", cr.gap_ok, cr.max_gap, mask.eps);
      append(out.checks, "coincidence_derivative", cr.derivative_ok, cr.max_derivative_dev,
             0.05);
      rep << "coincidence curve length " << format_number(cr.curve_length) << " vs d(y1,y2) "
          << format_number(cr.endpoint_distance) << '\n';
    } else {
      append(out.checks, "x0_in_uniqueness_set", false, 0, 0,
             "requested point is not in the uniqueness set");
    }
  }
  out.report = rep.str();
  return out;
}

RunOutcome run_supremal(const ScenarioConfig& config, const RunOptions& opt) {
  RunOutcome out;
  if (!config.supremand) throw ConfigError("supremal command needs a supremand");
  if (!config.datum) throw ConfigError("supremal command needs a boundary datum");
  SupremalProblem problem(config.domain, config.supremand, *config.datum, config.mesh.h,
                          config.mesh.stencil);
  MuResult mu = optimal_mu(problem, config.mu_tol, config.bracket.first,
                           config.bracket.second);
  std::ostringstream hist;
  hist << "nu,admissible,margin\n";
  for (const auto& s : mu.record.steps)
    hist << format_number(s.nu) << ',' << (s.admissible ? 1 : 0) << ','
         << format_number(s.margin) << '\n';
  write_text(opt.out_dir / "mu_history.csv", hist.str());
  std::ostringstream rep;
  rep << "mu = " << format_number(mu.mu) << (mu.record.fast_path ? " (fast path)" : "")
      << '\n';
  if (!mu.warning.empty()) rep << "warning: " << mu.warning << '\n';
  append(out.checks, "mu_bracketed", true, mu.mu, config.bracket.second);
  append(out.checks, "fast_path_cross_check", mu.record.cross_check_ok, 0, 0);

  // masks at the optimal level: S+/S- on the reweighted graph, attainment of
  // u = S+ against the uniqueness set
  auto graph_mu = reweight(*problem.base_graph(), level_set_field(config.supremand, mu.mu));
  ExtensionProblem ext(graph_mu, *config.datum);
  AdmissibilityReport adm = admissibility_check(ext);
  if (adm.ok || opt.override_admissibility) {
    SweepResult sp = maximal_extension_sweep(ext, true);
    SweepResult sm = minimal_extension_sweep(ext, true);
    UniquenessMask um = uniqueness_set(sp.values, sm.values, config.uniqueness_eps);
    double eps = config.attainment_eps.value_or(0.05 * mu.mu + 1e-9);
    AttainmentMask am = attainment_set(sp.values, problem, mu.mu, eps,
                                       config.attainment_r.value_or(0.0));
    export_scalar_field(sp.values, opt.out_dir / "splus.csv");
    export_scalar_field(sm.values, opt.out_dir / "sminus.csv");
    export_mask(*graph_mu, um.marked, opt.out_dir / "uniqueness_mask.csv");
    export_mask(*graph_mu, am.marked, opt.out_dir / "attainment_mask.csv");
    // uniqueness points attain the optimal level (up to one-cell dilation,
    // over nodes where the pointwise level is defined)
    int viol = 0, tot = 0;
    for (int i = 0; i < graph_mu->size(); ++i) {
      if (!am.defined[i] || !um[i]) continue;
      ++tot;
      bool near = am.marked[i] != 0;
      if (!near) {
        const MeshNode& n = graph_mu->node(i);
        for (auto [dx, dy] :
             {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}})
          if (int nb = graph_mu->lattice_node(n.ix + dx, n.iy + dy, n.iz);
              nb >= 0 && am.defined[nb] && am.marked[nb]) {
            near = true;
            break;
          }
      }
      if (!near) ++viol;
    }
    append(out.checks, "uniqueness_attains_mu", viol == 0, viol, 0,
           std::to_string(tot) + " uniqueness nodes checked");
    rep << "attainment nodes: " << am.marked_count << " of " << am.defined_count
        << " defined\n";
  } else {
    rep << "datum inadmissible at mu; masks skipped\n";
  }
  out.report = rep.str();
  return out;
}

// ---- built-in verification suite ----

double override_or(const std::map<std::string, double>& overrides, const std::string& key,
                   double fallback) {
  auto it = overrides.find(key);
  return it == overrides.end() ? fallback : it->second;
}

void verify_convex_core(std::vector<CheckResult>& checks,
                        const std::map<std::string, double>& tol) {
  ConvexField ball = presets::unit_ball_field();
  ConvexField ellipse = presets::ellipse_field();
  ConvexField square = ConvexField::constant(presets::square_set());
  const Vec origin{0.5, 0.5};

  check_le(checks, "gauge_ball", std::abs(gauge_eval(ball, origin, {0, 3}) - 3.0), 1e-12);
  check_le(checks, "gauge_square", std::abs(gauge_eval(square, origin, {2, 1}) - 2.0), 1e-12);
  check_le(checks, "gauge_ellipse", std::abs(gauge_eval(ellipse, origin, {2, 0}) - 1.0),
           1e-12);
  check_le(checks, "support_ball", std::abs(support_eval(ball, origin, {3, 4}) - 5.0), 1e-12);
  check_le(checks, "support_square", std::abs(support_eval(square, origin, {1, 2}) - 3.0),
           1e-12);
  check_le(checks, "support_ellipse",
           std::abs(support_eval(ellipse, origin, {1, 1}) - std::sqrt(5.0)), 1e-9);

  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst_hom = 0.0, worst_sub = 0.0, worst_sandwich = 0.0, worst_bipolar = 0.0;
  const ConvexField* fields[] = {&ball, &ellipse, &square};
  for (int it = 0; it < 200; ++it) {
    const ConvexField& f = *fields[it % 3];
    Vec x{0.5 + 0.4 * U(rng), 0.5 + 0.4 * U(rng)};
    Vec p{U(rng), U(rng)};
    if (p.norm() < 1e-3) continue;
    double g = gauge_eval(f, x, p), s = support_eval(f, x, p);
    for (double r : {0.5, 2.0, 7.0}) {
      worst_hom = std::max(worst_hom, std::abs(gauge_eval(f, x, p * r) - r * g) / (1 + r * g));
      worst_hom =
          std::max(worst_hom, std::abs(support_eval(f, x, p * r) - r * s) / (1 + r * s));
    }
    Vec p2{U(rng), U(rng)};
    worst_sub = std::max(worst_sub, gauge_eval(f, x, p + p2) - g - gauge_eval(f, x, p2));
    double pn = p.norm();
    worst_sandwich = std::max({worst_sandwich, pn / f.bound_M() - g, g - pn / f.alpha(),
                               f.alpha() * pn - s, s - f.bound_M() * pn});
    if (it % 3 == 0)
      worst_bipolar =
          std::max(worst_bipolar, std::abs(bipolar_gauge(f, x, p) - g) / (1 + g));
  }
  check_le(checks, "homogeneity", worst_hom, override_or(tol, "homogeneity", 1e-10));
  check_le(checks, "subadditivity", worst_sub, override_or(tol, "subadditivity", 1e-10));
  check_le(checks, "sandwich_bounds", worst_sandwich, override_or(tol, "sandwich", 1e-10));
  check_le(checks, "bipolar_duality", worst_bipolar, override_or(tol, "bipolar", 1e-6));

  double h0 = hausdorff_distance(ConvexSetInstance::ball(1), ConvexSetInstance::ball(1));
  double h1 = hausdorff_distance(ConvexSetInstance::ball(1), ConvexSetInstance::ball(2));
  double h2 = hausdorff_distance(ConvexSetInstance::ball(1), presets::square_set());
  check_le(checks, "hausdorff_identical", h0, 1e-12);
  check_le(checks, "hausdorff_concentric", std::abs(h1 - 1.0), 1e-9);
  check_le(checks, "hausdorff_ball_square", std::abs(h2 - (std::sqrt(2.0) - 1)), 2e-3);
}

void verify_slit(std::vector<CheckResult>& checks,
                 const std::map<std::string, double>& tol) {
  auto graph = discretize(presets::slit_disk(), presets::unit_ball_field(), 1.0 / 64, 16);
  double d_direct = extended_distance(graph, {0.5, 0.5}, {-0.5, 0.5});
  double d_xz = extended_distance(graph, {0.5, 0.5}, {0.0, 0.5});
  double d_zy = extended_distance(graph, {0.0, 0.5}, {-0.5, 0.5});
  double rel = override_or(tol, "distance_rel", 0.02);
  check_le(checks, "slit_distance", std::abs(d_direct - std::sqrt(2.0)) / std::sqrt(2.0),
           rel);
  check_le(checks, "slit_triangle_sum", std::abs(d_xz + d_zy - 1.0), rel);
}

void verify_extension(std::vector<CheckResult>& checks,
                      const std::map<std::string, double>& tol) {
  const double h = 1.0 / 32;
  auto graph = discretize(presets::unit_square(), presets::unit_ball_field(), h, 16);
  ExtensionProblem problem(graph, presets::linear_datum());
  SweepResult sp = maximal_extension_sweep(problem);
  SweepResult sm = minimal_extension_sweep(problem, true);
  Vec e = presets::linear_direction();
  double err = 0.0;
  for (int i = 0; i < graph->size(); ++i) {
    double exact = graph->node(i).pos.dot(e);
    err = std::max({err, std::abs(sp.values[i] - exact), std::abs(sm.values[i] - exact)});
  }
  check_le(checks, "linear_extension_error", err, override_or(tol, "extension_err", 2 * h));
  UniquenessMask mask = uniqueness_set(sp.values, sm.values);
  append(checks, "uniqueness_coverage", mask.interior_fraction() >= 0.95,
         mask.interior_fraction(), 0.95);

  ScalarField u = field_from_expression(graph, presets::linear_datum());
  auto val = validate_solution(problem, u);
  append(checks, "candidate_feasibility", val.boundary_ok && val.feasible,
         val.max_edge_ratio, 1.0 + kFeasibilityTol);
  auto sand = sandwich_check(sm.values, u, sp.values, problem.tolerance());
  append(checks, "sandwich_property", sand.ok, std::max(sand.worst_low, sand.worst_high),
         problem.tolerance());
  ScalarField u2 = field_from_expression(graph, ScalarExpr::dot(e * 2.0));
  auto val2 = validate_solution(problem, u2);
  append(checks, "feasibility_rejection", !val2.feasible, val2.max_edge_ratio, 1.0,
         "doubled slope must be rejected");
}

void verify_supremal(std::vector<CheckResult>& checks,
                     const std::map<std::string, double>& tol) {
  auto H = std::make_shared<ScaledNormSupremand>(ScalarExpr::constant(1.0), 1.0, 1.0);
  SupremalProblem problem(presets::unit_square(), H,
                          ScalarExpr::dot({0.7, 0.0}), 1.0 / 32, 16);
  MuResult mu = optimal_mu(problem, 1e-3, 1e-6, 10.0);
  check_le(checks, "mu_recovery", std::abs(mu.mu - 0.7),
           override_or(tol, "mu_err", 1e-3 + 0.02 * 0.7));
  append(checks, "mu_cross_check", mu.record.cross_check_ok, 0, 0);
}

void verify_regularity(std::vector<CheckResult>& checks,
                       const std::map<std::string, double>& tol) {
  const double h = 1.0 / 32;
  auto graph = discretize(presets::unit_square(), presets::unit_ball_field(), h, 16);
  auto region = nodes_in_box(*graph, {0.2, 0.2}, {0.8, 0.8});
  std::vector<std::pair<int, int>> offsets{{1, 0}, {0, 1}, {1, 1}, {2, 1}};
  ScalarField affine = field_from_expression(graph, ScalarExpr::affine({0.3, -0.7}, 0.2));
  auto ra = second_difference_constants(affine, region, offsets);
  check_le(checks, "second_difference_affine", std::max(ra.c1, ra.c2), 1e-10);
  // u = -|x - c|^2 has exact second differences -2|h|^2
  ScalarExpr quad = ScalarExpr::poly(
      ScalarExpr::sum_of({ScalarExpr::poly(ScalarExpr::coord(0), {0.25, -1.0, 1.0}),
                          ScalarExpr::poly(ScalarExpr::coord(1), {0.25, -1.0, 1.0})}),
      {0.0, -1.0});
  ScalarField uq = field_from_expression(graph, quad);
  auto rq = second_difference_constants(uq, region, offsets);
  check_le(checks, "second_difference_quadratic", std::abs(rq.c2 - 2.0),
           override_or(tol, "c2_err", 0.02));
}

}  // namespace

std::vector<CheckResult> run_verification_suite(
    const std::map<std::string, double>& overrides) {
  std::vector<CheckResult> checks;
  verify_convex_core(checks, overrides);
  verify_slit(checks, overrides);
  verify_extension(checks, overrides);
  verify_supremal(checks, overrides);
  verify_regularity(checks, overrides);
  return checks;
}

RunOutcome run_scenario(const ScenarioConfig& config, const std::string& command,
                        const RunOptions& options) {
  RunOutcome out;
  if (command == "support")
    out = run_support(config, options);
  else if (command == "distance")
    out = run_distance(config, options);
  else if (command == "extend")
    out = run_extend(config, options);
  else if (command == "uniqueness")
    out = run_uniqueness(config, options);
  else if (command == "supremal")
    out = run_supremal(config, options);
  else if (command == "verify")
    out.checks = run_verification_suite(config.tolerance_overrides);
  else
    throw ConfigError("unknown command: " + command);

  out.ok = std::all_of(out.checks.begin(), out.checks.end(),
                       [](const CheckResult& c) { return c.pass; });
  out.report += format_report(out.checks);
  write_text(options.out_dir / "report.txt", out.report);
  // scenario round-trip artifact
  write_text(options.out_dir / "config.json", scenario_to_json(config).dump(2) + "\n");
  return out;
}

}  // namespace gradex

#include "gradex/extensions.hpp"

#include <algorithm>
#include <cmath>

namespace gradex {

ExtensionProblem::ExtensionProblem(std::shared_ptr<const MeshGraph> graph, ScalarExpr datum)
    : graph_(std::move(graph)), datum_(std::move(datum)) {
  if (!graph_) throw std::invalid_argument("null graph");
  boundary_ = graph_->boundary_nodes();
  if (boundary_.empty()) throw GeometryError("graph has no boundary nodes");
  tol_ = mesh_tolerance(graph_->spacing(), graph_->stencil());
  for (int b : boundary_)
    if (!std::isfinite(datum_.eval(graph_->node(b).pos)))
      throw ModelError("boundary datum is not finite on the boundary");
}

double ExtensionProblem::datum_at(int node) const {
  return datum_.eval(graph_->node(node).pos);
}

AdmissibilityReport admissibility_check(const ExtensionProblem& problem, int max_sources) {
  const MeshGraph& g = problem.graph();
  const auto& boundary = problem.boundary();
  std::vector<double> gvals(boundary.size());
  for (size_t i = 0; i < boundary.size(); ++i) gvals[i] = problem.datum_at(boundary[i]);

  // choose sources: all boundary nodes, or an even subsample plus the datum
  // extremes (violations concentrate at small g)
  std::vector<int> sources;
  AdmissibilityReport rep;
  if (static_cast<int>(boundary.size()) <= max_sources) {
    for (size_t i = 0; i < boundary.size(); ++i) sources.push_back(static_cast<int>(i));
  } else {
    rep.sampled = true;
    double stride = double(boundary.size()) / max_sources;
    for (int k = 0; k < max_sources; ++k)
      sources.push_back(static_cast<int>(k * stride));
    size_t imin = 0, imax = 0;
    for (size_t i = 0; i < gvals.size(); ++i) {
      if (gvals[i] < gvals[imin]) imin = i;
      if (gvals[i] > gvals[imax]) imax = i;
    }
    sources.push_back(static_cast<int>(imin));
    sources.push_back(static_cast<int>(imax));
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  }

  for (int si : sources) {
    int y1 = boundary[si];
    auto dist = dijkstra(g, y1);
    for (size_t j = 0; j < boundary.size(); ++j) {
      double viol = gvals[j] - gvals[si] - dist[boundary[j]];
      if (viol > rep.margin) {
        rep.margin = viol;
        rep.worst_from = y1;
        rep.worst_to = boundary[j];
      }
    }
  }
  rep.sources_checked = static_cast<int>(sources.size());
  rep.ok = rep.margin <= problem.tolerance();
  return rep;
}

namespace {

SweepResult splus_sweep(const ExtensionProblem& problem, bool override_admissibility) {
  if (!override_admissibility) {
    auto rep = admissibility_check(problem);
    if (!rep.ok)
      throw ModelError("boundary datum is not 1-Lipschitz w.r.t. d (margin " +
                       std::to_string(rep.margin) + "); pass the override to proceed");
  }
  std::vector<std::pair<int, double>> sources;
  for (int b : problem.boundary()) sources.push_back({b, problem.datum_at(b)});
  return sweep(problem.graph_ptr(), sources, SweepDirection::FromSources);
}

SweepResult sminus_sweep(const ExtensionProblem& problem, bool override_admissibility) {
  if (!override_admissibility) {
    auto rep = admissibility_check(problem);
    if (!rep.ok)
      throw ModelError("boundary datum is not 1-Lipschitz w.r.t. d (margin " +
                       std::to_string(rep.margin) + "); pass the override to proceed");
  }
  // S-(x) = sup_y g(y) - d(x, y) = -min_y (-g(y) + d(x, y)); the reversed
  // sweep computes min over sources of offset + d(x, y)
  std::vector<std::pair<int, double>> sources;
  for (int b : problem.boundary()) sources.push_back({b, -problem.datum_at(b)});
  SweepResult r = sweep(problem.graph_ptr(), sources, SweepDirection::ToSources);
  std::vector<double> neg = r.values.values();
  for (double& v : neg) v = -v;
  r.values = ScalarField(problem.graph_ptr(), std::move(neg));
  return r;
}

}  // namespace

SweepResult maximal_extension_sweep(const ExtensionProblem& problem, bool override_adm) {
  return splus_sweep(problem, override_adm);
}

SweepResult minimal_extension_sweep(const ExtensionProblem& problem, bool override_adm) {
  return sminus_sweep(problem, override_adm);
}

ScalarField maximal_extension(const ExtensionProblem& problem, bool override_adm) {
  return splus_sweep(problem, override_adm).values;
}

ScalarField minimal_extension(const ExtensionProblem& problem, bool override_adm) {
  return sminus_sweep(problem, override_adm).values;
}

UniquenessMask uniqueness_set(const ScalarField& splus, const ScalarField& sminus,
                              std::optional<double> eps_opt) {
  if (!splus.same_graph(sminus)) throw std::invalid_argument("fields on different graphs");
  const MeshGraph& g = splus.graph();
  double tol = mesh_tolerance(g.spacing(), g.stencil());
  double eps = eps_opt.value_or(uniqueness_eps(g.spacing()));
  UniquenessMask m;
  m.eps = eps;
  m.marked.assign(g.size(), 0);
  for (int i = 0; i < g.size(); ++i) {
    double gap = splus[i] - sminus[i];
    if (gap < -tol)
      throw ModelError("S+ < S- beyond tolerance; extensions are inconsistent");
    bool interior = g.node(i).role == NodeRole::Interior;
    if (interior) ++m.interior;
    if (gap <= eps) {
      m.marked[i] = 1;
      if (interior) ++m.marked_interior;
    }
  }
  return m;
}

CoincidenceReport coincidence_geodesic(const ExtensionProblem& problem,
                                       const SweepResult& splus, const SweepResult& sminus,
                                       const UniquenessMask& mask, int x0,
                                       double derivative_rel_tol) {
  const MeshGraph& g = problem.graph();
  if (x0 < 0 || x0 >= g.size()) throw std::invalid_argument("node id out of range");
  if (!mask[x0])
    throw std::invalid_argument("x0 is not in the uniqueness mask");

  // chain y1 -> x0 from the S+ sweep (predecessors point toward sources)
  std::vector<int> chain1;
  for (int v = x0; v != -1; v = splus.pred[v]) chain1.push_back(v);
  std::reverse(chain1.begin(), chain1.end());
  // chain x0 -> y2 from the S- reversed sweep (predecessors follow forward edges)
  std::vector<int> chain2;
  for (int v = sminus.pred[x0]; v != -1; v = sminus.pred[v]) chain2.push_back(v);

  std::vector<int> nodes = chain1;
  nodes.insert(nodes.end(), chain2.begin(), chain2.end());
  CoincidenceReport rep;
  rep.y1 = splus.source[x0];
  rep.y2 = sminus.source[x0];
  rep.curve = path_from_nodes(g, nodes);
  rep.curve_length = rep.curve.finsler_length();
  rep.endpoint_distance = quasi_dist(problem.graph_ptr(), rep.y1, rep.y2).value;

  double tol = problem.tolerance();
  rep.geodesic_ok = std::abs(rep.curve_length - rep.endpoint_distance) <=
                    tol * (1.0 + rep.endpoint_distance);

  for (int v : nodes)
    rep.max_gap = std::max(rep.max_gap, std::abs(splus.values[v] - sminus.values[v]));
  rep.gap_ok = rep.max_gap <= mask.eps + 1e-12;

  // discrete curve derivative of S+ against the metric at segment midpoints
  const ConvexField& field = g.field();
  for (size_t i = 1; i < nodes.size(); ++i) {
    Vec a = g.node(nodes[i - 1]).pos, b = g.node(nodes[i]).pos;
    Vec d = b - a;
    double len = d.norm();
    if (len < 1e-15) continue;
    double slope = (splus.values[nodes[i]] - splus.values[nodes[i - 1]]) / len;
    double metric = field.at((a + b) * 0.5).support(d / len);
    rep.max_derivative_dev =
        std::max(rep.max_derivative_dev, std::abs(slope - metric) / std::max(1e-12, metric));
  }
  rep.derivative_ok = rep.max_derivative_dev <= derivative_rel_tol;
  return rep;
}

SolutionValidation validate_solution(const ExtensionProblem& problem, const ScalarField& u,
                                     double boundary_tol, std::optional<double> feas_tol) {
  if (u.graph_ptr().get() != problem.graph_ptr().get())
    throw std::invalid_argument("candidate field lives on a different graph");
  const MeshGraph& g = problem.graph();
  SolutionValidation v;
  for (int b : problem.boundary())
    v.max_boundary_dev = std::max(v.max_boundary_dev, std::abs(u[b] - problem.datum_at(b)));
  v.boundary_ok = v.max_boundary_dev <= boundary_tol;
  double tol = feas_tol.value_or(kFeasibilityTol);
  for (int a = 0; a < g.size(); ++a)
    for (const MeshEdge& e : g.out_edges(a)) {
      if (e.w <= 0.0) continue;
      v.max_edge_ratio = std::max(v.max_edge_ratio, (u[e.to] - u[a]) / e.w);
    }
  v.feasible = v.max_edge_ratio <= 1.0 + tol;
  return v;
}

SandwichReport sandwich_check(const ScalarField& sminus, const ScalarField& u,
                              const ScalarField& splus, double tol) {
  if (!sminus.same_graph(u) || !u.same_graph(splus))
    throw std::invalid_argument("fields on different graphs");
  SandwichReport r;
  for (int i = 0; i < u.size(); ++i) {
    r.worst_low = std::max(r.worst_low, sminus[i] - u[i]);
    r.worst_high = std::max(r.worst_high, u[i] - splus[i]);
  }
  r.ok = r.worst_low <= tol && r.worst_high <= tol;
  return r;
}

ScalarField field_from_expression(std::shared_ptr<const MeshGraph> graph,
                                  const ScalarExpr& e) {
  std::vector<double> vals(graph->size());
  for (int i = 0; i < graph->size(); ++i) vals[i] = e.eval(graph->node(i).pos);
  return ScalarField(std::move(graph), std::move(vals));
}

}  // namespace gradex

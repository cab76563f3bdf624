#pragma once

#include <optional>
#include <string>

#include "gradex/geodesic.hpp"
#include "gradex/tolerances.hpp"

namespace gradex {

// Boundary-value problem: extend g from the boundary into the domain with
// gradient constrained to K(x). Holds the built graph and the datum sampled
// at boundary nodes.
class ExtensionProblem {
 public:
  ExtensionProblem(std::shared_ptr<const MeshGraph> graph, ScalarExpr datum);

  const MeshGraph& graph() const { return *graph_; }
  const std::shared_ptr<const MeshGraph>& graph_ptr() const { return graph_; }
  const ScalarExpr& datum() const { return datum_; }
  const std::vector<int>& boundary() const { return boundary_; }
  double datum_at(int node) const;
  double tolerance() const { return tol_; }

 private:
  std::shared_ptr<const MeshGraph> graph_;
  ScalarExpr datum_;
  std::vector<int> boundary_;
  double tol_;
};

struct AdmissibilityReport {
  bool ok = false;
  double margin = -kInf;  // max over pairs of g(y2) - g(y1) - d(y1, y2)
  int worst_from = -1, worst_to = -1;
  int sources_checked = 0;
  bool sampled = false;  // true when the boundary pair set was subsampled
};

// verifies g(y2) - g(y1) <= d(y1, y2) + tol over boundary pairs; above
// max_sources the source set is subsampled evenly (plus datum extremes)
AdmissibilityReport admissibility_check(const ExtensionProblem& problem,
                                        int max_sources = 96);

// S+ (smallest 1-Lipschitz-from-above extension) and S- via boundary sweeps.
// Throws ModelError on inadmissible data unless override_admissibility.
ScalarField maximal_extension(const ExtensionProblem& problem,
                              bool override_admissibility = false);
ScalarField minimal_extension(const ExtensionProblem& problem,
                              bool override_admissibility = false);

// sweeps with winning-source and predecessor bookkeeping (for geodesics)
SweepResult maximal_extension_sweep(const ExtensionProblem& problem,
                                    bool override_admissibility = false);
SweepResult minimal_extension_sweep(const ExtensionProblem& problem,
                                    bool override_admissibility = false);

struct UniquenessMask {
  std::vector<char> marked;  // per node
  double eps = 0.0;
  int marked_interior = 0, interior = 0;

  bool operator[](int i) const { return marked[i] != 0; }
  double interior_fraction() const {
    return interior ? double(marked_interior) / interior : 0.0;
  }
};

// nodes where S+ - S- <= eps; defaults to 3x the calibrated mesh tolerance
UniquenessMask uniqueness_set(const ScalarField& splus, const ScalarField& sminus,
                              std::optional<double> eps = std::nullopt);

struct CoincidenceReport {
  PathPolyline curve;          // boundary-to-boundary through x0
  int y1 = -1, y2 = -1;        // boundary endpoints
  double curve_length = 0.0;   // Finsler length of the curve
  double endpoint_distance = 0.0;  // d(y1, y2)
  double max_gap = 0.0;        // max |S+ - S-| along the curve
  double max_derivative_dev = 0.0;  // max relative deviation of dS+/ds from phi0
  bool geodesic_ok = false, gap_ok = false, derivative_ok = false;
};

// extracts the boundary-to-boundary curve through a uniqueness point x0 by
// concatenating the S+ predecessor chain and the S- successor chain, and
// checks the three coincidence properties
CoincidenceReport coincidence_geodesic(const ExtensionProblem& problem,
                                       const SweepResult& splus, const SweepResult& sminus,
                                       const UniquenessMask& mask, int x0,
                                       double derivative_rel_tol = 0.05);

struct SolutionValidation {
  bool boundary_ok = false;
  bool feasible = false;
  double max_boundary_dev = 0.0;
  double max_edge_ratio = 0.0;  // max over edges of (u(v) - u(u)) / w(u -> v)
};

// discrete solution checks: boundary agreement plus per-edge feasibility
// (the discrete surrogate of the gradient constraint)
SolutionValidation validate_solution(const ExtensionProblem& problem, const ScalarField& u,
                                     double boundary_tol = 1e-9,
                                     std::optional<double> feas_tol = std::nullopt);

struct SandwichReport {
  bool ok = false;
  double worst_low = 0.0;   // max over nodes of S- - u
  double worst_high = 0.0;  // max over nodes of u - S+
};

SandwichReport sandwich_check(const ScalarField& sminus, const ScalarField& u,
                              const ScalarField& splus, double tol);

// sample a whitelist expression at every node (interior and boundary)
ScalarField field_from_expression(std::shared_ptr<const MeshGraph> graph,
                                  const ScalarExpr& e);

}  // namespace gradex

#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "gradex/convex.hpp"
#include "gradex/domain.hpp"

namespace gradex {

enum class NodeRole { Interior, Boundary, SlitSide };

struct MeshNode {
  Vec pos;
  NodeRole role = NodeRole::Interior;
  bool lattice = false;     // sits on the h-lattice
  long long ix = 0, iy = 0, iz = 0;
  int arc = -1;             // boundary arc membership (first match)
  double arc_param = 0.0;
  int slit = -1;            // slit index for SlitSide nodes
  int side = 0;             // +1 / -1 for SlitSide nodes
};

struct MeshEdge {
  int to = -1;
  double w = 0.0;    // Finsler weight |v-u| * support(mid, dir)
  double len = 0.0;  // Euclidean length
};

// Directed, anisotropically weighted discretization graph. Immutable after
// construction; safe to share across threads.
class MeshGraph {
 public:
  int dim() const { return dim_; }
  double spacing() const { return h_; }
  int stencil() const { return stencil_; }
  const Domain& domain() const { return *domain_; }
  const ConvexField& field() const { return *field_; }

  int size() const { return static_cast<int>(nodes_.size()); }
  const MeshNode& node(int i) const { return nodes_[i]; }
  const std::vector<MeshNode>& nodes() const { return nodes_; }
  const std::vector<MeshEdge>& out_edges(int i) const { return out_[i]; }
  const std::vector<MeshEdge>& in_edges(int i) const { return in_[i]; }

  int interior_count() const { return interior_count_; }
  std::vector<int> boundary_nodes() const;  // Boundary + SlitSide
  std::vector<int> interior_nodes() const;

  // node id of a lattice interior/boundary node at lattice index, or -1
  int lattice_node(long long ix, long long iy, long long iz = 0) const;

  // all nodes whose position is within tol of the closest node to p
  // (duplicated slit nodes share a position, so several ids may return)
  std::vector<int> nearest_nodes(const Vec& p, double tol = 1e-9) const;
  int nearest_interior_node(const Vec& p) const;

  friend class MeshBuilder;
  friend std::shared_ptr<const MeshGraph> reweight(const MeshGraph& graph,
                                                   const ConvexField& field);

  // minimal hand-built graph for tests
  static std::shared_ptr<const MeshGraph> from_parts(std::vector<MeshNode> nodes,
                                                     std::vector<std::vector<MeshEdge>> out);

 private:
  MeshGraph() = default;
  void build_reverse();

  int dim_ = 2;
  double h_ = 0.0;
  int stencil_ = 16;
  std::shared_ptr<const Domain> domain_;
  std::shared_ptr<const ConvexField> field_;
  std::vector<MeshNode> nodes_;
  std::vector<std::vector<MeshEdge>> out_, in_;
  int interior_count_ = 0;
  std::unordered_map<long long, int> lattice_map_;
};

// Build the graph: lattice nodes clipped to the closure, boundary nodes
// inserted (snapped to a deterministic arclength grid of spacing h/2) where
// stencil edges exit, slit-adjacent nodes duplicated per side, and every
// admissible edge (u -> v) weighted |v-u| * support(midpoint, direction).
// Throws GeometryError when h under-resolves the domain features or the
// interior fails to be strongly connected.
std::shared_ptr<const MeshGraph> discretize(const Domain& domain, const ConvexField& field,
                                            double h, int stencil);

// node-indexed scalar values on a fixed graph
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(std::shared_ptr<const MeshGraph> graph, std::vector<double> values);

  const MeshGraph& graph() const { return *graph_; }
  const std::shared_ptr<const MeshGraph>& graph_ptr() const { return graph_; }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }

  bool same_graph(const ScalarField& o) const { return graph_.get() == o.graph_.get(); }

 private:
  std::shared_ptr<const MeshGraph> graph_;
  std::vector<double> values_;
};

// same topology with edge weights recomputed under a different field
// (used by level sweeps over many constraint levels)
std::shared_ptr<const MeshGraph> reweight(const MeshGraph& graph, const ConvexField& field);

// shortest-path |x - y|_Omega approximation with Euclidean edge lengths
double euclidean_path_distance(const MeshGraph& graph, int from, int to);

}  // namespace gradex

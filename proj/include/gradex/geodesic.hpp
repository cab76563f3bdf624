#pragma once

#include <vector>

#include "gradex/mesh.hpp"

namespace gradex {

// arc-length-parameterized piecewise-linear curve with per-vertex cumulative
// Euclidean and Finsler lengths
struct PathPolyline {
  std::vector<Vec> points;
  std::vector<double> s_euclid;   // cumulative Euclidean arclength
  std::vector<double> s_finsler;  // cumulative Finsler length

  bool empty() const { return points.empty(); }
  double euclid_length() const { return s_euclid.empty() ? 0.0 : s_euclid.back(); }
  double finsler_length() const { return s_finsler.empty() ? 0.0 : s_finsler.back(); }
};

struct DistanceResult {
  double value = kInf;
  PathPolyline path;
  bool forward = true;  // d(x, y) vs d(y, x) on the reversed graph
};

// one multi-source Dijkstra label set: value, predecessor, winning source
struct SweepResult {
  ScalarField values;
  std::vector<int> pred;    // predecessor node in sweep orientation, -1 at sources
  std::vector<int> source;  // winning source node, -1 if unreached
};

enum class SweepDirection { FromSources, ToSources };

// multi-source Dijkstra: per node z, min over sources (y, c) of c + d(y, z)
// (FromSources) or c + d(z, y) (ToSources, on the edge-reversed graph).
// Unreached nodes carry +inf.
SweepResult sweep(std::shared_ptr<const MeshGraph> graph,
                  const std::vector<std::pair<int, double>>& sources,
                  SweepDirection direction, bool euclidean_weights = false);

// directed quasi-distance d(x, y) with extracted geodesic path
DistanceResult quasi_dist(std::shared_ptr<const MeshGraph> graph, int x, int y);

// Finsler length of an explicit curve under the field (midpoint quadrature);
// throws GeometryError when a segment leaves the domain
double finsler_length(const ConvexField& field, const PathPolyline& path,
                      const Domain* domain = nullptr);

// build a polyline through the given node ids
PathPolyline path_from_nodes(const MeshGraph& graph, const std::vector<int>& nodes);

// greedy chord-shortcutting: drops interior vertices when the chord stays in
// the domain and does not increase Finsler length
PathPolyline shortcut_path(const MeshGraph& graph, const PathPolyline& path);

// single-source distances (optionally stopping beyond a value bound)
std::vector<double> dijkstra(const MeshGraph& graph, int source, bool reversed = false,
                             bool euclidean_weights = false, double stop_beyond = kInf);

}  // namespace gradex

#include "gradex/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace gradex {

namespace {

struct QItem {
  double dist;
  int node;
  bool operator>(const QItem& o) const {
    if (dist != o.dist) return dist > o.dist;
    return node > o.node;  // deterministic tie order
  }
};

using MinQueue = std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>>;

}  // namespace

SweepResult sweep(std::shared_ptr<const MeshGraph> graph,
                  const std::vector<std::pair<int, double>>& sources,
                  SweepDirection direction, bool euclidean_weights) {
  if (sources.empty()) throw std::invalid_argument("sweep needs at least one source");
  const MeshGraph& g = *graph;
  const int n = g.size();
  std::vector<double> dist(n, kInf);
  std::vector<int> pred(n, -1), src(n, -1);
  MinQueue q;
  for (auto [node, offset] : sources) {
    if (node < 0 || node >= n) throw std::invalid_argument("source node out of range");
    if (!std::isfinite(offset)) throw std::invalid_argument("source offset must be finite");
    // ties between sources resolve to the smallest node id
    if (offset < dist[node] || (offset == dist[node] && (src[node] < 0 || node < src[node]))) {
      dist[node] = offset;
      src[node] = node;
      q.push({offset, node});
    }
  }
  const bool rev = direction == SweepDirection::ToSources;
  std::vector<char> done(n, 0);
  while (!q.empty()) {
    auto [du, u] = q.top();
    q.pop();
    if (done[u] || du > dist[u]) continue;
    done[u] = 1;
    const auto& edges = rev ? g.in_edges(u) : g.out_edges(u);
    for (const MeshEdge& e : edges) {
      double w = euclidean_weights ? e.len : e.w;
      double nd = du + w;
      if (nd < dist[e.to] - 1e-15 ||
          (std::abs(nd - dist[e.to]) <= 1e-15 && src[u] >= 0 && src[e.to] >= 0 &&
           src[u] < src[e.to])) {
        dist[e.to] = nd;
        pred[e.to] = u;
        src[e.to] = src[u];
        q.push({nd, e.to});
      }
    }
  }
  SweepResult r{ScalarField(graph, std::move(dist)), std::move(pred), std::move(src)};
  return r;
}

std::vector<double> dijkstra(const MeshGraph& graph, int source, bool reversed,
                             bool euclidean_weights, double stop_beyond) {
  const int n = graph.size();
  std::vector<double> dist(n, kInf);
  MinQueue q;
  dist[source] = 0.0;
  q.push({0.0, source});
  std::vector<char> done(n, 0);
  while (!q.empty()) {
    auto [du, u] = q.top();
    q.pop();
    if (done[u] || du > dist[u]) continue;
    if (du > stop_beyond) break;
    done[u] = 1;
    const auto& edges = reversed ? graph.in_edges(u) : graph.out_edges(u);
    for (const MeshEdge& e : edges) {
      double nd = du + (euclidean_weights ? e.len : e.w);
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        q.push({nd, e.to});
      }
    }
  }
  return dist;
}

PathPolyline path_from_nodes(const MeshGraph& graph, const std::vector<int>& nodes) {
  PathPolyline p;
  if (nodes.empty()) return p;
  const ConvexField& field = graph.field();
  p.points.push_back(graph.node(nodes[0]).pos);
  p.s_euclid.push_back(0.0);
  p.s_finsler.push_back(0.0);
  for (size_t i = 1; i < nodes.size(); ++i) {
    Vec a = graph.node(nodes[i - 1]).pos, b = graph.node(nodes[i]).pos;
    Vec d = b - a;
    double len = d.norm();
    if (len < 1e-15) continue;
    p.points.push_back(b);
    p.s_euclid.push_back(p.s_euclid.back() + len);
    p.s_finsler.push_back(p.s_finsler.back() + len * field.at((a + b) * 0.5).support(d / len));
  }
  return p;
}

DistanceResult quasi_dist(std::shared_ptr<const MeshGraph> graph, int x, int y) {
  const int n = graph->size();
  if (x < 0 || x >= n || y < 0 || y >= n)
    throw std::invalid_argument("node id out of range");
  SweepResult s = sweep(graph, {{x, 0.0}}, SweepDirection::FromSources);
  DistanceResult r;
  r.value = s.values[y];
  if (!std::isfinite(r.value)) return r;  // unreachable: +inf, empty path
  std::vector<int> chain;
  for (int v = y; v != -1; v = s.pred[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  r.path = path_from_nodes(*graph, chain);
  return r;
}

double finsler_length(const ConvexField& field, const PathPolyline& path,
                      const Domain* domain) {
  double total = 0.0;
  for (size_t i = 1; i < path.points.size(); ++i) {
    const Vec& a = path.points[i - 1];
    const Vec& b = path.points[i];
    if (domain && !domain->segment_admissible(a, b))
      throw GeometryError("path segment leaves the domain");
    Vec d = b - a;
    double len = d.norm();
    if (len < 1e-15) continue;
    total += len * field.at((a + b) * 0.5).support(d / len);
  }
  return total;
}

PathPolyline shortcut_path(const MeshGraph& graph, const PathPolyline& path) {
  if (path.points.size() < 3) return path;
  const ConvexField& field = graph.field();
  const Domain& dom = graph.domain();
  std::vector<Vec> pts = path.points;
  bool changed = true;
  while (changed && pts.size() > 2) {
    changed = false;
    std::vector<Vec> next;
    next.push_back(pts[0]);
    size_t i = 0;
    while (i + 1 < pts.size()) {
      if (i + 2 < pts.size() && dom.segment_admissible(next.back(), pts[i + 2])) {
        Vec a = next.back(), m = pts[i + 1], b = pts[i + 2];
        auto seg_len = [&](const Vec& p, const Vec& q) {
          Vec d = q - p;
          double len = d.norm();
          return len < 1e-15 ? 0.0 : len * field.at((p + q) * 0.5).support(d / len);
        };
        if (seg_len(a, b) <= seg_len(a, m) + seg_len(m, b) + 1e-14) {
          next.push_back(b);
          i += 2;
          changed = true;
          continue;
        }
      }
      next.push_back(pts[i + 1]);
      ++i;
    }
    pts = std::move(next);
  }
  PathPolyline out;
  out.points = pts;
  out.s_euclid.push_back(0.0);
  out.s_finsler.push_back(0.0);
  for (size_t i = 1; i < pts.size(); ++i) {
    Vec d = pts[i] - pts[i - 1];
    double len = d.norm();
    out.s_euclid.push_back(out.s_euclid.back() + len);
    out.s_finsler.push_back(out.s_finsler.back() +
                            len * field.at((pts[i - 1] + pts[i]) * 0.5).support(d / len));
  }
  return out;
}

double euclidean_path_distance(const MeshGraph& graph, int from, int to) {
  auto dist = dijkstra(graph, from, false, true);
  return dist[to];
}

}  // namespace gradex

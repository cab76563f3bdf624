#include "gradex/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace gradex {

namespace {

constexpr long long kIdxBias = 1LL << 20;
constexpr long long kIdxBase = 1LL << 21;

long long lattice_key(long long ix, long long iy, long long iz) {
  return ((ix + kIdxBias) * kIdxBase + (iy + kIdxBias)) * kIdxBase + (iz + kIdxBias);
}

// phase offset of the boundary sampling grid on non-slit arcs; keeps inserted
// nodes clear of lattice points and corners so cut edges never degenerate
constexpr double kArcPhase = 0.381966011250105;

std::vector<Vec> stencil_offsets(int dim, int stencil) {
  std::vector<Vec> offs;
  if (dim == 2) {
    if (stencil != 8 && stencil != 16)
      throw std::invalid_argument("2-d stencil must be 8 or 16");
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        if (dx || dy) offs.push_back({double(dx), double(dy)});
    if (stencil == 16)
      for (auto [dx, dy] : {std::pair{2, 1}, {1, 2}, {-1, 2}, {-2, 1},
                            {-2, -1}, {-1, -2}, {1, -2}, {2, -1}})
        offs.push_back({double(dx), double(dy)});
  } else {
    if (stencil != 26) throw std::invalid_argument("3-d stencil must be 26");
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz)
          if (dx || dy || dz) offs.push_back({double(dx), double(dy), double(dz)});
  }
  return offs;
}

struct ArcGrid {
  double spacing = 0.0;
  double phase = 0.0;   // in units of spacing
  long long kmin = 0, kmax = -1;
  bool wrap = false;
  long long wrap_n = 0;
  bool jitter = false;
  int arc_index = 0;

  // deterministic per-slot jitter (splitmix64 hash) decorrelating snap
  // displacements of consecutive exit rays; without it, rational ratios
  // between the lattice and the arc grid produce resonant attachment-error
  // patterns at particular spacings
  double jitter_of(long long k) const {
    if (!jitter) return 0.0;
    unsigned long long z = static_cast<unsigned long long>(k * 2654435769LL + arc_index);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return (double(z >> 11) / 9007199254740992.0 - 0.5) * 0.9;
  }

  double param(long long k) const { return (k + phase + jitter_of(k)) * spacing; }
  long long snap(double s) const {
    long long k = std::llround(s / spacing - phase);
    if (wrap) {
      k %= wrap_n;
      if (k < 0) k += wrap_n;
      return k;
    }
    return std::clamp(k, kmin, kmax);
  }
};

}  // namespace

class MeshBuilder {
 public:
  MeshBuilder(const Domain& domain, const ConvexField& field, double h, int stencil)
      : h_(h), stencil_(stencil) {
    g_.dim_ = domain.dim();
    g_.h_ = h;
    g_.stencil_ = stencil;
    g_.domain_ = std::make_shared<Domain>(domain);
    g_.field_ = std::make_shared<ConvexField>(field);
  }

  std::shared_ptr<const MeshGraph> build();

 private:
  const Domain& dom() const { return *g_.domain_; }

  int add_node(MeshNode n) {
    g_.nodes_.push_back(std::move(n));
    g_.out_.emplace_back();
    return static_cast<int>(g_.nodes_.size()) - 1;
  }

  double edge_weight(const Vec& a, const Vec& b) const {
    Vec d = b - a;
    double len = d.norm();
    return len * g_.field_->at((a + b) * 0.5).support(d / len);
  }

  void add_edge(int u, int v) {
    if (u == v) return;
    for (const MeshEdge& e : g_.out_[u])
      if (e.to == v) return;
    const Vec& a = g_.nodes_[u].pos;
    const Vec& b = g_.nodes_[v].pos;
    double len = (b - a).norm();
    if (len < 1e-14) return;
    g_.out_[u].push_back({v, edge_weight(a, b), len});
  }

  // side consistency: an edge touching a slit-side node must stay on that side
  bool side_ok(int u, int v) const {
    const MeshNode& a = g_.nodes_[u];
    const MeshNode& b = g_.nodes_[v];
    for (const MeshNode* s : {&a, &b}) {
      if (s->role != NodeRole::SlitSide) continue;
      const MeshNode& other = (s == &a) ? b : a;
      if (other.role == NodeRole::SlitSide) {
        if (other.slit == s->slit && other.side != s->side) return false;
        continue;
      }
      const Slit& slit = dom().slits()[s->slit];
      double sgn = slit.signed_side(other.pos);
      if (sgn * s->side < 0) return false;  // strictly opposite side
    }
    return true;
  }

  bool admissible(int u, int v) const {
    return side_ok(u, v) && dom().segment_admissible(g_.nodes_[u].pos, g_.nodes_[v].pos);
  }

  void create_lattice_nodes();
  void create_edges();
  void link_arc_neighbors();
  void check_connectivity();

  int snapped_boundary_node(int arc, double s);

  double h_;
  int stencil_ = 16;
  MeshGraph g_;
  std::vector<ArcGrid> grids_;
  std::map<std::pair<int, long long>, int> arc_nodes_;  // (arc, k) -> node id
};

void MeshBuilder::create_lattice_nodes() {
  const Domain& d = dom();
  Vec lo = d.bbox_lo(), hi = d.bbox_hi();
  long long ix0 = llround(std::floor(lo.x / h_)) - 1, ix1 = llround(std::ceil(hi.x / h_)) + 1;
  long long iy0 = llround(std::floor(lo.y / h_)) - 1, iy1 = llround(std::ceil(hi.y / h_)) + 1;
  long long iz0 = 0, iz1 = 0;
  if (g_.dim_ == 3) {
    iz0 = llround(std::floor(lo.z / h_)) - 1;
    iz1 = llround(std::ceil(hi.z / h_)) + 1;
  }
  for (long long iz = iz0; iz <= iz1; ++iz)
    for (long long iy = iy0; iy <= iy1; ++iy)
      for (long long ix = ix0; ix <= ix1; ++ix) {
        Vec p{ix * h_, iy * h_, iz * h_};
        if (!d.in_closure(p)) continue;
        int slit = d.on_open_slit(p);
        if (slit >= 0) {
          // duplicate per side; folded onto the slit sampling grid
          for (size_t ai = 0; ai < d.arcs().size(); ++ai) {
            const BoundaryArc& arc = d.arcs()[ai];
            if (arc.slit_index != slit) continue;
            double s = arc.param_of(p);
            long long k = grids_[ai].snap(s);
            snapped_boundary_node(static_cast<int>(ai), grids_[ai].param(k));
          }
          continue;
        }
        MeshNode n;
        n.pos = p;
        n.lattice = true;
        n.ix = ix;
        n.iy = iy;
        n.iz = iz;
        if (d.on_boundary(p)) {
          n.role = NodeRole::Boundary;
          for (size_t ai = 0; ai < d.arcs().size(); ++ai) {
            if (d.arcs()[ai].slit_index >= 0) continue;
            Vec q = d.arcs()[ai].point_at(d.arcs()[ai].param_of(p));
            if ((q - p).norm() <= 1e-9) {
              n.arc = static_cast<int>(ai);
              n.arc_param = d.arcs()[ai].param_of(p);
              break;
            }
          }
        } else if (d.strictly_inside(p)) {
          n.role = NodeRole::Interior;
        } else {
          continue;
        }
        int id = add_node(n);
        g_.lattice_map_[lattice_key(ix, iy, iz)] = id;
      }
}

int MeshBuilder::snapped_boundary_node(int arc_index, double s) {
  const BoundaryArc& arc = dom().arcs()[arc_index];
  long long k = grids_[arc_index].snap(s);
  auto key = std::make_pair(arc_index, k);
  auto it = arc_nodes_.find(key);
  if (it != arc_nodes_.end()) return it->second;
  MeshNode n;
  n.pos = arc.point_at(grids_[arc_index].param(k));
  if (g_.dim_ == 2) n.pos.z = 0.0;
  n.arc = arc_index;
  n.arc_param = grids_[arc_index].param(k);
  if (arc.slit_index >= 0) {
    n.role = NodeRole::SlitSide;
    n.slit = arc.slit_index;
    n.side = arc.side;
  } else {
    n.role = NodeRole::Boundary;
  }
  int id = add_node(n);
  arc_nodes_[key] = id;
  return id;
}

void MeshBuilder::create_edges() {
  const Domain& d = dom();
  auto offs = stencil_offsets(g_.dim_, stencil_);
  const int n_initial = static_cast<int>(g_.nodes_.size());
  for (int u = 0; u < n_initial; ++u) {
    const MeshNode nu = g_.nodes_[u];  // by value: node insertion reallocates
    if (!nu.lattice) continue;  // snapped nodes get edges from their generators
    for (const Vec& o : offs) {
      long long tx = nu.ix + llround(o.x), ty = nu.iy + llround(o.y),
                tz = nu.iz + llround(o.z);
      auto it = g_.lattice_map_.find(lattice_key(tx, ty, tz));
      if (it != g_.lattice_map_.end()) {
        if (admissible(u, it->second)) add_edge(u, it->second);
        continue;
      }
      if (g_.dim_ == 3) continue;  // 3-d smoke path: lattice edges only
      // target is not a node: clip at the first boundary / slit hit and
      // attach to the snapped boundary node there
      Vec target{tx * h_, ty * h_, tz * h_};
      auto hit = d.first_boundary_hit(nu.pos, target);
      if (!hit) continue;
      int b = snapped_boundary_node(hit->arc, hit->s);
      if (b == u) continue;
      if (admissible(u, b)) {
        add_edge(u, b);
        add_edge(b, u);
      }
    }
  }
}

void MeshBuilder::link_arc_neighbors() {
  const Domain& d = dom();
  for (size_t ai = 0; ai < d.arcs().size(); ++ai) {
    const BoundaryArc& arc = d.arcs()[ai];
    std::vector<std::pair<double, int>> on_arc;
    for (int i = 0; i < static_cast<int>(g_.nodes_.size()); ++i) {
      const MeshNode& n = g_.nodes_[i];
      if (n.role == NodeRole::Interior) continue;
      if (n.role == NodeRole::SlitSide) {
        if (arc.slit_index != n.slit || arc.side != n.side) continue;
        on_arc.push_back({n.arc_param, i});
        continue;
      }
      if (arc.slit_index >= 0) continue;
      double s = arc.param_of(n.pos);
      if ((arc.point_at(s) - n.pos).norm() <= 1e-9) on_arc.push_back({s, i});
    }
    std::sort(on_arc.begin(), on_arc.end());
    auto link = [&](int a, int b) {
      if (a == b) return;
      if ((g_.nodes_[a].pos - g_.nodes_[b].pos).norm() > 2.5 * h_) return;
      if (admissible(a, b)) {
        add_edge(a, b);
        add_edge(b, a);
      }
    };
    for (size_t i = 0; i + 1 < on_arc.size(); ++i) link(on_arc[i].second, on_arc[i + 1].second);
    if (arc.kind == BoundaryArc::Kind::Circle && on_arc.size() > 2)
      link(on_arc.back().second, on_arc.front().second);
  }
}

void MeshBuilder::check_connectivity() {
  const int n = g_.size();
  int start = -1;
  for (int i = 0; i < n; ++i)
    if (g_.nodes_[i].role == NodeRole::Interior) {
      start = i;
      break;
    }
  if (start < 0) throw GeometryError("mesh has no interior nodes; h too large");
  auto reach = [&](const std::vector<std::vector<MeshEdge>>& adj) {
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (const MeshEdge& e : adj[u])
        if (!seen[e.to]) {
          seen[e.to] = 1;
          q.push(e.to);
        }
    }
    return seen;
  };
  auto fwd = reach(g_.out_);
  auto bwd = reach(g_.in_);
  for (int i = 0; i < n; ++i)
    if (g_.nodes_[i].role == NodeRole::Interior && (!fwd[i] || !bwd[i]))
      throw GeometryError("mesh interior is not strongly connected; refine h");
}

std::shared_ptr<const MeshGraph> MeshBuilder::build() {
  const Domain& d = dom();
  if (!(h_ > 0.0)) throw std::invalid_argument("spacing must be positive");
  if (h_ > d.feature_size() / 2.0)
    throw GeometryError("h under-resolves the domain; refine the mesh");
  if (h_ > d.slit_feature_size() / 4.0)
    throw GeometryError("h under-resolves a slit; refine the mesh");
  // Per-arc sampling grids. Outer arcs are sampled at spacing ~h^(3/2): finer
  // than the lattice, so cut-edge kink angles vanish under refinement and the
  // boundary-attachment error stays subordinate to the stencil error. The
  // irrational factor keeps the grid from locking onto lattice exit points at
  // dyadic spacings. Slit arcs keep spacing h/2 aligned with the lattice
  // (phase 0), which preserves exact duplicated-node positions at lattice
  // heights.
  const double outer_spacing = std::min(h_ / 2, h_ * h_ * 0.6180339887498949);
  grids_.resize(d.arcs().size());
  for (size_t ai = 0; ai < d.arcs().size(); ++ai) {
    const BoundaryArc& arc = d.arcs()[ai];
    ArcGrid gr;
    gr.arc_index = static_cast<int>(ai);
    const bool is_slit = arc.slit_index >= 0;
    const double spacing = is_slit ? h_ / 2 : outer_spacing;
    gr.jitter = !is_slit;
    if (arc.kind == BoundaryArc::Kind::Circle) {
      gr.wrap = true;
      gr.wrap_n = std::max<long long>(8, llround(arc.length / spacing));
      gr.spacing = arc.length / gr.wrap_n;
      gr.phase = kArcPhase;
    } else {
      gr.spacing = spacing;
      gr.phase = is_slit ? 0.0 : kArcPhase;
      double margin = h_ / 8;
      gr.kmin = llround(std::ceil(margin / gr.spacing - gr.phase + 0.5));
      gr.kmax = llround(std::floor((arc.length - margin) / gr.spacing - gr.phase - 0.5));
      if (gr.kmax < gr.kmin) gr.kmax = gr.kmin;
    }
    grids_[ai] = gr;
  }
  create_lattice_nodes();
  create_edges();
  if (g_.dim_ == 2) link_arc_neighbors();
  for (const MeshNode& n : g_.nodes_)
    if (n.role == NodeRole::Interior) ++g_.interior_count_;
  g_.build_reverse();
  check_connectivity();
  return std::make_shared<MeshGraph>(std::move(g_));
}

void MeshGraph::build_reverse() {
  in_.assign(nodes_.size(), {});
  for (int u = 0; u < static_cast<int>(nodes_.size()); ++u)
    for (const MeshEdge& e : out_[u]) in_[e.to].push_back({u, e.w, e.len});
}

std::vector<int> MeshGraph::boundary_nodes() const {
  std::vector<int> r;
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].role != NodeRole::Interior) r.push_back(i);
  return r;
}

std::vector<int> MeshGraph::interior_nodes() const {
  std::vector<int> r;
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].role == NodeRole::Interior) r.push_back(i);
  return r;
}

int MeshGraph::lattice_node(long long ix, long long iy, long long iz) const {
  auto it = lattice_map_.find(lattice_key(ix, iy, iz));
  return it == lattice_map_.end() ? -1 : it->second;
}

std::vector<int> MeshGraph::nearest_nodes(const Vec& p, double tol) const {
  double best = kInf;
  for (const MeshNode& n : nodes_) best = std::min(best, (n.pos - p).norm());
  std::vector<int> ids;
  for (int i = 0; i < size(); ++i)
    if ((nodes_[i].pos - p).norm() <= best + tol) ids.push_back(i);
  return ids;
}

int MeshGraph::nearest_interior_node(const Vec& p) const {
  double best = kInf;
  int id = -1;
  for (int i = 0; i < size(); ++i) {
    if (nodes_[i].role != NodeRole::Interior) continue;
    double d = (nodes_[i].pos - p).norm();
    if (d < best) {
      best = d;
      id = i;
    }
  }
  return id;
}

std::shared_ptr<const MeshGraph> MeshGraph::from_parts(
    std::vector<MeshNode> nodes, std::vector<std::vector<MeshEdge>> out) {
  MeshGraph g;
  g.nodes_ = std::move(nodes);
  g.out_ = std::move(out);
  g.h_ = 1.0;
  for (const MeshNode& n : g.nodes_)
    if (n.role == NodeRole::Interior) ++g.interior_count_;
  // defaults so path extraction and shortcutting work on hand-built graphs
  Vec lo{kInf, kInf}, hi{-kInf, -kInf};
  for (const MeshNode& n : g.nodes_) {
    lo.x = std::min(lo.x, n.pos.x - 1);
    lo.y = std::min(lo.y, n.pos.y - 1);
    hi.x = std::max(hi.x, n.pos.x + 1);
    hi.y = std::max(hi.y, n.pos.y + 1);
  }
  g.domain_ = std::make_shared<Domain>(Domain::rectangle(lo, hi));
  g.field_ = std::make_shared<ConvexField>(
      ConvexField::constant(ConvexSetInstance::ball(1.0)));
  g.build_reverse();
  return std::make_shared<MeshGraph>(std::move(g));
}

std::shared_ptr<const MeshGraph> reweight(const MeshGraph& graph, const ConvexField& field) {
  MeshGraph g = graph;
  g.field_ = std::make_shared<ConvexField>(field);
  for (int u = 0; u < g.size(); ++u) {
    const Vec& a = g.nodes_[u].pos;
    for (MeshEdge& e : g.out_[u]) {
      const Vec& b = g.nodes_[e.to].pos;
      Vec d = b - a;
      e.w = e.len * field.at((a + b) * 0.5).support(d / e.len);
    }
  }
  g.build_reverse();
  return std::make_shared<MeshGraph>(std::move(g));
}

std::shared_ptr<const MeshGraph> discretize(const Domain& domain, const ConvexField& field,
                                            double h, int stencil) {
  if (domain.dim() != field.dim() && !(domain.dim() == 2 && field.dim() == 3))
    throw std::invalid_argument("domain and field dimensions do not match");
  MeshBuilder b(domain, field, h, stencil);
  return b.build();
}

ScalarField::ScalarField(std::shared_ptr<const MeshGraph> graph, std::vector<double> values)
    : graph_(std::move(graph)), values_(std::move(values)) {
  if (!graph_ || static_cast<int>(values_.size()) != graph_->size())
    throw std::invalid_argument("field size does not match graph");
}

}  // namespace gradex

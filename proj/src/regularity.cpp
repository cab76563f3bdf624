#include "gradex/regularity.hpp"

#include <algorithm>
#include <cmath>

namespace gradex {

SecondDifferenceReport second_difference_constants(
    const ScalarField& u, const std::vector<int>& region,
    const std::vector<std::pair<int, int>>& offsets) {
  const MeshGraph& g = u.graph();
  const double h = g.spacing();
  SecondDifferenceReport rep;
  for (int id : region) {
    const MeshNode& n = g.node(id);
    if (!n.lattice) {
      rep.skipped += static_cast<int>(offsets.size());
      continue;
    }
    for (auto [dx, dy] : offsets) {
      int p = g.lattice_node(n.ix + dx, n.iy + dy, n.iz);
      int m = g.lattice_node(n.ix - dx, n.iy - dy, n.iz);
      if (p < 0 || m < 0) {
        ++rep.skipped;
        continue;
      }
      double step2 = (dx * double(dx) + dy * double(dy)) * h * h;
      double s = (u[p] + u[m] - 2.0 * u[id]) / step2;
      rep.c1 = std::max(rep.c1, s);
      rep.c2 = std::max(rep.c2, -s);
      ++rep.probes;
    }
  }
  return rep;
}

std::optional<Vec> central_gradient(const ScalarField& u, int node) {
  const MeshGraph& g = u.graph();
  const MeshNode& n = g.node(node);
  if (!n.lattice) return std::nullopt;
  int xp = g.lattice_node(n.ix + 1, n.iy, n.iz), xm = g.lattice_node(n.ix - 1, n.iy, n.iz);
  int yp = g.lattice_node(n.ix, n.iy + 1, n.iz), ym = g.lattice_node(n.ix, n.iy - 1, n.iz);
  if (xp < 0 || xm < 0 || yp < 0 || ym < 0) return std::nullopt;
  const double h = g.spacing();
  Vec grad{(u[xp] - u[xm]) / (2 * h), (u[yp] - u[ym]) / (2 * h), 0.0};
  if (g.dim() == 3) {
    int zp = g.lattice_node(n.ix, n.iy, n.iz + 1), zm = g.lattice_node(n.ix, n.iy, n.iz - 1);
    if (zp < 0 || zm < 0) return std::nullopt;
    grad.z = (u[zp] - u[zm]) / (2 * h);
  }
  return grad;
}

GradientReport gradient_on_uniqueness(const ScalarField& u, const UniquenessMask& mask,
                                      const ScalarField* splus, const ScalarField* sminus,
                                      const std::vector<int>* region) {
  const MeshGraph& g = u.graph();
  bool any = false;
  for (char c : mask.marked)
    if (c) {
      any = true;
      break;
    }
  if (!any) throw std::invalid_argument("uniqueness mask is empty");

  std::vector<char> in_region(g.size(), region ? 0 : 1);
  if (region)
    for (int id : *region) in_region[id] = 1;

  GradientReport rep;
  std::vector<int> grad_at(g.size(), -1);
  for (int id = 0; id < g.size(); ++id) {
    if (!mask[id] || !in_region[id] || g.node(id).role != NodeRole::Interior) continue;
    auto grad = central_gradient(u, id);
    if (!grad) continue;
    grad_at[id] = static_cast<int>(rep.gradients.size());
    rep.gradients.push_back({id, *grad});
    ++rep.evaluated;
    if (splus) {
      auto gp = central_gradient(*splus, id);
      if (gp) rep.max_dev_splus = std::max(rep.max_dev_splus, (*grad - *gp).norm());
    }
    if (sminus) {
      auto gm = central_gradient(*sminus, id);
      if (gm) rep.max_dev_sminus = std::max(rep.max_dev_sminus, (*grad - *gm).norm());
    }
  }
  // jumps between lattice-adjacent evaluated nodes
  for (auto& [id, grad] : rep.gradients) {
    const MeshNode& n = g.node(id);
    for (auto [dx, dy] : {std::pair{1, 0}, {0, 1}}) {
      int nb = g.lattice_node(n.ix + dx, n.iy + dy, n.iz);
      if (nb < 0 || grad_at[nb] < 0) continue;
      rep.max_jump =
          std::max(rep.max_jump, (grad - rep.gradients[grad_at[nb]].second).norm());
    }
  }
  return rep;
}

std::vector<int> nodes_in_box(const MeshGraph& g, const Vec& lo, const Vec& hi) {
  std::vector<int> ids;
  for (int i = 0; i < g.size(); ++i) {
    const MeshNode& n = g.node(i);
    if (n.role != NodeRole::Interior) continue;
    if (n.pos.x < lo.x || n.pos.x > hi.x || n.pos.y < lo.y || n.pos.y > hi.y) continue;
    if (g.dim() == 3 && (n.pos.z < lo.z || n.pos.z > hi.z)) continue;
    ids.push_back(i);
  }
  return ids;
}

}  // namespace gradex

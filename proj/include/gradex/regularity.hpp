#pragma once

#include <optional>
#include <utility>

#include "gradex/extensions.hpp"

namespace gradex {

struct SecondDifferenceReport {
  double c1 = 0.0;  // semiconcavity estimate: max (u(x+h)+u(x-h)-2u(x))/|h|^2, clipped at 0
  double c2 = 0.0;  // semiconvexity estimate: max -(same)/|h|^2, clipped at 0
  int probes = 0;
  int skipped = 0;  // probes whose stencil left the region / grid
};

// second-difference constants over a node region with lattice offsets
// (in units of the spacing); offsets exiting the grid are skipped and counted
SecondDifferenceReport second_difference_constants(
    const ScalarField& u, const std::vector<int>& region,
    const std::vector<std::pair<int, int>>& offsets);

struct GradientReport {
  int evaluated = 0;
  double max_jump = 0.0;        // max gradient difference between mask-adjacent nodes
  double max_dev_splus = 0.0;   // max |grad u - grad S+| over the mask
  double max_dev_sminus = 0.0;
  std::vector<std::pair<int, Vec>> gradients;  // node id, central-difference gradient
};

// central-difference gradients of u at masked nodes with a full axis stencil;
// optionally compares against S+ / S- gradients and restricts to a region.
// Throws when the mask is empty.
GradientReport gradient_on_uniqueness(const ScalarField& u, const UniquenessMask& mask,
                                      const ScalarField* splus = nullptr,
                                      const ScalarField* sminus = nullptr,
                                      const std::vector<int>* region = nullptr);

// interior lattice nodes inside an axis-aligned box
std::vector<int> nodes_in_box(const MeshGraph& g, const Vec& lo, const Vec& hi);

// central-difference gradient at a lattice node; nullopt without full stencil
std::optional<Vec> central_gradient(const ScalarField& u, int node);

}  // namespace gradex

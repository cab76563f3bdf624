#pragma once

#include <cmath>

namespace gradex {

// Frozen tolerance model for continuum comparisons on discretized results:
//   tol(h, stencil) = kMeshTolC * (h + theta^2)
// where theta is the worst half-gap between adjacent stencil directions.
// kMeshTolC was calibrated once on the unit-ball unit-square scenario
// (random interior pairs, h = 1/64, stencil 16) and is fixed here.
constexpr double kMeshTolC = 0.55;

inline double stencil_half_angle(int stencil) {
  switch (stencil) {
    case 8:
      return 0.39269908169872414;  // pi/8
    case 16:
      return 0.23182380450040307;  // atan(1/2) / 2
    default:
      return 0.39269908169872414;  // 26-neighbor 3-d smoke path
  }
}

inline double mesh_tolerance(double h, int stencil) {
  double th = stencil_half_angle(stencil);
  return kMeshTolC * (h + th * th);
}

// Uniqueness masks compare S+ - S- against eps = kUniquenessFactor * C_u * h.
// C_u was calibrated from the coincidence gap of the linear-datum scenario;
// the product stays below the 2h gap of genuinely non-unique neighbors.
constexpr double kUniquenessEpsC = 0.5;
constexpr double kUniquenessFactor = 3.0;

inline double uniqueness_eps(double h) { return kUniquenessFactor * kUniquenessEpsC * h; }

// default per-edge feasibility slack for candidate-solution validation
constexpr double kFeasibilityTol = 1e-9;

}  // namespace gradex

#pragma once

#include <memory>
#include <string>

#include "gradex/extensions.hpp"

namespace gradex {

// ---- whitelist supremands ----

// H(x, p) = |p| / f(x) with f positive and bounded away from 0
class ScaledNormSupremand : public Supremand {
 public:
  ScaledNormSupremand(ScalarExpr f, double f_min, double f_max);
  double eval(const Vec& x, const Vec& p) const override;
  bool one_homogeneous() const override { return true; }
  std::optional<ConvexSetInstance> sublevel(const Vec& x, double nu) const override;
  std::pair<double, double> sublevel_bounds(double nu) const override;
  std::optional<ConvexField> closed_level_field(double nu) const override;
  const ScalarExpr& f() const { return f_; }
  double f_min() const { return f_min_; }
  double f_max() const { return f_max_; }

 private:
  ScalarExpr f_;
  double f_min_, f_max_;
};

// H(x, p) = gauge of a fixed ellipsoid (x-independent, 1-homogeneous)
class EllipsoidGaugeSupremand : public Supremand {
 public:
  explicit EllipsoidGaugeSupremand(const Mat3& shape);
  double eval(const Vec& x, const Vec& p) const override;
  bool one_homogeneous() const override { return true; }
  std::optional<ConvexSetInstance> sublevel(const Vec& x, double nu) const override;
  std::pair<double, double> sublevel_bounds(double nu) const override;
  std::optional<ConvexField> closed_level_field(double nu) const override;
  const Mat3& shape() const { return shape_; }

 private:
  Mat3 shape_;
  ConvexSetInstance unit_;
};

// H(x, p) = gauge of a fixed polytope
class PolytopeGaugeSupremand : public Supremand {
 public:
  explicit PolytopeGaugeSupremand(std::vector<Vec> vertices);
  double eval(const Vec& x, const Vec& p) const override;
  bool one_homogeneous() const override { return true; }
  std::optional<ConvexSetInstance> sublevel(const Vec& x, double nu) const override;
  std::pair<double, double> sublevel_bounds(double nu) const override;
  std::optional<ConvexField> closed_level_field(double nu) const override;
  const std::vector<Vec>& vertices() const { return unit_.vertices(); }

 private:
  ConvexSetInstance unit_;
};

// User-tabulated 1-homogeneous gauge: a radial profile r(theta) sampled at
// increasing angles, interpolated piecewise-linearly. Convexity of the unit
// sublevel is spot-checked by sampling (the check is necessarily incomplete).
// Exercises the generic level-set evaluation path (no closed forms).
class TabulatedGaugeSupremand : public Supremand {
 public:
  TabulatedGaugeSupremand(std::vector<double> angles, std::vector<double> radii);
  double eval(const Vec& x, const Vec& p) const override;
  bool one_homogeneous() const override { return true; }
  std::pair<double, double> sublevel_bounds(double nu) const override;
  const std::vector<double>& angles() const { return angles_; }
  const std::vector<double>& radii() const { return radii_; }

 private:
  double radius_at(double theta) const;
  std::vector<double> angles_, radii_;
  double r_min_, r_max_;
};

// ---- supremal variational problem ----

// min over v = g on the boundary of ess-sup H(x, grad v); carries the domain
// discretization at the unit level for the 1-homogeneous fast path
class SupremalProblem {
 public:
  SupremalProblem(const Domain& domain, std::shared_ptr<const Supremand> h, ScalarExpr datum,
                  double spacing, int stencil);

  const Domain& domain() const { return *domain_; }
  const std::shared_ptr<const Supremand>& supremand() const { return h_; }
  const ScalarExpr& datum() const { return datum_; }
  double spacing() const { return spacing_; }
  int stencil() const { return stencil_; }

  // graph weighted with the level-1 constraint field (built on first use)
  std::shared_ptr<const MeshGraph> base_graph() const;

 private:
  void validate_assumptions() const;

  std::shared_ptr<const Domain> domain_;
  std::shared_ptr<const Supremand> h_;
  ScalarExpr datum_;
  double spacing_;
  int stencil_;
  mutable std::shared_ptr<const MeshGraph> base_graph_;
};

// constraint field K_nu(x) = {p : H(x, p) <= nu}
ConvexField level_set_field(const std::shared_ptr<const Supremand>& h, double nu);

struct LevelRecord {
  struct Step {
    double nu = 0.0;
    bool admissible = false;
    double margin = 0.0;
  };
  std::vector<Step> steps;
  bool fast_path = false;
  bool cross_check_ok = true;
};

struct MuResult {
  double mu = 0.0;
  LevelRecord record;
  std::string warning;  // non-empty when certification is limited by the mesh
};

// smallest level nu in [nu_lo, nu_hi] (within tol) whose induced distance
// makes the datum admissible; monotone bisection. Throws ModelError when
// nu_hi itself is inadmissible.
MuResult optimal_mu(const SupremalProblem& problem, double tol, double nu_lo, double nu_hi);

// inf{nu : u(x) - u(x0) <= d_nu(x0, x) for all mesh nodes x in B(x0, r)}
double local_mu(const ScalarField& u, int x0, double r, const SupremalProblem& problem);

struct PointwiseH {
  double value = 0.0;                              // at the smallest radius
  std::vector<std::pair<double, double>> ladder;   // (r, mu(x0, r))
};

// pointwise level H(x0, grad u)(x0) = inf over r of mu(x0, r), evaluated on
// a decreasing radius ladder (monotone by construction)
PointwiseH pointwise_h(const ScalarField& u, int x0, const SupremalProblem& problem,
                       std::vector<double> r_ladder);

struct AttainmentMask {
  std::vector<char> marked;   // pointwise level within eps of mu
  std::vector<char> defined;  // nodes with an admissible radius (r < dist to boundary)
  double eps = 0.0, radius = 0.0;
  int marked_count = 0, defined_count = 0;
};

// nodes where the pointwise level reaches mu - eps, probed at radius r
// (defaults to 4h)
AttainmentMask attainment_set(const ScalarField& u, const SupremalProblem& problem,
                              double mu, double eps, double r = 0.0);

}  // namespace gradex

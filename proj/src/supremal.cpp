#include "gradex/supremal.hpp"

#include <algorithm>
#include <cmath>

namespace gradex {

// ---- ScaledNormSupremand ----

ScaledNormSupremand::ScaledNormSupremand(ScalarExpr f, double f_min, double f_max)
    : f_(std::move(f)), f_min_(f_min), f_max_(f_max) {
  if (!(f_min > 0.0) || !(f_max >= f_min))
    throw std::invalid_argument("scaled norm needs 0 < f_min <= f_max");
}

double ScaledNormSupremand::eval(const Vec& x, const Vec& p) const {
  double f = f_.eval(x);
  if (!(f > 0.0)) throw ModelError("scaled-norm profile is not positive");
  return p.norm() / f;
}

std::optional<ConvexSetInstance> ScaledNormSupremand::sublevel(const Vec& x,
                                                               double nu) const {
  return ConvexSetInstance::ball(nu * f_.eval(x));
}

std::pair<double, double> ScaledNormSupremand::sublevel_bounds(double nu) const {
  return {nu * f_min_, nu * f_max_};
}

std::optional<ConvexField> ScaledNormSupremand::closed_level_field(double nu) const {
  return ConvexField::scaled(ConvexSetInstance::ball(nu), f_, f_min_, f_max_);
}

// ---- EllipsoidGaugeSupremand ----

EllipsoidGaugeSupremand::EllipsoidGaugeSupremand(const Mat3& shape)
    : shape_(shape), unit_(ConvexSetInstance::ellipsoid(shape)) {}

double EllipsoidGaugeSupremand::eval(const Vec&, const Vec& p) const {
  return unit_.gauge(p);
}

std::optional<ConvexSetInstance> EllipsoidGaugeSupremand::sublevel(const Vec&,
                                                                   double nu) const {
  return unit_.scaled(nu);
}

std::pair<double, double> EllipsoidGaugeSupremand::sublevel_bounds(double nu) const {
  return {nu * unit_.alpha(), nu * unit_.bound_M()};
}

std::optional<ConvexField> EllipsoidGaugeSupremand::closed_level_field(double nu) const {
  return ConvexField::constant(unit_.scaled(nu));
}

// ---- PolytopeGaugeSupremand ----

PolytopeGaugeSupremand::PolytopeGaugeSupremand(std::vector<Vec> vertices)
    : unit_(ConvexSetInstance::polytope(std::move(vertices))) {}

double PolytopeGaugeSupremand::eval(const Vec&, const Vec& p) const {
  return unit_.gauge(p);
}

std::optional<ConvexSetInstance> PolytopeGaugeSupremand::sublevel(const Vec&,
                                                                  double nu) const {
  return unit_.scaled(nu);
}

std::pair<double, double> PolytopeGaugeSupremand::sublevel_bounds(double nu) const {
  return {nu * unit_.alpha(), nu * unit_.bound_M()};
}

std::optional<ConvexField> PolytopeGaugeSupremand::closed_level_field(double nu) const {
  return ConvexField::constant(unit_.scaled(nu));
}

// ---- TabulatedGaugeSupremand ----

TabulatedGaugeSupremand::TabulatedGaugeSupremand(std::vector<double> angles,
                                                 std::vector<double> radii)
    : angles_(std::move(angles)), radii_(std::move(radii)) {
  if (angles_.size() != radii_.size() || angles_.size() < 3)
    throw std::invalid_argument("tabulated gauge needs >= 3 (angle, radius) samples");
  for (size_t i = 1; i < angles_.size(); ++i)
    if (!(angles_[i] > angles_[i - 1]))
      throw std::invalid_argument("tabulated angles must increase");
  if (angles_.front() < 0.0 || angles_.back() >= 2 * M_PI)
    throw std::invalid_argument("tabulated angles must lie in [0, 2*pi)");
  r_min_ = kInf;
  r_max_ = 0.0;
  for (double r : radii_) {
    if (!(r > 0.0)) throw std::invalid_argument("tabulated radii must be positive");
    r_min_ = std::min(r_min_, r);
    r_max_ = std::max(r_max_, r);
  }
  // convexity spot-check of the unit sublevel (sampled; incomplete by nature)
  const int n = 720;
  auto bpoint = [&](double th) { return unit_angle(th) * radius_at(th); };
  for (int i = 0; i < n; ++i) {
    Vec p1 = bpoint(2 * M_PI * i / n);
    Vec p2 = bpoint(2 * M_PI * ((i + 37) % n) / n);
    Vec mid = (p1 + p2) * 0.5;
    if (eval({}, mid) > 1.0 + 1e-6)
      throw ModelError("tabulated profile fails the sampled convexity check");
  }
}

double TabulatedGaugeSupremand::radius_at(double theta) const {
  theta = std::fmod(theta, 2 * M_PI);
  if (theta < 0) theta += 2 * M_PI;
  auto it = std::upper_bound(angles_.begin(), angles_.end(), theta);
  size_t hi = it - angles_.begin();
  size_t lo = (hi == 0 || hi == angles_.size()) ? angles_.size() - 1 : hi - 1;
  double a0 = angles_[lo], a1, r0 = radii_[lo], r1;
  if (hi == angles_.size() || hi == 0) {
    // wrap segment between the last and first samples
    a1 = angles_.front() + 2 * M_PI;
    r1 = radii_.front();
    if (theta < a0) theta += 2 * M_PI;
  } else {
    a1 = angles_[hi];
    r1 = radii_[hi];
  }
  double t = (theta - a0) / (a1 - a0);
  return r0 + t * (r1 - r0);
}

double TabulatedGaugeSupremand::eval(const Vec&, const Vec& p) const {
  double n = std::sqrt(p.x * p.x + p.y * p.y);
  if (n == 0.0) return 0.0;
  return n / radius_at(std::atan2(p.y, p.x));
}

std::pair<double, double> TabulatedGaugeSupremand::sublevel_bounds(double nu) const {
  return {nu * r_min_, nu * r_max_};
}

// ---- level-set field ----

ConvexField level_set_field(const std::shared_ptr<const Supremand>& h, double nu) {
  if (!h) throw std::invalid_argument("null supremand");
  if (!(nu > 0.0))
    throw std::invalid_argument("level must be positive (the zero level collapses to {0})");
  if (auto closed = h->closed_level_field(nu)) return *closed;
  return ConvexField::level_set(h, nu);
}

// ---- SupremalProblem ----

SupremalProblem::SupremalProblem(const Domain& domain, std::shared_ptr<const Supremand> h,
                                 ScalarExpr datum, double spacing, int stencil)
    : domain_(std::make_shared<Domain>(domain)),
      h_(std::move(h)),
      datum_(std::move(datum)),
      spacing_(spacing),
      stencil_(stencil) {
  if (!h_) throw std::invalid_argument("null supremand");
  validate_assumptions();
}

void SupremalProblem::validate_assumptions() const {
  // sampled checks of the structural assumptions on H
  Vec lo = domain_->bbox_lo(), hi = domain_->bbox_hi();
  std::vector<Vec> xs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      xs.push_back({lo.x + (hi.x - lo.x) * (i + 0.5) / 4, lo.y + (hi.y - lo.y) * (j + 0.5) / 4});
  for (const Vec& x : xs) {
    if (std::abs(h_->eval(x, {0, 0})) > 1e-12)
      throw ModelError("supremand violates H(x, 0) = 0");
    for (int k = 0; k < 16; ++k) {
      Vec p = unit_angle(2 * M_PI * k / 16) * (0.3 + 0.2 * k);
      if (h_->eval(x, p) < -1e-12) throw ModelError("supremand is negative");
    }
    // sublevel convexity at a probe level: midpoints of sublevel points stay in
    double lvl = 1.0;
    auto inside = [&](const Vec& p) { return h_->eval(x, p) <= lvl; };
    for (int k = 0; k < 16; ++k) {
      Vec u1 = unit_angle(2 * M_PI * k / 16), u2 = unit_angle(2 * M_PI * (k + 5) / 16);
      // scale to just inside along each ray by bisection
      auto to_boundary = [&](Vec u) {
        double t_lo = 0, t_hi = 1e3;
        for (int it = 0; it < 60; ++it) {
          double m = 0.5 * (t_lo + t_hi);
          (inside(u * m) ? t_lo : t_hi) = m;
        }
        return u * t_lo;
      };
      Vec p1 = to_boundary(u1), p2 = to_boundary(u2);
      if (!inside((p1 + p2) * 0.5))
        throw ModelError("supremand sublevel failed the sampled convexity check");
    }
  }
  // uniform coercivity at test levels
  for (double lvl : {0.5, 1.0, 2.0}) {
    auto [a, m] = h_->sublevel_bounds(lvl);
    if (!(a > 0.0) || !(m < kInf))
      throw ModelError("supremand is not uniformly coercive at the test levels");
  }
}

std::shared_ptr<const MeshGraph> SupremalProblem::base_graph() const {
  if (!base_graph_)
    base_graph_ = discretize(*domain_, level_set_field(h_, 1.0), spacing_, stencil_);
  return base_graph_;
}

// ---- optimal level ----

namespace {

// pairwise admissibility margin evaluator with the 1-homogeneous fast path:
// base distances are computed once and scaled by nu
class MarginEvaluator {
 public:
  MarginEvaluator(const SupremalProblem& problem) : problem_(problem) {
    base_ = problem.base_graph();
    boundary_ = base_->boundary_nodes();
    gvals_.resize(boundary_.size());
    for (size_t i = 0; i < boundary_.size(); ++i)
      gvals_[i] = problem.datum().eval(base_->node(boundary_[i]).pos);
    const int max_sources = 96;
    if (static_cast<int>(boundary_.size()) <= max_sources) {
      for (size_t i = 0; i < boundary_.size(); ++i) sources_.push_back(static_cast<int>(i));
    } else {
      double stride = double(boundary_.size()) / max_sources;
      for (int k = 0; k < max_sources; ++k) sources_.push_back(static_cast<int>(k * stride));
      size_t imin = 0, imax = 0;
      for (size_t i = 0; i < gvals_.size(); ++i) {
        if (gvals_[i] < gvals_[imin]) imin = i;
        if (gvals_[i] > gvals_[imax]) imax = i;
      }
      sources_.push_back(static_cast<int>(imin));
      sources_.push_back(static_cast<int>(imax));
      std::sort(sources_.begin(), sources_.end());
      sources_.erase(std::unique(sources_.begin(), sources_.end()), sources_.end());
    }
    if (problem.supremand()->one_homogeneous()) {
      base_dists_.reserve(sources_.size());
      for (int si : sources_) {
        auto dist = dijkstra(*base_, boundary_[si]);
        std::vector<double> row(boundary_.size());
        for (size_t j = 0; j < boundary_.size(); ++j) row[j] = dist[boundary_[j]];
        base_dists_.push_back(std::move(row));
      }
    }
  }

  bool fast() const { return !base_dists_.empty(); }

  // max over pairs of g(y2) - g(y1) - d_nu(y1, y2)
  double margin(double nu) const {
    if (fast()) {
      double worst = -kInf;
      for (size_t s = 0; s < sources_.size(); ++s) {
        int si = sources_[s];
        for (size_t j = 0; j < boundary_.size(); ++j)
          worst = std::max(worst, gvals_[j] - gvals_[si] - nu * base_dists_[s][j]);
      }
      return worst;
    }
    return full_margin(nu);
  }

  // margin with fully recomputed edge weights at this level
  double full_margin(double nu) const {
    auto g = reweight(*base_, level_set_field(problem_.supremand(), nu));
    double worst = -kInf;
    for (int si : sources_) {
      auto dist = dijkstra(*g, boundary_[si]);
      for (size_t j = 0; j < boundary_.size(); ++j)
        worst = std::max(worst, gvals_[j] - gvals_[si] - dist[boundary_[j]]);
    }
    return worst;
  }

  double tolerance() const {
    return mesh_tolerance(base_->spacing(), base_->stencil());
  }

 private:
  const SupremalProblem& problem_;
  std::shared_ptr<const MeshGraph> base_;
  std::vector<int> boundary_;
  std::vector<double> gvals_;
  std::vector<int> sources_;
  std::vector<std::vector<double>> base_dists_;
};

}  // namespace

MuResult optimal_mu(const SupremalProblem& problem, double tol, double nu_lo, double nu_hi) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(nu_lo > 0.0) || !(nu_hi > nu_lo))
    throw std::invalid_argument("bracket must satisfy 0 < nu_lo < nu_hi");
  MarginEvaluator eval(problem);
  MuResult res;
  res.record.fast_path = eval.fast();

  // graph distances overestimate the continuum distance, so a datum that is
  // admissible in the continuum has margin <= 0 on the graph; no extra slack
  const double slack = 1e-12;
  auto admissible = [&](double nu) {
    double m = eval.margin(nu);
    res.record.steps.push_back({nu, m <= slack, m});
    return m <= slack;
  };

  if (!admissible(nu_hi))
    throw ModelError("datum inadmissible at the bracket top; enlarge [nu_lo, nu_hi]");
  double lo = nu_lo, hi = nu_hi;
  if (admissible(nu_lo)) {
    hi = nu_lo;  // admissible at the floor: mu collapses to the bracket start
  } else {
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      if (admissible(mid))
        hi = mid;
      else
        lo = mid;
    }
  }
  res.mu = hi;

  // fast-path cross-check: rescaled base distances must reproduce the fully
  // recomputed margins at two levels
  if (eval.fast()) {
    bool ok = true;
    for (double nu : {res.mu, std::max(nu_lo, 0.5 * res.mu)}) {
      double m_fast = eval.margin(nu);
      double m_full = eval.full_margin(nu);
      if (std::abs(m_fast - m_full) > 1e-9 * (1.0 + std::abs(m_fast))) ok = false;
    }
    res.record.cross_check_ok = ok;
    if (!ok) res.warning = "fast-path cross-check disagrees with full recomputation";
  }
  if (tol < mesh_tolerance(problem.spacing(), problem.stencil()) && res.warning.empty())
    res.warning = "bisection tolerance is below the mesh resolution; mu certified to O(h)";
  return res;
}

double local_mu(const ScalarField& u, int x0, double r, const SupremalProblem& problem) {
  // distances come from the problem's level-1 graph; u must share its node
  // layout (it may live on a reweighted copy of the same discretization)
  const MeshGraph& g = *problem.base_graph();
  if (u.size() != g.size())
    throw std::invalid_argument("field does not match the problem discretization");
  const double h = g.spacing();
  if (r < 2 * h) throw GeometryError("radius below mesh resolution");
  if (g.node(x0).role != NodeRole::Interior)
    throw std::invalid_argument("x0 must be an interior node");
  const Vec c = g.node(x0).pos;
  if (r >= problem.domain().distance_to_boundary(c))
    throw GeometryError("radius reaches the boundary; no admissible r at this node");

  std::vector<int> ball;
  for (int i = 0; i < g.size(); ++i)
    if (i != x0 && (g.node(i).pos - c).norm() <= r) ball.push_back(i);
  if (ball.empty()) throw GeometryError("no mesh nodes inside the probe ball");

  if (problem.supremand()->one_homogeneous()) {
    auto [a1, m1] = problem.supremand()->sublevel_bounds(1.0);
    auto dist = dijkstra(g, x0, false, false, m1 * r * 2 + 6 * h * m1);
    double mu = 0.0;
    for (int i : ball)
      if (dist[i] > 0 && std::isfinite(dist[i]))
        mu = std::max(mu, (u[i] - u[x0]) / dist[i]);
    return mu;
  }
  // general supremand: bisection over nu with per-level reweighted distances
  auto predicate = [&](double nu) {
    auto gr = reweight(g, level_set_field(problem.supremand(), nu));
    auto dist = dijkstra(*gr, x0);
    for (int i : ball)
      if (u[i] - u[x0] > dist[i] + 1e-12) return false;
    return true;
  };
  double lo = 1e-9, hi = 1.0;
  int guard = 0;
  while (!predicate(hi)) {
    hi *= 2;
    if (++guard > 40) throw ModelError("local level not bracketable");
  }
  if (predicate(lo)) return lo;
  while (hi - lo > 1e-4 * hi) {
    double mid = 0.5 * (lo + hi);
    (predicate(mid) ? hi : lo) = mid;
  }
  return hi;
}

PointwiseH pointwise_h(const ScalarField& u, int x0, const SupremalProblem& problem,
                       std::vector<double> r_ladder) {
  if (r_ladder.empty()) throw std::invalid_argument("empty radius ladder");
  for (size_t i = 1; i < r_ladder.size(); ++i)
    if (!(r_ladder[i] < r_ladder[i - 1]))
      throw std::invalid_argument("radius ladder must decrease");
  PointwiseH out;
  double prev = kInf;
  for (double r : r_ladder) {
    double mu = local_mu(u, x0, r, problem);
    if (mu > prev + 1e-9)
      throw ModelError("local level failed to be monotone in the radius");
    prev = mu;
    out.ladder.push_back({r, mu});
  }
  out.value = out.ladder.back().second;
  return out;
}

AttainmentMask attainment_set(const ScalarField& u, const SupremalProblem& problem,
                              double mu, double eps, double r) {
  const MeshGraph& g = *problem.base_graph();
  if (u.size() != g.size())
    throw std::invalid_argument("field does not match the problem discretization");
  const double h = g.spacing();
  if (r <= 0.0) r = 4 * h;
  AttainmentMask m;
  m.eps = eps;
  m.radius = r;
  m.marked.assign(g.size(), 0);
  m.defined.assign(g.size(), 0);
  for (int i = 0; i < g.size(); ++i) {
    if (g.node(i).role != NodeRole::Interior) continue;
    if (problem.domain().distance_to_boundary(g.node(i).pos) <= r) continue;
    m.defined[i] = 1;
    ++m.defined_count;
    double level = local_mu(u, i, r, problem);
    if (level >= mu - eps) {
      m.marked[i] = 1;
      ++m.marked_count;
    }
  }
  return m;
}

}  // namespace gradex

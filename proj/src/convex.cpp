#include "gradex/convex.hpp"

#include <algorithm>
#include <cmath>

namespace gradex {

std::optional<ConvexSetInstance> Supremand::sublevel(const Vec&, double) const {
  return std::nullopt;
}

std::optional<ConvexField> Supremand::closed_level_field(double) const {
  return std::nullopt;
}

namespace {

// counter-clockwise convex hull (monotone chain), collinear points dropped
std::vector<Vec> convex_hull(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return a.lex_less(b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const int n = static_cast<int>(pts.size());
  if (n < 3) throw std::invalid_argument("polytope needs at least 3 distinct vertices");
  std::vector<Vec> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross2(pts[i] - hull[k - 2]) <= 1e-14)
      --k;
    hull[k++] = pts[i];
  }
  for (int i = n - 2, lo = k + 1; i >= 0; --i) {
    while (k >= lo && (hull[k - 1] - hull[k - 2]).cross2(pts[i] - hull[k - 2]) <= 1e-14)
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw std::invalid_argument("polytope vertices are collinear");
  return hull;
}

// monotone bisection for the level-set gauge: smallest t with H(x, p/t) <= nu
double level_set_gauge(const Supremand& h, const Vec& x, double nu, const Vec& p,
                       double alpha, double M) {
  double pn = p.norm();
  if (pn == 0.0) return 0.0;
  double lo = 0.5 * pn / M;   // p/lo outside K
  double hi = 2.0 * pn / alpha;  // p/hi inside K
  if (!(h.eval(x, p / hi) <= nu)) {
    // bounds too tight for this instance; expand
    int guard = 0;
    while (!(h.eval(x, p / hi) <= nu)) {
      hi *= 2.0;
      if (++guard > 60)
        throw ModelError("level-set gauge not bracketable; supremand is not coercive");
    }
  }
  if (h.eval(x, p / lo) <= nu) {
    int guard = 0;
    while (h.eval(x, p / lo) <= nu) {
      lo *= 0.5;
      if (++guard > 60) return 0.0;  // p is in every scaled copy; degenerate
    }
  }
  while (hi - lo > 1e-10 * hi) {
    double mid = 0.5 * (lo + hi);
    if (h.eval(x, p / mid) <= nu)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// golden-section maximization of f over [a, b] (f unimodal there)
template <typename F>
double golden_max(F&& f, double a, double b, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    }
  }
  return 0.5 * (a + b);
}

// deterministic Fibonacci sphere directions for d = 3 searches
std::vector<Vec> fibonacci_sphere(int n) {
  std::vector<Vec> dirs;
  dirs.reserve(n);
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double zc = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    double th = ga * i;
    dirs.push_back({r * std::cos(th), r * std::sin(th), zc});
  }
  return dirs;
}

}  // namespace

// ---- ConvexSetInstance ----

ConvexSetInstance ConvexSetInstance::ball(double radius, int dim) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (dim != 2 && dim != 3) throw std::invalid_argument("ball dim must be 2 or 3");
  ConvexSetInstance k;
  k.kind_ = SetKind::Ball;
  k.radius_ = radius;
  k.alpha_ = radius;
  k.M_ = radius;
  k.dim_ = dim;
  return k;
}

ConvexSetInstance ConvexSetInstance::ellipsoid(const Mat3& shape, int dim) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("ellipsoid dim must be 2 or 3");
  Mat3 a = shape;
  if (dim == 2) {
    a(0, 2) = a(2, 0) = a(1, 2) = a(2, 1) = 0.0;
    a(2, 2) = 1.0;
  }
  if (!a.symmetric(1e-10)) throw std::invalid_argument("shape matrix must be symmetric");
  if (!a.positive_definite())
    throw std::invalid_argument("shape matrix must be positive definite");
  ConvexSetInstance k;
  k.kind_ = SetKind::Ellipsoid;
  k.dim_ = dim;
  k.shape_ = a;
  k.shape_inv_ = a.inverse();
  // support in direction u is sqrt(u^T A u); the extremes over the sphere
  // are the square roots of the extreme eigenvalues
  if (dim == 2) {
    double tr2 = 0.5 * (a(0, 0) + a(1, 1));
    double disc = std::sqrt(std::max(0.0, 0.25 * (a(0, 0) - a(1, 1)) * (a(0, 0) - a(1, 1)) +
                                              a(0, 1) * a(0, 1)));
    k.alpha_ = std::sqrt(std::max(1e-300, tr2 - disc));
    k.M_ = std::sqrt(tr2 + disc);
  } else {
    double lo = kInf, hi = 0.0;
    for (const Vec& u : fibonacci_sphere(4096)) {
      double s = std::sqrt(a.quad(u));
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    k.alpha_ = lo * 0.995;
    k.M_ = hi * 1.005;
  }
  return k;
}

ConvexSetInstance ConvexSetInstance::polytope(std::vector<Vec> vertices) {
  for (const Vec& v : vertices)
    if (v.z != 0.0) throw std::invalid_argument("polytope sets are 2-d");
  ConvexSetInstance k;
  k.kind_ = SetKind::Polytope;
  k.dim_ = 2;
  k.hull_ = convex_hull(vertices);
  k.vertices_ = std::move(vertices);
  const int m = static_cast<int>(k.hull_.size());
  double alpha = kInf, M = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vec& a = k.hull_[i];
    const Vec& b = k.hull_[(i + 1) % m];
    Vec edge = b - a;
    Vec n = Vec{edge.y, -edge.x}.normalized();  // outward for ccw hull
    double c = n.dot(a);
    if (c <= 1e-12)
      throw std::invalid_argument("polytope hull must contain the origin strictly");
    k.hull_normals_.push_back(n);
    k.hull_offsets_.push_back(c);
    alpha = std::min(alpha, c);
    M = std::max(M, a.norm());
  }
  k.alpha_ = alpha;
  k.M_ = M;
  return k;
}

ConvexSetInstance ConvexSetInstance::level_set(std::shared_ptr<const Supremand> h,
                                               const Vec& x, double nu) {
  if (!h) throw std::invalid_argument("null supremand");
  if (!(nu > 0.0)) throw std::invalid_argument("level must be positive");
  if (auto closed = h->sublevel(x, nu)) return *closed;
  ConvexSetInstance k;
  k.kind_ = SetKind::LevelSet;
  k.dim_ = h->dim();
  auto [a, m] = h->sublevel_bounds(nu);
  if (!(a > 0.0) || !(m < kInf))
    throw ModelError("supremand sublevel violates the uniform ball bounds");
  k.alpha_ = a;
  k.M_ = m;
  k.h_ = std::move(h);
  k.level_x_ = x;
  k.level_ = nu;
  return k;
}

ConvexSetInstance ConvexSetInstance::scaled(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("scale must be positive");
  ConvexSetInstance k = *this;
  k.scale_ *= s;
  k.alpha_ *= s;
  k.M_ *= s;
  return k;
}

double ConvexSetInstance::gauge(const Vec& p) const {
  if (dim_ == 2 && p.z != 0.0) throw std::invalid_argument("2-d set probed with 3-d vector");
  double g;
  switch (kind_) {
    case SetKind::Ball:
      g = p.norm() / radius_;
      break;
    case SetKind::Ellipsoid:
      g = std::sqrt(std::max(0.0, shape_inv_.quad(p)));
      break;
    case SetKind::Polytope: {
      g = 0.0;
      for (size_t i = 0; i < hull_normals_.size(); ++i)
        g = std::max(g, hull_normals_[i].dot(p) / hull_offsets_[i]);
      break;
    }
    case SetKind::LevelSet:
      return level_set_gauge(*h_, level_x_, level_, p, alpha_ / scale_, M_ / scale_) /
             scale_;
  }
  return g / scale_;
}

double ConvexSetInstance::support(const Vec& q) const {
  if (dim_ == 2 && q.z != 0.0) throw std::invalid_argument("2-d set probed with 3-d vector");
  switch (kind_) {
    case SetKind::Ball:
      return scale_ * radius_ * q.norm();
    case SetKind::Ellipsoid:
      return scale_ * std::sqrt(std::max(0.0, shape_.quad(q)));
    case SetKind::Polytope: {
      double s = -kInf;
      for (const Vec& v : hull_) s = std::max(s, v.dot(q));
      return scale_ * s;
    }
    case SetKind::LevelSet: {
      double qn = q.norm();
      if (qn == 0.0) return 0.0;
      if (dim_ == 2) {
        // maximize (u . q) / gauge(u) over unit directions u: coarse scan
        // then golden-section refinement around the best angle
        auto val = [&](double th) {
          Vec u = unit_angle(th);
          return u.dot(q) / gauge(u);
        };
        const int n = 128;
        double best = 0.0, bestv = -kInf;
        double qa = std::atan2(q.y, q.x);
        for (int i = 0; i < n; ++i) {
          double th = qa - M_PI / 2 + M_PI * i / (n - 1);  // support max lies in this half
          double v = val(th);
          if (v > bestv) {
            bestv = v;
            best = th;
          }
        }
        double w = M_PI / (n - 1);
        double th = golden_max(val, best - w, best + w, 1e-8);
        return std::max(val(th), bestv);
      }
      // d = 3: multi-start local ascent over the sphere
      double bestv = -kInf;
      Vec bestu;
      for (const Vec& u : fibonacci_sphere(512)) {
        double v = u.dot(q) / gauge(u);
        if (v > bestv) {
          bestv = v;
          bestu = u;
        }
      }
      double step = 0.2;
      while (step > 1e-9) {
        bool improved = false;
        for (const Vec& d : {Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1},
                             Vec{-1, 0, 0}, Vec{0, -1, 0}, Vec{0, 0, -1}}) {
          Vec u = (bestu + d * step).normalized();
          double v = u.dot(q) / gauge(u);
          if (v > bestv) {
            bestv = v;
            bestu = u;
            improved = true;
          }
        }
        if (!improved) step *= 0.5;
      }
      return bestv;
    }
  }
  throw std::logic_error("unreachable set kind");
}

Vec ConvexSetInstance::support_argmax(const Vec& q) const {
  if (q.norm() == 0.0)
    throw std::invalid_argument("support argmax undefined for q = 0 (whole set optimal)");
  switch (kind_) {
    case SetKind::Ball:
      return q.normalized() * (scale_ * radius_);
    case SetKind::Ellipsoid: {
      Vec aq = shape_.mul(q);
      double s = std::sqrt(std::max(1e-300, shape_.quad(q)));
      Vec p = aq / s * scale_;
      if (dim_ == 2) p.z = 0.0;
      return p;
    }
    case SetKind::Polytope: {
      double best = -kInf;
      for (const Vec& v : hull_) best = std::max(best, v.dot(q));
      const double tol = 1e-12 * (1.0 + std::abs(best));
      const Vec* pick = nullptr;
      for (const Vec& v : vertices_) {
        if (v.dot(q) >= best - tol && (!pick || v.lex_less(*pick))) pick = &v;
      }
      return *pick * scale_;
    }
    case SetKind::LevelSet: {
      if (dim_ == 2) {
        auto val = [&](double th) {
          Vec u = unit_angle(th);
          return u.dot(q) / gauge(u);
        };
        const int n = 256;
        double best = 0.0, bestv = -kInf;
        double qa = std::atan2(q.y, q.x);
        for (int i = 0; i < n; ++i) {
          double th = qa - M_PI / 2 + M_PI * i / (n - 1);
          double v = val(th);
          if (v > bestv) {
            bestv = v;
            best = th;
          }
        }
        double w = M_PI / (n - 1);
        double th = golden_max(val, best - w, best + w, 1e-9);
        if (val(th) < bestv) th = best;
        Vec u = unit_angle(th);
        return u / gauge(u);
      }
      // d = 3: reuse the support search direction
      double bestv = -kInf;
      Vec bestu;
      for (const Vec& u : fibonacci_sphere(2048)) {
        double v = u.dot(q) / gauge(u);
        if (v > bestv) {
          bestv = v;
          bestu = u;
        }
      }
      return bestu / gauge(bestu);
    }
  }
  throw std::logic_error("unreachable set kind");
}

void ConvexSetInstance::validate(int directions) const {
  std::vector<Vec> dirs;
  if (dim_ == 2)
    for (int i = 0; i < directions; ++i) dirs.push_back(unit_angle(2 * M_PI * i / directions));
  else
    dirs = fibonacci_sphere(directions);
  std::vector<double> g(dirs.size());
  for (size_t i = 0; i < dirs.size(); ++i) {
    g[i] = gauge(dirs[i]);
    if (!(g[i] >= 1.0 / M_ - 1e-9) || !(g[i] <= 1.0 / alpha_ + 1e-9))
      throw ModelError("set instance violates its (alpha, M) bounds");
    if (!(support(dirs[i]) < kInf)) throw ModelError("set instance is not compact");
  }
  // convexity spot-check: midpoints of well-separated boundary points stay inside
  const size_t n = dirs.size();
  for (size_t i = 0; i < n; i += 7) {
    size_t j = (i + n / 3) % n;
    Vec p1 = dirs[i] / g[i];
    Vec p2 = dirs[j] / g[j];
    if (gauge((p1 + p2) * 0.5) > 1.0 + 1e-7)
      throw ModelError("set instance failed the convexity spot-check");
  }
}

// ---- ConvexField ----

ConvexField ConvexField::constant(ConvexSetInstance base) {
  base.validate();
  ConvexField f;
  f.alpha_ = base.alpha();
  f.M_ = base.bound_M();
  f.dim_ = base.dim();
  f.base_ = std::move(base);
  return f;
}

ConvexField ConvexField::scaled(ConvexSetInstance base, ScalarExpr scale, double scale_min,
                                double scale_max) {
  if (!(scale_min > 0.0) || !(scale_max >= scale_min))
    throw std::invalid_argument("scale bounds must satisfy 0 < min <= max");
  base.validate();
  ConvexField f;
  f.alpha_ = base.alpha() * scale_min;
  f.M_ = base.bound_M() * scale_max;
  f.dim_ = base.dim();
  f.base_ = std::move(base);
  f.scale_ = std::move(scale);
  f.scale_min_ = scale_min;
  f.scale_max_ = scale_max;
  return f;
}

ConvexField ConvexField::level_set(std::shared_ptr<const Supremand> h, double nu) {
  if (!h) throw std::invalid_argument("null supremand");
  if (!(nu > 0.0)) throw std::invalid_argument("level must be positive (K_0 = {0})");
  ConvexField f;
  auto [a, m] = h->sublevel_bounds(nu);
  if (!(a > 0.0) || !(m < kInf))
    throw ModelError("supremand sublevel violates the uniform ball bounds");
  f.alpha_ = a;
  f.M_ = m;
  f.dim_ = h->dim();
  f.h_ = std::move(h);
  f.nu_ = nu;
  return f;
}

const ConvexSetInstance& ConvexField::base_instance() const {
  if (!base_) throw std::logic_error("level-set field has no base instance");
  return *base_;
}

ConvexSetInstance ConvexField::at(const Vec& x) const {
  if (h_) return ConvexSetInstance::level_set(h_, x, nu_);
  if (!scale_) return *base_;
  double s = scale_->eval(x);
  if (!(s > 0.0)) throw ModelError("field scale expression is not positive");
  return base_->scaled(s);
}

void ConvexField::validate_over(const std::vector<Vec>& positions, int directions) const {
  std::vector<Vec> dirs;
  if (dim_ == 2)
    for (int i = 0; i < directions; ++i) dirs.push_back(unit_angle(2 * M_PI * i / directions));
  else
    dirs = fibonacci_sphere(directions);
  for (const Vec& x : positions) {
    ConvexSetInstance k = at(x);
    for (const Vec& u : dirs) {
      double g = k.gauge(u);
      if (!(g >= 1.0 / M_ - 1e-9) || !(g <= 1.0 / alpha_ + 1e-9))
        throw ModelError("field violates its uniform (alpha, M) bounds");
    }
  }
}

// ---- operations ----

double gauge_eval(const ConvexField& field, const Vec& x, const Vec& p) {
  return field.at(x).gauge(p);
}

double support_eval(const ConvexField& field, const Vec& x, const Vec& q) {
  return field.at(x).support(q);
}

Vec support_argmax(const ConvexField& field, const Vec& x, const Vec& q) {
  return field.at(x).support_argmax(q);
}

double bipolar_gauge(const ConvexField& field, const Vec& x, const Vec& p,
                     int coarse_directions) {
  if (p.norm() == 0.0) return 0.0;
  ConvexSetInstance k = field.at(x);
  if (k.dim() == 2) {
    auto val = [&](double th) {
      Vec q = unit_angle(th);
      return p.dot(q) / k.support(q);
    };
    double best = 0.0, bestv = -kInf;
    for (int i = 0; i < coarse_directions; ++i) {
      double th = 2 * M_PI * i / coarse_directions;
      double v = val(th);
      if (v > bestv) {
        bestv = v;
        best = th;
      }
    }
    double w = 2 * M_PI / coarse_directions;
    double th = golden_max(val, best - w, best + w, 1e-12);
    return std::max(val(th), bestv);
  }
  double bestv = -kInf;
  for (const Vec& q : fibonacci_sphere(coarse_directions))
    bestv = std::max(bestv, p.dot(q) / k.support(q));
  return bestv;
}

double dist_to_set(const Vec& p, const ConvexSetInstance& k, int directions) {
  if (k.gauge(p) <= 1.0) return 0.0;
  // dual formula: dist(p, K) = max over unit u of (p . u - support(u))
  double best = 0.0;
  if (k.dim() == 2) {
    for (int i = 0; i < directions; ++i) {
      Vec u = unit_angle(2 * M_PI * i / directions);
      best = std::max(best, p.dot(u) - k.support(u));
    }
  } else {
    for (const Vec& u : fibonacci_sphere(directions))
      best = std::max(best, p.dot(u) - k.support(u));
  }
  return best;
}

double hausdorff_distance(const ConvexSetInstance& a, const ConvexSetInstance& b,
                          int directions) {
  if (a.dim() == 2 && b.dim() == 2) {
    // precompute supports of both sets over the shared direction set
    std::vector<Vec> dirs(directions);
    std::vector<double> sup_a(directions), sup_b(directions);
    for (int i = 0; i < directions; ++i) {
      dirs[i] = unit_angle(2 * M_PI * i / directions);
      sup_a[i] = a.support(dirs[i]);
      sup_b[i] = b.support(dirs[i]);
    }
    auto one_sided = [&](const ConvexSetInstance& from, const std::vector<double>& sup_other) {
      double worst = 0.0;
      for (int i = 0; i < directions; ++i) {
        Vec p = dirs[i] / from.gauge(dirs[i]);  // boundary sample of `from`
        double d = 0.0;
        for (int j = 0; j < directions; ++j)
          d = std::max(d, p.dot(dirs[j]) - sup_other[j]);
        worst = std::max(worst, d);
      }
      return worst;
    };
    return std::max(one_sided(a, sup_b), one_sided(b, sup_a));
  }
  // d = 3 smoke path
  auto dirs = fibonacci_sphere(directions);
  double worst = 0.0;
  for (const Vec& u : dirs) {
    worst = std::max(worst, dist_to_set(u / a.gauge(u), b, 256));
    worst = std::max(worst, dist_to_set(u / b.gauge(u), a, 256));
  }
  return worst;
}

Vec support_x_gradient(const ConvexField& field, const Vec& x, const Vec& q, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  if (q.norm() == 0.0) throw std::invalid_argument("direction must be nonzero");
  Vec g;
  g.x = (support_eval(field, {x.x + h, x.y, x.z}, q) -
         support_eval(field, {x.x - h, x.y, x.z}, q)) /
        (2 * h);
  g.y = (support_eval(field, {x.x, x.y + h, x.z}, q) -
         support_eval(field, {x.x, x.y - h, x.z}, q)) /
        (2 * h);
  if (field.dim() == 3)
    g.z = (support_eval(field, {x.x, x.y, x.z + h}, q) -
           support_eval(field, {x.x, x.y, x.z - h}, q)) /
          (2 * h);
  return g;
}

}  // namespace gradex

#include "geolens/lens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "geolens/errors.hpp"

namespace geolens {

namespace {

constexpr double kPi = std::numbers::pi;

// Distance accuracy of the model, used for constraint and keep tolerances.
double accuracy(const Manifold& m, double scale) {
  if (m.has_constant_curvature()) return 1e-13 * std::max(1.0, scale);
  return 0.1 * m.settings().bvp_tolerance;
}

struct CenterFrame {
  Point center;
  std::vector<Eigen::VectorXd> e;  // e[0] = gamma'(t)
};

CenterFrame frame_at(const BallPair& bp, double t) {
  const TangentVector vel = bp.gamma.velocity_at(bp.manifold, t);
  CenterFrame f{vel.base, {}};
  f.e = bp.manifold.orthonormal_frame(f.center, &vel.components);
  return f;
}

Point along(const Manifold& m, const CenterFrame& f, const Eigen::VectorXd& unit_coeffs,
            double rho) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(f.center.coords.size());
  for (int i = 0; i < unit_coeffs.size(); ++i) v += unit_coeffs(i) * f.e[i];
  return geodesic_point(m, TangentVector{f.center, std::move(v)}, rho);
}

// Unit coefficient vectors covering S^{n-1}; `alpha` receives an angle such
// that every unit vector is within alpha of some sample.
std::vector<Eigen::VectorXd> sphere_directions(int n, int count, double* alpha) {
  std::vector<Eigen::VectorXd> dirs;
  if (n == 2) {
    const int m = std::max(8, 4 * (count / 4));
    dirs.reserve(m);
    for (int i = 0; i < m; ++i) {
      const double th = 2.0 * kPi * i / m;
      dirs.push_back(Eigen::Vector2d(std::cos(th), std::sin(th)));
    }
    *alpha = kPi / m;
    return dirs;
  }
  // Cell centers of a g^(n-1) grid on every face of the cube [-1, 1]^n.
  const int g = std::max(
      2, static_cast<int>(std::floor(std::pow(count / (2.0 * n), 1.0 / (n - 1)))));
  for (int axis = 0; axis < n; ++axis) {
    for (int sign : {1, -1}) {
      std::vector<int> idx(n - 1, 0);
      while (true) {
        Eigen::VectorXd x(n);
        int k = 0;
        for (int i = 0; i < n; ++i) {
          x(i) = i == axis ? sign : -1.0 + (2.0 * idx[k++] + 1.0) / g;
        }
        dirs.push_back(x.normalized());
        int pos = 0;
        while (pos < n - 1 && ++idx[pos] == g) idx[pos++] = 0;
        if (pos == n - 1) break;
      }
    }
  }
  *alpha = 0.5 * kPi * std::sqrt(n - 1.0) / g;
  return dirs;
}

// Points of S_R(c0) on S_r(ct) in the planes (e0, e_k), found by bisection
// on the angle from the axis.
std::vector<Point> corner_points(const BallPair& bp, const CenterFrame& f0, const Point& ct) {
  std::vector<Point> out;
  const Manifold& m = bp.manifold;
  if (!(bp.t > bp.R - bp.r && bp.t < bp.R + bp.r)) return out;
  const int n = m.dimension();
  for (int k = 1; k < n; ++k) {
    for (int sign : {1, -1}) {
      auto at = [&](double a) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
        c(0) = std::cos(a);
        c(k) = sign * std::sin(a);
        return along(m, f0, c, bp.R);
      };
      auto g = [&](double a) { return distance(m, ct, at(a)) - bp.r; };
      double lo = 0.0;
      double hi = kPi;
      if (g(hi) <= 0.0 || g(lo) > 0.0) continue;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) <= 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.push_back(at(lo));
    }
  }
  return out;
}

double lipschitz_exp(double kmin, double r) { return kmin < 0.0 ? jacobi_sn(kmin, r) / r : 1.0; }

bool at_tangency(const BallPair& bp) {
  return bp.hypothesis && bp.t >= (bp.R + bp.r) * (1.0 - 1e-12);
}

Point tangency_point(const BallPair& bp) { return bp.gamma.point_at(bp.manifold, bp.R); }

// Exact farthest pair of a point set by dual-tree branch and bound. Nodes
// are contiguous index ranges bounded by a ball around their middle point;
// samples ordered along the boundary give tight balls.
class FarthestPair {
 public:
  FarthestPair(const Manifold& m, const std::vector<Point>& pts) : m_(m), pts_(pts) {
    if (!pts.empty()) root_ = build(0, pts.size());
  }

  void offer(std::size_t i, std::size_t j) {
    const double d = distance(m_, pts_[i], pts_[j]);
    if (d > best_) {
      best_ = d;
      i_ = i;
      j_ = j;
    }
  }

  void run() {
    if (root_ >= 0) search(root_, root_, 2.0 * nodes_[root_].radius);
  }

  double best() const { return std::max(best_, 0.0); }
  std::size_t first() const { return i_; }
  std::size_t second() const { return j_; }

 private:
  static constexpr std::size_t kLeaf = 8;

  struct Node {
    std::size_t lo, hi, center;
    double radius;
    int left = -1;
    int right = -1;
  };

  int build(std::size_t lo, std::size_t hi) {
    Node node{lo, hi, lo + (hi - lo) / 2, 0.0};
    for (std::size_t i = lo; i < hi; ++i) {
      node.radius = std::max(node.radius, distance(m_, pts_[node.center], pts_[i]));
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (hi - lo > kLeaf) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const int l = build(lo, mid);
      const int r = build(mid, hi);
      nodes_[id].left = l;
      nodes_[id].right = r;
    }
    return id;
  }

  double bound(int a, int b) const {
    if (a == b) return 2.0 * nodes_[a].radius;
    return distance(m_, pts_[nodes_[a].center], pts_[nodes_[b].center]) + nodes_[a].radius +
           nodes_[b].radius;
  }

  bool leaf(int a) const { return nodes_[a].left < 0; }

  void search(int a, int b, double ub) {
    if (ub <= best_) return;
    const Node& na = nodes_[a];
    const Node& nb = nodes_[b];
    if (leaf(a) && leaf(b)) {
      for (std::size_t i = na.lo; i < na.hi; ++i) {
        for (std::size_t j = (a == b ? i + 1 : nb.lo); j < nb.hi; ++j) offer(i, j);
      }
      return;
    }
    if (a == b) {
      const int l = na.left;
      const int r = na.right;
      search(l, r, bound(l, r));
      search(l, l, bound(l, l));
      search(r, r, bound(r, r));
      return;
    }
    // Split the larger non-leaf node.
    const bool split_a = !leaf(a) && (leaf(b) || na.radius >= nb.radius);
    const int c1 = split_a ? na.left : nb.left;
    const int c2 = split_a ? na.right : nb.right;
    const int other = split_a ? b : a;
    const double u1 = bound(c1, other);
    const double u2 = bound(c2, other);
    if (u1 >= u2) {
      search(c1, other, u1);
      search(c2, other, u2);
    } else {
      search(c2, other, u2);
      search(c1, other, u1);
    }
  }

  const Manifold& m_;
  const std::vector<Point>& pts_;
  std::vector<Node> nodes_;
  int root_ = -1;
  double best_ = -1.0;
  std::size_t i_ = 0;
  std::size_t j_ = 0;
};

// Projected geodesic ascent of d(a, b) over the lens.
class Ascent {
 public:
  explicit Ascent(const BallPair& bp)
      : bp_(bp), c0_(bp.center0()), ct_(bp.center_t()), tol_(accuracy(bp.manifold, bp.R)) {}

  struct Result {
    double value;
    Point a;
    Point b;
  };

  Result run(Point a, Point b) const {
    const Manifold& m = bp_.manifold;
    if (!project(a) || !project(b)) return {-1.0, a, b};
    double value = distance(m, a, b);
    double eta = 0.1 * bp_.r;
    for (int it = 0; it < 400 && eta > 1e-14; ++it) {
      try {
        const TangentVector ua = log_map(m, a, b);
        const TangentVector ub = log_map(m, b, a);
        const double la = metric_norm(m, ua);
        const double lb = metric_norm(m, ub);
        if (la == 0.0 || lb == 0.0) break;
        Point na = geodesic_point(m, TangentVector{a, -ua.components / la}, eta);
        Point nb = geodesic_point(m, TangentVector{b, -ub.components / lb}, eta);
        if (project(na) && project(nb)) {
          const double d = distance(m, na, nb);
          if (d > value) {
            const double gain = d - value;
            a = std::move(na);
            b = std::move(nb);
            value = d;
            if (gain < 1e-13) break;
            eta = std::min(2.0 * eta, bp_.r);
            continue;
          }
        }
      } catch (const GeometryError&) {
        // Cut locus (antipodes) or a failed shooting problem: keep the
        // best admissible pair found so far.
        break;
      }
      eta *= 0.5;
    }
    return {value, a, b};
  }

 private:
  // Geodesic retraction onto the violated balls, alternating until both
  // constraints hold.
  bool project(Point& x) const {
    const Manifold& m = bp_.manifold;
    for (int it = 0; it < 40; ++it) {
      const double v0 = distance(m, c0_, x) - bp_.R;
      const double vt = distance(m, ct_, x) - bp_.r;
      if (v0 <= tol_ && vt <= tol_) return true;
      const bool first = v0 - tol_ >= vt - tol_;
      const Point& c = first ? c0_ : ct_;
      const double rho = first ? bp_.R : bp_.r;
      const TangentVector v = log_map(m, c, x);
      const double len = metric_norm(m, v);
      if (len == 0.0) return false;
      x = geodesic_point(m, TangentVector{c, v.components / len}, rho);
    }
    return false;
  }

  const BallPair& bp_;
  Point c0_;
  Point ct_;
  double tol_;
};

// Largest d(x, c) - r over the cloud, stopping early above `tol`.
double nesting_excess(const Manifold& m, const PointCloud& cloud, const Point& c, double r,
                      double tol) {
  double worst = -INFINITY;
  for (const Point& x : cloud.points) {
    worst = std::max(worst, distance(m, x, c) - r);
    if (worst > tol) break;
  }
  return worst;
}

class NestingTester {
 public:
  NestingTester(const BallPair& pair, const ProfileOptions& opts, std::vector<double> grid)
      : pair_(pair), opts_(opts), grid_(std::move(grid)), cache_(grid_.size()) {
    spacing_ = grid_.size() > 1 ? grid_[1] - grid_[0] : 0.0;
    tol_ = std::max(opts.nesting_tolerance, 10.0 * accuracy(pair.manifold, pair.R));
  }

  // lens(t) in D_r(gamma(s)) for the grid points above s and for the probes
  // s + spacing / 2^j, nearest first.
  bool pass(double s) {
    const Manifold& m = pair_.manifold;
    const Point cs = pair_.gamma.point_at(m, s);
    const double end = pair_.R + pair_.r;
    for (int j = 12; j >= 1; --j) {
      const double t = s + spacing_ / std::ldexp(1.0, j);
      if (t <= s || t > end) continue;
      const PointCloud cloud = sample_lens_boundary(pair_.with_separation(t), opts_.budget);
      if (nesting_excess(m, cloud, cs, pair_.r, tol_) > tol_) return false;
    }
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (grid_[k] <= s) continue;
      if (nesting_excess(m, boundary(k), cs, pair_.r, tol_) > tol_) return false;
    }
    return true;
  }

 private:
  const PointCloud& boundary(std::size_t k) {
    if (!cache_[k]) {
      cache_[k] = sample_lens_boundary(pair_.with_separation(grid_[k]), opts_.budget);
    }
    return *cache_[k];
  }

  const BallPair& pair_;
  const ProfileOptions& opts_;
  std::vector<double> grid_;
  std::vector<std::optional<PointCloud>> cache_;
  double spacing_ = 0.0;
  double tol_ = 0.0;
};

struct TEstimate {
  double value = 0.0;
  double resolution = 0.0;
  std::size_t first_pass = 0;
};

TEstimate estimate_T_on(const BallPair& pair, const ProfileOptions& opts,
                        const std::vector<double>& grid) {
  NestingTester tester(pair, opts, grid);
  TEstimate est;
  std::size_t first = 0;
  for (std::size_t j = grid.size() - 1; j-- > 0;) {
    if (!tester.pass(grid[j])) {
      first = j + 1;
      break;
    }
  }
  est.first_pass = first;
  if (first == 0) return est;
  double lo = grid[first - 1];
  double hi = grid[first];
  const double target = opts.refine * (pair.R + pair.r);
  while (hi - lo > target) {
    const double mid = 0.5 * (lo + hi);
    if (tester.pass(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  est.value = hi;
  est.resolution = hi - lo;
  return est;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Point BallPair::center0() const { return gamma.base; }

Point BallPair::center_t() const { return gamma.point_at(manifold, t); }

BallPair BallPair::with_separation(double s) const {
  if (!(s >= 0.0 && s <= R + r)) {
    throw DomainError(fmt::format("separation {} outside [0, {}]", s, R + r));
  }
  BallPair out = *this;
  out.t = s;
  return out;
}

namespace {

BallPair build_pair(const Manifold& m, double R, double r, double t, bool hypothesis) {
  if (!(r > 0.0) || !(R > 0.0)) throw PreconditionError("ball radii must be positive");
  if (!(t >= 0.0 && t <= R + r)) {
    throw PreconditionError(fmt::format("separation {} outside [0, R + r] = [0, {}]", t, R + r));
  }
  const Point base = m.basepoint();
  const std::vector<Eigen::VectorXd> frame = m.orthonormal_frame(base);
  GeodesicSegment gamma = make_geodesic(m, TangentVector{base, frame[0]}, R + r);
  return BallPair{m, std::move(gamma), R, r, t, hypothesis};
}

}  // namespace

BallPair make_ball_pair(const Manifold& m, double R, double r, double t,
                        const RadiusValue& convexity) {
  if (!(r > 0.0 && r <= R)) {
    throw PreconditionError(fmt::format("radii must satisfy 0 < r <= R (R = {}, r = {})", R, r));
  }
  if (!convexity.available()) {
    throw PreconditionError("the convexity radius of the model is not available");
  }
  if (!(R < convexity.value)) {
    throw PreconditionError(fmt::format(
        "R = {} is not below the convexity radius {}", R, convexity.format()));
  }
  return build_pair(m, R, r, t, true);
}

BallPair make_ball_pair(const Manifold& m, double R, double r, double t) {
  if (!m.has_constant_curvature()) {
    throw PreconditionError("the surface of revolution needs an explicit convexity radius");
  }
  return make_ball_pair(m, R, r, t, closed_form_radii(m).convexity);
}

BallPair make_unchecked_ball_pair(const Manifold& m, double R, double r, double t) {
  return build_pair(m, R, r, t, false);
}

MembershipResult membership(const BallPair& bp, const Point& x, double tolerance) {
  const Manifold& m = bp.manifold;
  MembershipResult res;
  res.margin = std::min(bp.R - distance(m, bp.center0(), x), bp.r - distance(m, bp.center_t(), x));
  if (std::abs(res.margin) <= tolerance) {
    res.kind = Membership::Boundary;
  } else {
    res.kind = res.margin > 0.0 ? Membership::Inside : Membership::Outside;
  }
  return res;
}

PointCloud sample_lens_boundary(const BallPair& bp, int budget) {
  if (budget < 1) throw PreconditionError("sampling budget must be at least 1");
  const Manifold& m = bp.manifold;
  PointCloud cloud;
  if (at_tangency(bp)) {
    cloud.points.push_back(tangency_point(bp));
    return cloud;
  }
  const CenterFrame f0 = frame_at(bp, 0.0);
  const CenterFrame ft = frame_at(bp, bp.t);
  const double keep = 10.0 * accuracy(m, bp.R);
  double alpha = 0.0;
  const std::vector<Eigen::VectorXd> dirs =
      sphere_directions(m.dimension(), std::max(8, budget / 2), &alpha);

  for (const Eigen::VectorXd& u : dirs) {
    Point x = along(m, f0, u, bp.R);
    if (distance(m, ft.center, x) <= bp.r + keep) cloud.points.push_back(std::move(x));
  }
  for (const Eigen::VectorXd& u : dirs) {
    Point x = along(m, ft, u, bp.r);
    if (distance(m, f0.center, x) <= bp.R + keep) cloud.points.push_back(std::move(x));
  }
  const Eigen::VectorXd axis = Eigen::VectorXd::Unit(m.dimension(), 0);
  const Point extras[] = {along(m, f0, axis, bp.R), along(m, f0, -axis, bp.R),
                          along(m, ft, axis, bp.r), along(m, ft, -axis, bp.r)};
  for (const Point& x : extras) {
    if (distance(m, f0.center, x) <= bp.R + keep && distance(m, ft.center, x) <= bp.r + keep) {
      cloud.points.push_back(x);
    }
  }
  for (Point& x : corner_points(bp, f0, ft.center)) cloud.points.push_back(std::move(x));

  const double kmin = m.curvature_bounds().first;
  cloud.fill_radius = jacobi_sn(kmin, bp.R) * alpha * (m.dimension() > 2 ? 2.0 : 1.0);
  return cloud;
}

double default_pitch(int dimension, double r, int budget) {
  if (budget < 1) throw PreconditionError("sampling budget must be at least 1");
  const int n = dimension;
  const double unit_ball = std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  return r * std::pow(unit_ball / budget, 1.0 / n);
}

PointCloud sample_intersection(const BallPair& bp, int budget, std::uint64_t seed) {
  return sample_intersection(bp, budget, seed, default_pitch(bp.manifold.dimension(), bp.r, budget));
}

PointCloud sample_intersection(const BallPair& bp, int budget, std::uint64_t seed, double pitch) {
  if (budget < 1) throw PreconditionError("sampling budget must be at least 1");
  if (!(pitch > 0.0)) throw PreconditionError("grid pitch must be positive");
  const Manifold& m = bp.manifold;
  if (at_tangency(bp)) {
    PointCloud single;
    single.points.push_back(tangency_point(bp));
    return single;
  }
  const PointCloud boundary = sample_lens_boundary(bp, budget);
  const CenterFrame ft = frame_at(bp, bp.t);
  const Point c0 = bp.center0();
  const int n = m.dimension();
  const double keep = 10.0 * accuracy(m, bp.R);

  const double h = pitch;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd offset(n);
  for (int i = 0; i < n; ++i) offset(i) = unit(rng);

  PointCloud cloud;
  const int K = static_cast<int>(std::ceil(bp.r / h)) + 1;
  std::vector<int> idx(n, -K);
  while (true) {
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = (idx[i] + offset(i)) * h;
    const double len = c.norm();
    if (len <= bp.r && len > 0.0) {
      Point x = along(m, ft, c / len, len);
      if (distance(m, c0, x) <= bp.R + keep) cloud.points.push_back(std::move(x));
    }
    int pos = 0;
    while (pos < n && ++idx[pos] > K) idx[pos++] = -K;
    if (pos == n) break;
  }
  cloud.points.insert(cloud.points.end(), boundary.points.begin(), boundary.points.end());
  if (cloud.empty()) {
    throw GeometryError(fmt::format(
        "lens sample at t = {} is empty before tangency (integration defect)", bp.t));
  }
  const double kmin = m.curvature_bounds().first;
  cloud.fill_radius = lipschitz_exp(kmin, bp.r) * h * std::sqrt(static_cast<double>(n)) / 2.0 +
                      boundary.fill_radius;
  return cloud;
}

LensDiameter lens_diameter(const BallPair& bp, int budget, std::uint64_t seed) {
  const Manifold& m = bp.manifold;
  LensDiameter out;
  if (at_tangency(bp)) {
    out.a = tangency_point(bp);
    out.b = out.a;
    return out;
  }
  const PointCloud boundary = sample_lens_boundary(bp, budget);
  const std::vector<Point>& pts = boundary.points;
  if (pts.empty()) {
    throw GeometryError(fmt::format("lens boundary at t = {} has no samples", bp.t));
  }
  FarthestPair fp(m, pts);
  fp.run();
  out.value = fp.best();
  out.a = pts[fp.first()];
  out.b = pts[fp.second()];

  std::vector<std::pair<Point, Point>> starts;
  starts.emplace_back(out.a, out.b);
  const CenterFrame f0 = frame_at(bp, 0.0);
  const CenterFrame ft = frame_at(bp, bp.t);
  const Eigen::VectorXd axis = Eigen::VectorXd::Unit(m.dimension(), 0);
  starts.emplace_back(along(m, ft, -axis, bp.r), along(m, f0, axis, bp.R));
  const std::vector<Point> corners = corner_points(bp, f0, ft.center);
  if (corners.size() >= 2) starts.emplace_back(corners[0], corners[1]);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  for (int i = 0; i < 4; ++i) {
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    starts.emplace_back(pts[a], pts[b]);
  }

  const Ascent ascent(bp);
  for (const auto& [a, b] : starts) {
    Ascent::Result res = ascent.run(a, b);
    if (res.value > out.value) {
      out.value = res.value;
      out.a = std::move(res.a);
      out.b = std::move(res.b);
    }
  }
  out.fill_radius = boundary.fill_radius;
  out.slack = 2.0 * boundary.fill_radius;
  out.upper = out.value + out.slack;
  return out;
}

double WProfile::spacing() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }

std::vector<double> uniform_grid(double R, double r, int grid) {
  if (grid < 2) throw PreconditionError("the t-grid needs at least two points");
  std::vector<double> out(grid);
  const double end = R + r;
  for (int i = 0; i < grid; ++i) out[i] = end * i / (grid - 1);
  out.back() = end;
  return out;
}

double estimate_T(const BallPair& pair, const ProfileOptions& options, double* resolution) {
  const TEstimate est = estimate_T_on(pair, options, uniform_grid(pair.R, pair.r, options.grid));
  if (resolution) *resolution = est.resolution;
  return est.value;
}

double estimate_S(const WProfile& profile, double tol, double refine, double* resolution) {
  const std::size_t n = profile.grid.size();
  if (n == 0) throw PreconditionError("empty profile");
  const double full = 2.0 * profile.pair.r - tol;
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < n; ++i) {
    if (profile.w[i] >= full) last = i;
  }
  if (resolution) *resolution = 0.0;
  if (!last) return 0.0;
  if (*last + 1 == n) return profile.grid.back();
  double lo = profile.grid[*last];
  double hi = profile.grid[*last + 1];
  const double target = refine * (profile.pair.R + profile.pair.r);
  for (std::uint64_t it = 0; hi - lo > target; ++it) {
    const double mid = 0.5 * (lo + hi);
    const LensDiameter d = lens_diameter(profile.pair.with_separation(mid), profile.budget,
                                         derive_seed(profile.seed, n + it));
    if (d.value >= full) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (resolution) *resolution = hi - lo;
  return lo;
}

WProfile w_profile(const BallPair& pair, const ProfileOptions& options) {
  WProfile prof{.pair = pair};
  prof.budget = options.budget;
  prof.seed = options.seed;
  prof.grid = uniform_grid(pair.R, pair.r, options.grid);
  for (std::size_t i = 0; i < prof.grid.size(); ++i) {
    const LensDiameter d = lens_diameter(pair.with_separation(prof.grid[i]), options.budget,
                                         derive_seed(options.seed, i));
    prof.w.push_back(d.value);
    prof.slack.push_back(d.slack);
    prof.witness_a.push_back(d.a);
    prof.witness_b.push_back(d.b);
  }
  const TEstimate T = estimate_T_on(pair, options, prof.grid);
  prof.T_est = T.value;
  prof.T_resolution = T.resolution;
  for (std::size_t i = 0; i < prof.grid.size(); ++i) prof.nested_after_T.push_back(i >= T.first_pass);
  prof.S_est = estimate_S(prof, options.full_tolerance * std::max(1.0, 2.0 * pair.r),
                          options.refine, &prof.S_resolution);
  return prof;
}

void write_profile_csv(std::ostream& out, const WProfile& profile) {
  const int n = profile.pair.manifold.ambient_dimension();
  out << "t,w,slack";
  for (int i = 0; i < n; ++i) out << ",witness_a_" << i;
  for (int i = 0; i < n; ++i) out << ",witness_b_" << i;
  out << ",nested_after_T\n";
  for (std::size_t k = 0; k < profile.grid.size(); ++k) {
    out << fmt::format("{:.17g},{:.17g},{:.17g}", profile.grid[k], profile.w[k], profile.slack[k]);
    for (int i = 0; i < n; ++i) out << fmt::format(",{:.17g}", profile.witness_a[k].coords(i));
    for (int i = 0; i < n; ++i) out << fmt::format(",{:.17g}", profile.witness_b[k].coords(i));
    out << "," << (profile.nested_after_T[k] ? 1 : 0) << "\n";
  }
}

}  // namespace geolens

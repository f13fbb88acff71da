#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "geolens/geodesic.hpp"
#include "geolens/manifold.hpp"
#include "geolens/point_cloud.hpp"
#include "geolens/radii.hpp"

namespace geolens {

// Two closed balls D_R(gamma(0)) and D_r(gamma(t)) whose centers separate
// along the unit-speed geodesic gamma: [0, R + r] -> X.
struct BallPair {
  Manifold manifold;
  GeodesicSegment gamma;
  double R = 0.0;
  double r = 0.0;
  double t = 0.0;
  // False for configurations outside 0 < r <= R < Conv(X) (counterexamples).
  bool hypothesis = true;

  Point center0() const;
  Point center_t() const;
  // Copy with another separation; throws DomainError outside [0, R + r].
  BallPair with_separation(double t) const;
};

// Checks 0 < r <= R < Conv(X) and 0 <= t <= R + r (PreconditionError
// otherwise). gamma starts at the model's basepoint along the first frame
// vector. The overload without `convexity` uses the closed-form radii and
// throws PreconditionError for the surface of revolution.
BallPair make_ball_pair(const Manifold& m, double R, double r, double t,
                        const RadiusValue& convexity);
BallPair make_ball_pair(const Manifold& m, double R, double r, double t = 0.0);
// No hypothesis check (only 0 < r, R and 0 <= t <= R + r).
BallPair make_unchecked_ball_pair(const Manifold& m, double R, double r, double t = 0.0);

enum class Membership { Inside, Boundary, Outside };

struct MembershipResult {
  Membership kind = Membership::Outside;
  // min(R - d(gamma(0), x), r - d(gamma(t), x))
  double margin = 0.0;
};

MembershipResult membership(const BallPair& bp, const Point& x, double tolerance = 1e-9);

// Boundary of the lens: samples of both spheres kept inside the other ball,
// plus the axis points and the sphere-sphere intersection ("corner") points.
// fill_radius bounds the distance from any boundary point to the cloud.
PointCloud sample_lens_boundary(const BallPair& bp, int budget);

// Boundary cloud united with a seeded tangent grid at gamma(t) filtered by
// membership. At t = R + r (hypothesis pairs) the single point gamma(R).
// Throws PreconditionError for budget < 1 and GeometryError if the lens
// sample comes out empty before tangency.
PointCloud sample_intersection(const BallPair& bp, int budget, std::uint64_t seed);
// Same with an explicit tangent-grid pitch; clouds of balls about the same
// center share grid points for equal pitch and seed.
PointCloud sample_intersection(const BallPair& bp, int budget, std::uint64_t seed, double pitch);
// Pitch giving about `budget` grid points in the tangent r-ball.
double default_pitch(int dimension, double r, int budget);

struct LensDiameter {
  double value = 0.0;  // lower bound attained by the witnesses
  double upper = 0.0;  // value + slack
  double slack = 0.0;  // 2 * boundary fill radius
  double fill_radius = 0.0;
  Point a;
  Point b;
};

// Exact farthest pair of the boundary cloud refined by projected geodesic
// ascent from several starting pairs.
LensDiameter lens_diameter(const BallPair& bp, int budget, std::uint64_t seed);

struct WProfile {
  BallPair pair;  // template; its t is ignored
  int budget = 0;
  std::uint64_t seed = 0;
  std::vector<double> grid{};
  std::vector<double> w{};
  std::vector<double> slack{};
  std::vector<Point> witness_a{};
  std::vector<Point> witness_b{};
  std::vector<bool> nested_after_T{};
  double T_est = 0.0;
  double T_resolution = 0.0;
  double S_est = 0.0;
  double S_resolution = 0.0;

  // Grid spacing.
  double spacing() const;
};

struct ProfileOptions {
  int grid = 200;
  int budget = 4096;
  std::uint64_t seed = 0;
  // Bisection stops at refine * (R + r).
  double refine = 1e-4;
  // Allowed excess of d(x, gamma(s)) over r in the nesting test.
  double nesting_tolerance = 1e-9;
  // w counts as full diameter when w >= 2r - full_tolerance.
  double full_tolerance = 1e-9;
};

// Uniform grid of `grid` points on [0, R + r].
std::vector<double> uniform_grid(double R, double r, int grid);

// Evaluates w on the grid and estimates T and S.
WProfile w_profile(const BallPair& pair, const ProfileOptions& options = {});

// Smallest s such that lens(t) lies in D_r(gamma(s)) for every probed t > s:
// start of the trailing run of passing grid points, refined by bisection.
// Returns the estimate; `resolution` receives the final bracket width.
double estimate_T(const BallPair& pair, const ProfileOptions& options,
                  double* resolution = nullptr);

// Largest t with w(t) >= 2r - tol, refined by bisection with fresh lens
// diameter evaluations.
double estimate_S(const WProfile& profile, double tol, double refine = 1e-4,
                  double* resolution = nullptr);

// Columns t, w, slack, witness_a_i..., witness_b_i..., nested_after_T.
void write_profile_csv(std::ostream& out, const WProfile& profile);

// Deterministic per-index seed derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace geolens

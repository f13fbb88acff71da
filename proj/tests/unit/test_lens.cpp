#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "geolens/errors.hpp"
#include "geolens/lens.hpp"
#include "oracles.hpp"

using namespace geolens;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

// Planar coordinates of a point in the frame of the pair's geodesic.
Point planar(const BallPair& bp, double x, double y) {
  const Point o = bp.center0();
  const auto frame = bp.manifold.orthonormal_frame(o, &bp.gamma.direction.components);
  return Point{o.coords + x * frame[0] + y * frame[1]};
}

}  // namespace

TEST(BallPair, Preconditions) {
  const Manifold s = Manifold::sphere(2);
  EXPECT_THROW(make_ball_pair(s, kPi / 2, 1.0), PreconditionError);
  EXPECT_THROW(make_ball_pair(s, 1.0, 1.2), PreconditionError);
  EXPECT_THROW(make_ball_pair(s, 1.0, 0.0), PreconditionError);
  EXPECT_NO_THROW(make_ball_pair(s, 1.2, 0.6, 1.2 + 0.6));
  EXPECT_THROW(make_ball_pair(s, 1.2, 0.6, 1.9), PreconditionError);
  const BallPair bp = make_ball_pair(Manifold::euclidean(2), 2.0, 1.0);
  EXPECT_THROW(bp.with_separation(3.5), DomainError);
  EXPECT_NO_THROW(make_unchecked_ball_pair(s, kPi / 2, kPi / 2, 1.0));
  const Manifold torus = Manifold::surface_of_revolution(Profile::torus(2.0, 1.0));
  EXPECT_THROW(make_ball_pair(torus, 0.3, 0.2), PreconditionError);
  EXPECT_NO_THROW(
      make_ball_pair(torus, 0.3, 0.2, 0.0, RadiusValue{0.5, false, Provenance::Combined}));
}

TEST(Membership, CenterPoint) {
  const BallPair bp = make_ball_pair(Manifold::euclidean(2), 2.0, 1.0, 0.4);
  const MembershipResult res = membership(bp, bp.center0());
  EXPECT_EQ(res.kind, Membership::Inside);
  EXPECT_NEAR(res.margin, std::min(2.0, 1.0 - 0.4), 1e-15);
}

TEST(Membership, TangencyPoint) {
  for (const Manifold& m : {Manifold::euclidean(2), Manifold::sphere(2), Manifold::hyperbolic(2)}) {
    const BallPair bp = make_ball_pair(m, 1.2, 0.6, 1.2 + 0.6);
    const MembershipResult res = membership(bp, bp.gamma.point_at(m, 1.2));
    EXPECT_EQ(res.kind, Membership::Boundary) << m.describe();
  }
}

TEST(Membership, EuclideanCorner) {
  const BallPair bp = make_ball_pair(Manifold::euclidean(2), 2.0, 1.0, 1.8);
  const auto corners = oracle::circle_corners(2.0, 1.0, 1.8);
  ASSERT_TRUE(corners.has_value());
  const MembershipResult res = membership(bp, planar(bp, corners->first[0], corners->first[1]));
  EXPECT_EQ(res.kind, Membership::Boundary);
  EXPECT_LT(std::abs(res.margin), 1e-10);
  EXPECT_EQ(membership(bp, planar(bp, 2.5, 0.0)).kind, Membership::Outside);
}

TEST(Lens, FullDiameterWhenContained) {
  const BallPair bp = make_ball_pair(Manifold::euclidean(2), 2.0, 1.0, 1.0);
  const LensDiameter d = lens_diameter(bp, 4096, 1);
  EXPECT_NEAR(d.value, 2.0, 1e-9);
  EXPECT_LE(d.value, 2.0 + 1e-12);
  EXPECT_NEAR(d.upper - d.value, d.slack, 1e-15);
}

TEST(Lens, EuclideanCornerChord) {
  const BallPair bp = make_ball_pair(Manifold::euclidean(2), 2.0, 1.0, 1.8);
  const LensDiameter d = lens_diameter(bp, 4096, 0);
  const double chord = oracle::corner_chord(2.0, 1.0, 1.8);
  EXPECT_NEAR(chord, 1.99556, 1e-5);
  EXPECT_NEAR(d.value, chord, 1e-9);
  EXPECT_NEAR(oracle::euclidean_lens_diameter(2.0, 1.0, 1.8), chord, 1e-6);
  EXPECT_NEAR(distance(bp.manifold, d.a, d.b), d.value, 1e-12);
}

TEST(Lens, AgreesWithDenseSamplingAcrossSeparations) {
  const double R = 1.5, r = 1.0;
  const BallPair base = make_ball_pair(Manifold::euclidean(2), R, r);
  for (double t = 0.0; t <= R + r; t += 0.125) {
    const double ref = oracle::euclidean_lens_diameter(R, r, t, 2048);
    const LensDiameter d = lens_diameter(base.with_separation(t), 1024, 3);
    EXPECT_GE(d.upper + 1e-12, ref) << t;
    EXPECT_NEAR(d.value, ref, 2e-3) << t;
  }
}

TEST(Lens, SphereCounterexampleConfiguration) {
  const BallPair bp = make_unchecked_ball_pair(Manifold::sphere(2), kPi / 2, kPi / 2, 1.0);
  EXPECT_FALSE(bp.hypothesis);
  EXPECT_NEAR(lens_diameter(bp, 2048, 0).value, kPi, 0.05);
}

TEST(Intersection, ConcentricIsSmallBall) {
  const BallPair bp = make_ball_pair(Manifold::euclidean(2), 2.0, 1.0, 0.0);
  const PointCloud c = sample_intersection(bp, 2048, 5);
  const CloudDiameter d = diameter(bp.manifold, c);
  EXPECT_LE(d.value, 2.0 + 1e-9);
  EXPECT_GE(d.value + 2 * c.fill_radius, 2.0);
}

TEST(Intersection, TangencyIsSinglePoint) {
  for (const Manifold& m : {Manifold::euclidean(2), Manifold::hyperbolic(3)}) {
    const BallPair bp = make_ball_pair(m, 1.0, 0.5, 1.5);
    const PointCloud c = sample_intersection(bp, 512, 0);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_LT(distance(m, c.points[0], bp.gamma.point_at(m, 1.0)), 1e-12);
    EXPECT_EQ(lens_diameter(bp, 512, 0).value, 0.0);
  }
}

TEST(Intersection, EverySampleInsideBothBalls) {
  for (const Manifold& m : {Manifold::euclidean(2), Manifold::sphere(2), Manifold::hyperbolic(2),
                            Manifold::euclidean(3)}) {
    const BallPair bp = make_ball_pair(m, 1.2, 0.6, 1.5);
    const PointCloud c = sample_intersection(bp, 2048, 9);
    ASSERT_GT(c.size(), 10u);
    for (const Point& p : c.points) {
      EXPECT_LE(distance(m, p, bp.center0()), 1.2 + 1e-9);
      EXPECT_LE(distance(m, p, bp.center_t()), 0.6 + 1e-9);
    }
  }
}

TEST(Intersection, SeedDeterminism) {
  const BallPair bp = make_ball_pair(Manifold::sphere(2), 1.2, 0.6, 0.9);
  const PointCloud a = sample_intersection(bp, 1000, 42);
  const PointCloud b = sample_intersection(bp, 1000, 42);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.points[i].coords, b.points[i].coords);
  EXPECT_THROW(sample_intersection(bp, 0, 1), PreconditionError);
}

TEST(Intersection, BoundaryContainsCorners) {
  const BallPair bp = make_ball_pair(Manifold::euclidean(2), 2.0, 1.0, 1.8);
  const PointCloud c = sample_lens_boundary(bp, 256);
  const auto corners = oracle::circle_corners(2.0, 1.0, 1.8);
  for (const auto& corner : {corners->first, corners->second}) {
    const Point want = planar(bp, corner[0], corner[1]);
    double best = INFINITY;
    for (const Point& p : c.points) best = std::min(best, distance(bp.manifold, p, want));
    EXPECT_LT(best, 1e-12);
  }
}

TEST(Profile, EqualRadiiIsStrictlyDecreasingChord) {
  ProfileOptions o;
  o.grid = 41;
  o.budget = 1024;
  const WProfile prof = w_profile(make_ball_pair(Manifold::euclidean(2), 1.0, 1.0), o);
  ASSERT_EQ(prof.grid.size(), 41u);
  EXPECT_NEAR(prof.w.front(), 2.0, 1e-9);
  EXPECT_NEAR(prof.w.back(), 0.0, 1e-12);
  for (std::size_t i = 1; i < prof.w.size(); ++i) {
    const double t = prof.grid[i];
    EXPECT_NEAR(prof.w[i], 2 * std::sqrt(std::max(0.0, 1 - t * t / 4)), prof.slack[i] + 1e-9);
    EXPECT_LT(prof.w[i], prof.w[i - 1]);
  }
  const double h = 1e-3 * 2.0;
  EXPECT_LE(prof.T_est, h);
  EXPECT_LE(prof.S_est, h);
}

TEST(Profile, EuclideanTAndS) {
  ProfileOptions o;
  o.grid = 100;
  o.budget = 2048;
  const WProfile prof = w_profile(make_ball_pair(Manifold::euclidean(2), 2.0, 1.0), o);
  const double h = 1e-3 * 3.0;
  EXPECT_GT(prof.T_est, 1.0);
  EXPECT_LT(prof.T_est, 2.0);
  EXPECT_NEAR(prof.S_est, std::sqrt(3.0), 1e-3);
  EXPECT_LE(std::abs(prof.S_est - prof.T_est), 2 * h);
  for (std::size_t i = 0; i < prof.grid.size(); ++i) {
    EXPECT_EQ(static_cast<bool>(prof.nested_after_T[i]), prof.grid[i] >= prof.T_est)
        << prof.grid[i];
    if (prof.grid[i] <= 1.0) {
      EXPECT_NEAR(prof.w[i], 2.0, prof.slack[i]);
    }
  }
}

TEST(Profile, SphereSBetweenGapAndT) {
  ProfileOptions o;
  o.grid = 60;
  o.budget = 1024;
  const WProfile prof = w_profile(make_ball_pair(Manifold::sphere(2), 1.2, 0.6), o);
  const double h = 1e-3 * 1.8;
  EXPECT_GE(prof.S_est, 0.6 - h);
  EXPECT_LE(prof.S_est, prof.T_est + h);
  EXPECT_LT(prof.T_est, 1.2);
  for (std::size_t i = 0; i < prof.grid.size(); ++i) {
    EXPECT_LE(prof.w[i], 1.2 + prof.slack[i]);
  }
}

TEST(Profile, CsvLayoutAndDeterminism) {
  ProfileOptions o;
  o.grid = 20;
  o.budget = 512;
  o.seed = 77;
  const BallPair bp = make_ball_pair(Manifold::hyperbolic(2), 1.0, 0.5);
  std::ostringstream a, b;
  write_profile_csv(a, w_profile(bp, o));
  write_profile_csv(b, w_profile(bp, o));
  EXPECT_EQ(a.str(), b.str());
  const std::string text = a.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "t,w,slack,witness_a_0,witness_a_1,witness_a_2,witness_b_0,witness_b_1,witness_b_2,"
            "nested_after_T");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 21);
}

TEST(Profile, Helpers) {
  const std::vector<double> g = uniform_grid(2.0, 1.0, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 3.0);
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
  EXPECT_NEAR(default_pitch(2, 1.0, 4096), std::sqrt(kPi / 4096), 1e-12);
}

TEST(Lens, RoundBandMatchesSphere) {
  // The band is an isometric piece of the unit sphere, so lens diameters agree.
  const Manifold band = Manifold::surface_of_revolution(Profile::round_band(1.0, 0.3));
  const RadiusValue conv{1.0, false, Provenance::UserCertified};
  const BallPair numeric = make_ball_pair(band, 0.5, 0.3, 0.0, conv);
  const BallPair exact = make_ball_pair(Manifold::sphere(2), 0.5, 0.3);
  for (double t : {0.1, 0.5, 0.7}) {
    const LensDiameter a = lens_diameter(numeric.with_separation(t), 128, 0);
    const LensDiameter b = lens_diameter(exact.with_separation(t), 4096, 0);
    EXPECT_NEAR(a.value, b.value, 1e-6) << t;
  }
}

#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "geolens/manifold.hpp"

namespace geolens {

struct GeodesicSample {
  double t = 0.0;
  Point point;
  TangentVector velocity;
};

// Arclength-parameterized geodesic t -> exp_base(t * direction), t in
// [0, length]. Segments built by integrate_geodesic carry RK4 samples;
// closed-form segments (constant curvature) carry none.
struct GeodesicSegment {
  Point base;
  TangentVector direction;  // unit
  double length = 0.0;
  std::vector<GeodesicSample> samples;
  double step = 0.0;            // sample spacing (0 for closed form)
  double error_estimate = 0.0;  // Richardson estimate of the endpoint error

  Point point_at(const Manifold& m, double t) const;
  TangentVector velocity_at(const Manifold& m, double t) const;
};

struct IntegrationOptions {
  double step = 1e-3;
  // Largest accepted Richardson error estimate of the integrated state.
  double tolerance = 1e-8;
};

// Closed form for constant curvature, sampled RK4 otherwise. `direction`
// is normalized.
GeodesicSegment make_geodesic(const Manifold& m, const TangentVector& direction, double length,
                              IntegrationOptions options = {});

// Fixed-step RK4 integration of the geodesic equation from `start` along
// the unit tangent `direction`. Throws ChartExitError if the surface chart is
// left and ConvergenceError if the Richardson estimate exceeds the tolerance.
GeodesicSegment integrate_geodesic(const Manifold& m, const TangentVector& direction,
                                   double length, IntegrationOptions options = {});

// Same as integrate_geodesic, but a chart exit truncates the segment instead
// of throwing. `complete` reports whether the full length was reached.
struct PartialGeodesic {
  GeodesicSegment segment;
  bool complete = true;
};
PartialGeodesic integrate_geodesic_until_exit(const Manifold& m, const TangentVector& direction,
                                              double length, double step);

// Writes "t,x0,x1,..." rows (with header).
void write_geodesic_csv(std::ostream& out, const GeodesicSegment& segment);

// A piecewise-smooth curve known through samples of its velocity.
struct SampledCurve {
  std::vector<double> params;
  std::vector<TangentVector> velocities;
};

// E(c) = integral |c'|^2 and L(c) = integral |c'|. Composite Simpson on a
// uniform grid with an odd sample count, trapezoid otherwise. Throws
// DomainError for fewer than two samples.
double energy(const Manifold& m, const SampledCurve& curve);
double length(const Manifold& m, const SampledCurve& curve);

// Samples of the segment reparameterized linearly onto [0, interval].
SampledCurve curve_from_geodesic(const GeodesicSegment& segment, double interval = 1.0);

// Geodesic variation f(t, s) = exp_p(t V(s)) with V given by its
// coefficients in the orthonormal frame at p. Returns
// |dE(c_s)/ds(0) - 2 g(sigma'(0), c'(1))| with the left side from central
// differences of numerically integrated energies.
double first_variation_check(const Manifold& m, const Point& p,
                             const std::function<Eigen::VectorXd(double)>& frame_coefficients,
                             double fd_step = 1e-4, double integration_step = 1e-3);

// Scalar normal Jacobi field along a unit-speed geodesic in a 2D model (or
// any constant-curvature model): j'' + K(c(t)) j = 0, j(0) = 0, j'(0) = 1.
struct JacobiSolution {
  GeodesicSegment geodesic;
  std::vector<double> t;
  std::vector<double> j;
  std::vector<double> dj;
  std::vector<double> curvature;
  // False when the geodesic left the chart before the requested length;
  // samples then stop at `reached`.
  bool complete = true;
  double reached = 0.0;

  // Max |j'' + K j| with j'' from second differences of the samples.
  double residual() const;
};

JacobiSolution integrate_jacobi(const Manifold& m, const GeodesicSegment& geodesic,
                                double step = 1e-3);
// Same, from a start direction; truncates at chart exit instead of throwing.
JacobiSolution integrate_jacobi(const Manifold& m, const TangentVector& direction, double length,
                                double step);

}  // namespace geolens

#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "geolens/manifold.hpp"

namespace geolens {

// Finite sample of a compact set. Every point of the represented set lies
// within `fill_radius` of some sample.
struct PointCloud {
  std::vector<Point> points;
  double fill_radius = 0.0;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

// Hausdorff distance between the two samples (exact for the finite sets).
// The represented sets are within +/- (Y.fill + Z.fill) of it. Throws
// DomainError for an empty cloud.
double hausdorff(const Manifold& m, const PointCloud& y, const PointCloud& z);

struct CloudDiameter {
  double value = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
};

// Max pairwise distance over the samples; the represented set's diameter is
// within [value, value + 2 fill_radius].
CloudDiameter diameter(const Manifold& m, const PointCloud& y);

// |Diam(Y) - Diam(Z)| <= 2 d_H(Y, Z) evaluated on the samples, with the
// fill radii added to the right-hand side.
bool diameter_lipschitz_check(const Manifold& m, const PointCloud& y, const PointCloud& z);

enum class Nesting { Decreasing, Increasing };

struct MonotoneLimit {
  // d_H(Y_k, limit) for every k.
  std::vector<double> distances;
  double last = 0.0;
};

// Verifies sample-wise nesting of consecutive clouds (with fill-radius
// slack plus `tolerance`) and returns the Hausdorff distances to the limit
// candidate (the intersection for decreasing sequences, the union for
// increasing ones). Throws DomainError when nesting is violated.
MonotoneLimit monotone_limit_check(const Manifold& m, const std::vector<PointCloud>& sequence,
                                   Nesting direction, const PointCloud& limit,
                                   double tolerance = 1e-9);

// One point per row, coordinates comma separated, header "x0,x1,...".
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);
PointCloud read_cloud_csv(std::istream& in, double fill_radius = 0.0);

}  // namespace geolens

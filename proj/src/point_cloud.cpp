#include "geolens/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "geolens/errors.hpp"

namespace geolens {

namespace {

std::vector<std::size_t> scan_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

// max_y min_z d(y, z), exact. The inner scan stops as soon as it cannot
// raise the running maximum; a shuffled scan order makes that early.
double directed_hausdorff(const Manifold& m, const PointCloud& y, const PointCloud& z) {
  const std::vector<std::size_t> oy = scan_order(y.size());
  const std::vector<std::size_t> oz = scan_order(z.size());
  double worst = 0.0;
  for (std::size_t i : oy) {
    double nearest = INFINITY;
    for (std::size_t j : oz) {
      const double d = distance(m, y.points[i], z.points[j]);
      if (d < nearest) {
        nearest = d;
        if (nearest <= worst) break;
      }
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

bool within(const Manifold& m, const Point& p, const PointCloud& cloud, double radius) {
  for (const Point& q : cloud.points) {
    if (distance(m, p, q) <= radius) return true;
  }
  return false;
}

}  // namespace

double hausdorff(const Manifold& m, const PointCloud& y, const PointCloud& z) {
  if (y.empty() || z.empty()) throw DomainError("hausdorff: empty point cloud");
  return std::max(directed_hausdorff(m, y, z), directed_hausdorff(m, z, y));
}

CloudDiameter diameter(const Manifold& m, const PointCloud& y) {
  if (y.empty()) throw DomainError("diameter: empty point cloud");
  CloudDiameter best;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = i + 1; j < y.size(); ++j) {
      const double d = distance(m, y.points[i], y.points[j]);
      if (d > best.value) best = CloudDiameter{d, i, j};
    }
  }
  return best;
}

bool diameter_lipschitz_check(const Manifold& m, const PointCloud& y, const PointCloud& z) {
  const double lhs = std::abs(diameter(m, y).value - diameter(m, z).value);
  const double rhs = 2.0 * (hausdorff(m, y, z) + y.fill_radius + z.fill_radius);
  return lhs <= rhs + 1e-12;
}

MonotoneLimit monotone_limit_check(const Manifold& m, const std::vector<PointCloud>& sequence,
                                   Nesting direction, const PointCloud& limit, double tolerance) {
  if (sequence.empty()) throw DomainError("monotone_limit_check: empty sequence");
  for (std::size_t k = 0; k + 1 < sequence.size(); ++k) {
    const PointCloud& inner = direction == Nesting::Decreasing ? sequence[k + 1] : sequence[k];
    const PointCloud& outer = direction == Nesting::Decreasing ? sequence[k] : sequence[k + 1];
    const double radius = outer.fill_radius + tolerance;
    for (const Point& p : inner.points) {
      if (!within(m, p, outer, radius)) {
        throw DomainError(fmt::format("nesting violated between clouds {} and {}", k, k + 1));
      }
    }
  }
  MonotoneLimit out;
  for (const PointCloud& c : sequence) out.distances.push_back(hausdorff(m, c, limit));
  out.last = out.distances.back();
  return out;
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  if (cloud.empty()) throw DomainError("write_cloud_csv: empty point cloud");
  const int n = static_cast<int>(cloud.points.front().coords.size());
  for (int i = 0; i < n; ++i) out << (i ? "," : "") << "x" << i;
  out << "\n";
  for (const Point& p : cloud.points) {
    for (int i = 0; i < n; ++i) out << (i ? "," : "") << fmt::format("{:.17g}", p.coords(i));
    out << "\n";
  }
}

PointCloud read_cloud_csv(std::istream& in, double fill_radius) {
  PointCloud cloud;
  cloud.fill_radius = fill_radius;
  std::string line;
  int width = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> values;
    std::stringstream row(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (cloud.empty() && width < 0) continue;  // header
      throw DomainError(fmt::format("read_cloud_csv: malformed row '{}'", line));
    }
    if (width < 0) width = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != width) {
      throw DomainError("read_cloud_csv: inconsistent column count");
    }
    cloud.points.push_back(Point{Eigen::Map<Eigen::VectorXd>(values.data(), width)});
  }
  if (cloud.empty()) throw DomainError("read_cloud_csv: no points");
  return cloud;
}

}  // namespace geolens

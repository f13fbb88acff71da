#include "geolens/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "geolens/detail/flow.hpp"
#include "geolens/errors.hpp"

namespace geolens {

namespace {

TangentVector normalized(const Manifold& m, const TangentVector& v) {
  const double len = metric_norm(m, v);
  if (!(len > 0.0)) throw DomainError("geodesic direction must be non-zero");
  return TangentVector{v.base, v.components / len};
}

struct RawRun {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> states;
  bool complete = true;
};

// Integrates `steps` RK4 steps of size length/steps; stops at a chart exit
// when `truncate` is set.
RawRun run_flow(const Manifold& m, const Eigen::VectorXd& y0, double length, int steps,
                bool with_jacobi, bool truncate) {
  RawRun run;
  run.t.reserve(steps + 1);
  run.states.reserve(steps + 1);
  const double h = length / steps;
  Eigen::VectorXd y = y0;
  run.t.push_back(0.0);
  run.states.push_back(y);
  for (int i = 1; i <= steps; ++i) {
    try {
      detail::rk4_step(m, y, h, with_jacobi);
    } catch (const ChartExitError&) {
      if (!truncate) throw ChartExitError("geodesic left the chart", run.t.back());
      run.complete = false;
      break;
    }
    run.t.push_back(i == steps ? length : i * h);
    run.states.push_back(y);
  }
  return run;
}

int step_count(double length, double step) {
  if (!(step > 0.0)) throw DomainError("integration step must be positive");
  return std::max(1, static_cast<int>(std::ceil(length / step - 1e-12)));
}

GeodesicSegment segment_from_run(const Manifold& m, const TangentVector& unit, double length,
                                 const RawRun& run) {
  const int n = m.ambient_dimension();
  GeodesicSegment seg;
  seg.base = unit.base;
  seg.direction = unit;
  seg.length = run.complete ? length : run.t.back();
  seg.step = run.t.size() > 1 ? run.t[1] - run.t[0] : 0.0;
  seg.samples.reserve(run.t.size());
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    Point p{run.states[i].head(n)};
    seg.samples.push_back({run.t[i], p, TangentVector{p, run.states[i].segment(n, n)}});
  }
  return seg;
}

Eigen::VectorXd initial_state(const TangentVector& unit) {
  const int n = static_cast<int>(unit.components.size());
  Eigen::VectorXd y(2 * n);
  y << unit.base.coords, unit.components;
  return y;
}

// Closed-form velocity of t -> exp(t u) for constant curvature.
Eigen::VectorXd closed_form_velocity(const Manifold& m, const TangentVector& u, double t) {
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return u.components;
    case ModelKind::Sphere: {
      const double rho = 1.0 / std::sqrt(m.curvature());
      return -std::sin(t / rho) / rho * u.base.coords + std::cos(t / rho) * u.components;
    }
    case ModelKind::Hyperbolic: {
      const double rho = 1.0 / std::sqrt(-m.curvature());
      return std::sinh(t / rho) / rho * u.base.coords + std::cosh(t / rho) * u.components;
    }
    default:
      throw DomainError("closed-form geodesics need constant curvature");
  }
}

void check_parameter(const GeodesicSegment& seg, double t) {
  if (t < -1e-12 || t > seg.length + 1e-9) {
    throw DomainError(fmt::format("geodesic parameter {} outside [0, {}]", t, seg.length));
  }
}

// State at parameter t, advancing from the nearest sample at or before t.
Eigen::VectorXd sampled_state(const Manifold& m, const GeodesicSegment& seg, double t) {
  check_parameter(seg, t);
  std::size_t i = 0;
  if (seg.step > 0.0) {
    i = static_cast<std::size_t>(std::clamp(std::floor(t / seg.step), 0.0,
                                            static_cast<double>(seg.samples.size() - 1)));
  }
  while (i > 0 && seg.samples[i].t > t) --i;
  const GeodesicSample& s = seg.samples[i];
  const int n = m.ambient_dimension();
  Eigen::VectorXd y(2 * n);
  y << s.point.coords, s.velocity.components;
  const double dt = t - s.t;
  if (dt != 0.0) detail::rk4_step(m, y, dt, false);
  return y;
}

}  // namespace

Point GeodesicSegment::point_at(const Manifold& m, double t) const {
  check_parameter(*this, t);
  if (samples.empty()) return geodesic_point(m, direction, t);
  return Point{sampled_state(m, *this, t).head(m.ambient_dimension())};
}

TangentVector GeodesicSegment::velocity_at(const Manifold& m, double t) const {
  check_parameter(*this, t);
  if (samples.empty()) {
    Point p = geodesic_point(m, direction, t);
    Eigen::VectorXd v = closed_form_velocity(m, direction, t);
    return TangentVector{std::move(p), std::move(v)};
  }
  const int n = m.ambient_dimension();
  const Eigen::VectorXd y = sampled_state(m, *this, t);
  Point p{y.head(n)};
  return TangentVector{p, y.segment(n, n)};
}

GeodesicSegment make_geodesic(const Manifold& m, const TangentVector& direction, double length,
                              IntegrationOptions options) {
  if (!(length >= 0.0)) throw DomainError("geodesic length must be non-negative");
  const TangentVector unit = normalized(m, direction);
  if (m.has_constant_curvature()) {
    GeodesicSegment seg;
    seg.base = unit.base;
    seg.direction = unit;
    seg.length = length;
    return seg;
  }
  options.step = std::min(options.step, m.settings().step);
  return integrate_geodesic(m, unit, length, options);
}

GeodesicSegment integrate_geodesic(const Manifold& m, const TangentVector& direction,
                                   double length, IntegrationOptions options) {
  if (!(length >= 0.0)) throw DomainError("geodesic length must be non-negative");
  m.check_point(direction.base);
  m.check_tangent(direction);
  const TangentVector unit = normalized(m, direction);
  const Eigen::VectorXd y0 = initial_state(unit);
  if (length == 0.0) {
    RawRun run{{0.0}, {y0}, true};
    return segment_from_run(m, unit, 0.0, run);
  }
  const int steps = step_count(length, options.step);
  const RawRun coarse = run_flow(m, y0, length, steps, false, false);
  const RawRun fine = run_flow(m, y0, length, 2 * steps, false, false);
  double err = 0.0;
  for (int i = 0; i <= steps; ++i) {
    err = std::max(err, (coarse.states[i] - fine.states[2 * i]).norm());
  }
  GeodesicSegment seg = segment_from_run(m, unit, length, coarse);
  seg.error_estimate = err * 16.0 / 15.0;
  if (seg.error_estimate > options.tolerance) {
    throw ConvergenceError(fmt::format(
        "step {} too coarse: Richardson error estimate {} exceeds tolerance {}", options.step,
        seg.error_estimate, options.tolerance));
  }
  return seg;
}

PartialGeodesic integrate_geodesic_until_exit(const Manifold& m, const TangentVector& direction,
                                              double length, double step) {
  const TangentVector unit = normalized(m, direction);
  const RawRun run = run_flow(m, initial_state(unit), length, step_count(length, step), false, true);
  return PartialGeodesic{segment_from_run(m, unit, length, run), run.complete};
}

void write_geodesic_csv(std::ostream& out, const GeodesicSegment& segment) {
  if (segment.samples.empty()) throw DomainError("closed-form segment has no samples to export");
  out << "t";
  for (int i = 0; i < segment.base.coords.size(); ++i) out << ",x" << i;
  out << "\n";
  for (const GeodesicSample& s : segment.samples) {
    out << fmt::format("{:.17g}", s.t);
    for (int i = 0; i < s.point.coords.size(); ++i) out << fmt::format(",{:.17g}", s.point.coords(i));
    out << "\n";
  }
}

namespace {

template <typename Integrand>
double quadrature(const SampledCurve& curve, Integrand&& value_at) {
  const std::size_t n = curve.params.size();
  if (n < 2 || curve.velocities.size() != n) {
    throw DomainError("curve needs at least two samples with matching velocities");
  }
  const double h0 = curve.params[1] - curve.params[0];
  bool uniform = h0 > 0.0;
  for (std::size_t i = 1; i < n && uniform; ++i) {
    uniform = std::abs((curve.params[i] - curve.params[i - 1]) - h0) <= 1e-9 * std::abs(h0);
  }
  if (uniform && n % 2 == 1) {
    double acc = value_at(0) + value_at(n - 1);
    for (std::size_t i = 1; i + 1 < n; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * value_at(i);
    return acc * h0 / 3.0;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    acc += 0.5 * (curve.params[i] - curve.params[i - 1]) * (value_at(i) + value_at(i - 1));
  }
  return acc;
}

}  // namespace

double energy(const Manifold& m, const SampledCurve& curve) {
  return quadrature(curve, [&](std::size_t i) {
    const TangentVector& v = curve.velocities[i];
    return m.inner_at(v.base.coords, v.components, v.components);
  });
}

double length(const Manifold& m, const SampledCurve& curve) {
  return quadrature(curve, [&](std::size_t i) { return metric_norm(m, curve.velocities[i]); });
}

SampledCurve curve_from_geodesic(const GeodesicSegment& segment, double interval) {
  if (!(interval > 0.0)) throw DomainError("curve interval must be positive");
  if (segment.samples.empty()) {
    throw DomainError("curve_from_geodesic needs an integrated (sampled) segment");
  }
  SampledCurve curve;
  const double scale = segment.length / interval;
  for (const GeodesicSample& s : segment.samples) {
    curve.params.push_back(segment.length > 0.0 ? s.t / scale : 0.0);
    curve.velocities.push_back(TangentVector{s.point, s.velocity.components * scale});
  }
  if (curve.params.size() == 1) {
    curve.params.push_back(interval);
    curve.velocities.push_back(curve.velocities.front());
  }
  return curve;
}

double first_variation_check(const Manifold& m, const Point& p,
                             const std::function<Eigen::VectorXd(double)>& frame_coefficients,
                             double fd_step, double integration_step) {
  const std::vector<Eigen::VectorXd> frame = m.orthonormal_frame(p);
  auto variation_vector = [&](double s) { return m.from_frame(p, frame, frame_coefficients(s)); };
  // Energy of c_s on [0, 1] from quadrature over integrated samples. An
  // odd sample count keeps the rule on Simpson.
  auto curve_energy = [&](double s) {
    const TangentVector v = variation_vector(s);
    const double len = metric_norm(m, v);
    if (len == 0.0) return 0.0;
    int steps = step_count(len, integration_step);
    if (steps % 2 == 1) ++steps;
    const GeodesicSegment seg = integrate_geodesic(m, v, len, {len / steps, 1e-6});
    return energy(m, curve_from_geodesic(seg, 1.0));
  };
  const double de_ds = (curve_energy(fd_step) - curve_energy(-fd_step)) / (2.0 * fd_step);

  const TangentVector v0 = variation_vector(0.0);
  const double len0 = metric_norm(m, v0);
  if (len0 == 0.0) return std::abs(de_ds);
  const Point plus = exp_map(m, variation_vector(fd_step));
  const Point minus = exp_map(m, variation_vector(-fd_step));
  const Eigen::VectorXd sigma_dot = (plus.coords - minus.coords) / (2.0 * fd_step);
  const GeodesicSegment seg = integrate_geodesic(m, v0, len0, {integration_step, 1e-6});
  const GeodesicSample& end = seg.samples.back();
  const Eigen::VectorXd c_dot = end.velocity.components * len0;
  const double formula = 2.0 * m.inner_at(end.point.coords, sigma_dot, c_dot);
  return std::abs(de_ds - formula);
}

double JacobiSolution::residual() const {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double h = t[i + 1] - t[i - 1];
    const double ddj = (dj[i + 1] - dj[i - 1]) / h;
    worst = std::max(worst, std::abs(ddj + curvature[i] * j[i]));
  }
  return worst;
}

JacobiSolution integrate_jacobi(const Manifold& m, const TangentVector& direction, double length,
                                double step) {
  const TangentVector unit = normalized(m, direction);
  const int n = m.ambient_dimension();
  Eigen::VectorXd y0(2 * n + 2);
  y0 << unit.base.coords, unit.components, 0.0, 1.0;
  const RawRun run = run_flow(m, y0, length, step_count(length, step), true, true);

  JacobiSolution sol;
  RawRun geo;
  geo.t = run.t;
  geo.complete = run.complete;
  for (const Eigen::VectorXd& y : run.states) geo.states.push_back(y.head(2 * n));
  sol.geodesic = segment_from_run(m, unit, length, geo);
  sol.complete = run.complete;
  sol.reached = run.t.back();
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    sol.t.push_back(run.t[i]);
    sol.j.push_back(run.states[i](2 * n));
    sol.dj.push_back(run.states[i](2 * n + 1));
    sol.curvature.push_back(m.curvature_at(Point{run.states[i].head(n)}));
  }
  return sol;
}

JacobiSolution integrate_jacobi(const Manifold& m, const GeodesicSegment& geodesic, double step) {
  JacobiSolution sol = integrate_jacobi(m, geodesic.direction, geodesic.length, step);
  if (!sol.complete) {
    throw ChartExitError("curvature evaluation left the profile interval", sol.reached);
  }
  return sol;
}

}  // namespace geolens

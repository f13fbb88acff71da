#include "geolens/radii.hpp"

#include <algorithm>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include <fmt/format.h>

#include "geolens/errors.hpp"
#include "geolens/geodesic.hpp"

namespace geolens {

namespace {

// Root of the cubic Hermite interpolant through (0, y0, dy0), (h, y1, dy1)
// where y0 > 0 >= y1.
double hermite_root(double t0, double h, double y0, double dy0, double y1, double dy1) {
  auto eval = [&](double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * dy0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * dy1;
  };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return t0 + 0.5 * (lo + hi) * h;
}

enum class Target { Field, Derivative };

// First downward zero crossing of j (or j') along one Jacobi solution.
std::optional<double> first_zero(const JacobiSolution& sol, Target target) {
  for (std::size_t i = 1; i + 1 < sol.t.size(); ++i) {
    double y0, dy0, y1, dy1;
    if (target == Target::Field) {
      y0 = sol.j[i];
      dy0 = sol.dj[i];
      y1 = sol.j[i + 1];
      dy1 = sol.dj[i + 1];
    } else {
      y0 = sol.dj[i];
      dy0 = -sol.curvature[i] * sol.j[i];
      y1 = sol.dj[i + 1];
      dy1 = -sol.curvature[i + 1] * sol.j[i + 1];
    }
    if (y0 > 0.0 && y1 <= 0.0) {
      return hermite_root(sol.t[i], sol.t[i + 1] - sol.t[i], y0, dy0, y1, dy1);
    }
  }
  return std::nullopt;
}

RadiusValue search(const Manifold& m, const Point& x, int directions,
                   const RadiiOptions& options, Target target) {
  if (directions < 1) throw DomainError("direction count must be at least 1");
  m.check_point(x);
  const std::vector<Eigen::VectorXd> frame = m.orthonormal_frame(x);
  double found = INFINITY;
  double undecided = INFINITY;
  for (int i = 0; i < directions; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / directions;
    const TangentVector dir{x, std::cos(theta) * frame[0] + std::sin(theta) * frame[1]};
    const JacobiSolution sol = integrate_jacobi(m, dir, options.horizon, options.step);
    if (auto z = first_zero(sol, target)) {
      found = std::min(found, *z);
    } else {
      undecided = std::min(undecided, sol.reached);
    }
  }
  RadiusValue out;
  out.provenance = Provenance::NumericEstimate;
  if (found <= undecided) {
    out.value = found;
    out.lower_bound = false;
  } else {
    out.value = undecided;
    out.lower_bound = true;
  }
  return out;
}

RadiusValue closed(double v) { return RadiusValue{v, false, Provenance::ClosedForm}; }

std::string csv_value(const RadiusValue& r) {
  if (!r.available()) return "";
  if (r.infinite()) return "inf";
  return fmt::format("{:.17g}", r.value);
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm:
      return "closed-form";
    case Provenance::NumericEstimate:
      return "numeric-estimate";
    case Provenance::UserCertified:
      return "user-certified";
    case Provenance::Combined:
      return "numeric-estimate/user-certified";
    case Provenance::Unavailable:
      return "unavailable";
  }
  return "unknown";
}

std::string RadiusValue::format() const {
  if (!available()) return "n/a";
  if (infinite()) return "inf";
  return fmt::format("{}{:.10g}", lower_bound ? ">= " : "", value);
}

RadiusValue conjugate_radius(const Manifold& m, const Point& x, int directions,
                             const RadiiOptions& options) {
  return search(m, x, directions, options, Target::Field);
}

RadiusValue focal_radius(const Manifold& m, const Point& x, int directions,
                         const RadiiOptions& options) {
  return search(m, x, directions, options, Target::Derivative);
}

RadiusValue convexity_radius(const RadiusValue& focal, const RadiusValue& injectivity) {
  if (!injectivity.available()) {
    throw PreconditionError("convexity radius needs a closed-form or certified injectivity radius");
  }
  if (!focal.available()) throw PreconditionError("convexity radius needs the focal radius");
  const double half_inj = injectivity.value / 2.0;
  RadiusValue out;
  if (focal.provenance == injectivity.provenance) {
    out.provenance = focal.provenance;
  } else {
    out.provenance = Provenance::Combined;
  }
  if (half_inj <= focal.value) {
    out.value = half_inj;
    out.lower_bound = injectivity.lower_bound;
  } else {
    out.value = focal.value;
    out.lower_bound = focal.lower_bound;
  }
  return out;
}

RadiiReport closed_form_radii(const Manifold& m) {
  if (!m.has_constant_curvature()) {
    throw DomainError("closed-form radii need a constant-curvature model");
  }
  RadiiReport r;
  const double k = m.curvature();
  if (k > 0.0) {
    const double rho = 1.0 / std::sqrt(k);
    r.injectivity = closed(std::numbers::pi * rho);
    r.conjugate = closed(std::numbers::pi * rho);
    r.focal = closed(std::numbers::pi * rho / 2.0);
    r.loop_length = closed(2.0 * std::numbers::pi * rho);
  } else {
    r.injectivity = closed(INFINITY);
    r.conjugate = closed(INFINITY);
    r.focal = closed(INFINITY);
    r.loop_length = closed(INFINITY);
  }
  r.convexity = convexity_radius(r.focal, r.injectivity);
  return r;
}

RadiiReport compute_radii(const Manifold& m, const RadiiOptions& options) {
  if (m.has_constant_curvature()) return closed_form_radii(m);
  if (options.base_points < 1) throw DomainError("base point count must be at least 1");

  const Profile& prof = m.profile();
  RadiiReport r;
  r.conjugate = RadiusValue{INFINITY, false, Provenance::NumericEstimate};
  r.focal = RadiusValue{INFINITY, false, Provenance::NumericEstimate};
  auto fold = [](RadiusValue& acc, const RadiusValue& v) {
    if (v.value < acc.value || (v.value == acc.value && v.lower_bound)) {
      acc.value = v.value;
      acc.lower_bound = v.lower_bound;
    }
  };
  for (int b = 0; b < options.base_points; ++b) {
    const double u = prof.lo() + (prof.hi() - prof.lo()) * (b + 0.5) / options.base_points;
    const Point x = m.point(Eigen::Vector2d(u, 0.0));
    fold(r.conjugate, conjugate_radius(m, x, options.directions, options));
    fold(r.focal, focal_radius(m, x, options.directions, options));
  }
  if (auto inj = m.certified_injectivity()) {
    r.injectivity = RadiusValue{*inj, false, Provenance::UserCertified};
    r.convexity = convexity_radius(r.focal, r.injectivity);
  }
  if (auto loop = m.certified_loop_length()) {
    r.loop_length = RadiusValue{*loop, false, Provenance::UserCertified};
  }
  return r;
}

RadiiReport::Identities RadiiReport::check_identities(double tol) const {
  Identities id;
  if (convexity.available() && injectivity.available() && focal.available()) {
    const double expected = std::min(focal.value, injectivity.value / 2.0);
    id.convexity_residual = (std::isinf(expected) && convexity.infinite())
                                ? 0.0
                                : std::abs(convexity.value - expected);
    id.convexity_ok = id.convexity_residual <= tol;
  } else {
    id.convexity_residual = NAN;
    id.convexity_ok = !convexity.available();
  }

  const bool all_known = injectivity.available() && conjugate.available() &&
                         loop_length.available() && !conjugate.lower_bound;
  if (all_known) {
    const double lhs = injectivity.value / 2.0;
    const double rhs = std::min(conjugate.value / 2.0, loop_length.value / 4.0);
    if (std::isinf(lhs) && std::isinf(rhs)) {
      id.injectivity_residual = 0.0;
    } else {
      id.injectivity_residual = std::abs(lhs - rhs);
    }
    id.injectivity_ok = id.injectivity_residual <= tol;
  } else {
    // Not checkable from the available data.
    id.injectivity_ok = true;
  }

  if (focal.available() && conjugate.available()) {
    id.focal_gap = std::isinf(conjugate.value) ? INFINITY : conjugate.value / 2.0 - focal.value;
    // A horizon-limited Conj cannot refute the inequality.
    id.focal_ok = id.focal_gap >= -tol || conjugate.lower_bound;
  } else {
    id.focal_ok = true;
  }
  return id;
}

void write_radii_text(std::ostream& out, const RadiiReport& report) {
  const std::pair<const char*, const RadiusValue*> rows[] = {
      {"convexity", &report.convexity},   {"injectivity", &report.injectivity},
      {"conjugate", &report.conjugate},   {"focal", &report.focal},
      {"loop_length", &report.loop_length}};
  for (const auto& [name, value] : rows) {
    out << fmt::format("{:<12} {:>22}  {}\n", name, value->format(), to_string(value->provenance));
  }
}

void write_radii_csv(std::ostream& out, const RadiiReport& report) {
  out << "radius,value,lower_bound,provenance\n";
  const std::pair<const char*, const RadiusValue*> rows[] = {
      {"convexity", &report.convexity},   {"injectivity", &report.injectivity},
      {"conjugate", &report.conjugate},   {"focal", &report.focal},
      {"loop_length", &report.loop_length}};
  for (const auto& [name, value] : rows) {
    out << fmt::format("{},{},{},{}\n", name, csv_value(*value), value->lower_bound ? 1 : 0,
                       to_string(value->provenance));
  }
}

}  // namespace geolens

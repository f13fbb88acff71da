#include "geolens/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "geolens/detail/flow.hpp"
#include "geolens/errors.hpp"

namespace geolens {

namespace {

double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

// Radius 1/sqrt(|k|) of a curved constant-curvature model.
double model_radius(double k) { return 1.0 / std::sqrt(std::abs(k)); }

Point exp_unchecked(const Manifold& m, const Point& p, const Eigen::VectorXd& v) {
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return Point{p.coords + v};
    case ModelKind::Sphere: {
      const double rho = model_radius(m.curvature());
      const double len = v.norm();
      if (len == 0.0) return p;
      const double theta = len / rho;
      Eigen::VectorXd x = std::cos(theta) * p.coords + (rho * std::sin(theta) / len) * v;
      m.renormalize(x);
      return Point{std::move(x)};
    }
    case ModelKind::Hyperbolic: {
      const double rho = model_radius(m.curvature());
      const double len = std::sqrt(std::max(0.0, minkowski(v, v)));
      if (len == 0.0) return p;
      const double theta = len / rho;
      Eigen::VectorXd x = std::cosh(theta) * p.coords + (rho * std::sinh(theta) / len) * v;
      m.renormalize(x);
      return Point{std::move(x)};
    }
    case ModelKind::SurfaceOfRevolution: {
      const double len = std::sqrt(std::max(0.0, m.inner_at(p.coords, v, v)));
      if (len > m.settings().horizon) {
        throw DomainError(fmt::format("|v| = {} exceeds the integration horizon {}", len,
                                      m.settings().horizon));
      }
      if (len == 0.0) return p;
      const Eigen::VectorXd y = detail::flow_unit_time(m, p.coords, v);
      return Point{y.head(2)};
    }
  }
  throw GeometryError("unknown model kind");
}

TangentVector shoot(const Manifold& m, const Point& p, const Point& q) {
  const Eigen::Vector2d x0 = p.coords;
  double dv = std::remainder(q.coords(1) - p.coords(1), 2.0 * std::numbers::pi);
  const Eigen::Vector2d target(q.coords(0), p.coords(1) + dv);
  if ((target - x0).norm() < 1e-15) return TangentVector{p, Eigen::Vector2d::Zero()};

  const Profile& prof = m.profile();
  const double fq = prof.f(target(0));
  auto residual_norm = [fq](const Eigen::Vector2d& r) {
    return std::sqrt(r(0) * r(0) + fq * fq * r(1) * r(1));
  };
  const double goal = 1e-3 * m.settings().bvp_tolerance;

  const Eigen::Vector2d guesses[] = {target - x0, 0.5 * (target - x0)};
  for (const Eigen::Vector2d& guess : guesses) {
    Eigen::Vector2d w = guess;
    detail::SensitiveEndpoint end;
    try {
      end = detail::flow_with_sensitivity(m, x0, w);
    } catch (const ChartExitError&) {
      continue;
    }
    double res = residual_norm(end.position - target);
    for (int it = 0; it < m.settings().max_newton_iterations && res > goal; ++it) {
      const Eigen::Vector2d dw = end.jacobian.partialPivLu().solve(end.position - target);
      if (!dw.allFinite()) break;
      double lambda = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
        const Eigen::Vector2d trial = w - lambda * dw;
        const double speed = std::sqrt(std::max(0.0, m.inner_at(x0, trial, trial)));
        if (speed > m.settings().horizon) continue;
        try {
          detail::SensitiveEndpoint e = detail::flow_with_sensitivity(m, x0, trial);
          const double r = residual_norm(e.position - target);
          if (r < res) {
            w = trial;
            end = e;
            res = r;
            improved = true;
            break;
          }
        } catch (const ChartExitError&) {
        }
      }
      if (!improved) break;
    }
    if (res <= goal) {
      const double len = std::sqrt(m.inner_at(x0, w, w));
      if (m.certified_injectivity() && len >= *m.certified_injectivity()) {
        throw DomainError(fmt::format("log: distance {} reaches the certified injectivity bound {}",
                                      len, *m.certified_injectivity()));
      }
      return TangentVector{p, w};
    }
  }
  throw ConvergenceError(fmt::format("log: shooting failed between ({}, {}) and ({}, {})",
                                     p.coords(0), p.coords(1), q.coords(0), q.coords(1)));
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Euclidean:
      return "euclidean";
    case ModelKind::Sphere:
      return "sphere";
    case ModelKind::Hyperbolic:
      return "hyperbolic";
    case ModelKind::SurfaceOfRevolution:
      return "surface_of_revolution";
  }
  return "unknown";
}

Manifold Manifold::euclidean(int dimension) {
  if (dimension < 2) throw DomainError("model dimension must be at least 2");
  Manifold m;
  m.kind_ = ModelKind::Euclidean;
  m.dimension_ = dimension;
  m.curvature_ = 0.0;
  return m;
}

Manifold Manifold::sphere(int dimension, double curvature) {
  if (dimension < 2) throw DomainError("model dimension must be at least 2");
  if (!(curvature > 0.0) || !std::isfinite(curvature)) {
    throw DomainError("sphere curvature must be positive");
  }
  Manifold m;
  m.kind_ = ModelKind::Sphere;
  m.dimension_ = dimension;
  m.curvature_ = curvature;
  return m;
}

Manifold Manifold::hyperbolic(int dimension, double curvature) {
  if (dimension < 2) throw DomainError("model dimension must be at least 2");
  if (!(curvature < 0.0) || !std::isfinite(curvature)) {
    throw DomainError("hyperbolic curvature must be negative");
  }
  Manifold m;
  m.kind_ = ModelKind::Hyperbolic;
  m.dimension_ = dimension;
  m.curvature_ = curvature;
  return m;
}

Manifold Manifold::surface_of_revolution(Profile profile, NumericSettings settings) {
  if (!(settings.step > 0.0)) throw DomainError("integration step must be positive");
  Manifold m;
  m.kind_ = ModelKind::SurfaceOfRevolution;
  m.dimension_ = 2;
  m.curvature_ = NAN;
  m.profile_ = std::move(profile);
  m.settings_ = settings;
  return m;
}

int Manifold::ambient_dimension() const {
  switch (kind_) {
    case ModelKind::Sphere:
    case ModelKind::Hyperbolic:
      return dimension_ + 1;
    default:
      return dimension_;
  }
}

double Manifold::curvature() const {
  if (!has_constant_curvature()) {
    throw DomainError("surface of revolution has no single curvature value");
  }
  return curvature_;
}

const Profile& Manifold::profile() const {
  if (!profile_) throw DomainError("model has no profile");
  return *profile_;
}

Manifold Manifold::with_settings(const NumericSettings& settings) const {
  if (!(settings.step > 0.0)) throw DomainError("integration step must be positive");
  Manifold m = *this;
  m.settings_ = settings;
  return m;
}

Manifold Manifold::with_certified_radii(std::optional<double> injectivity,
                                        std::optional<double> loop_length) const {
  if (injectivity && !(*injectivity > 0.0)) throw DomainError("certified Inj must be positive");
  if (loop_length && !(*loop_length > 0.0)) throw DomainError("certified L must be positive");
  Manifold m = *this;
  m.certified_injectivity_ = injectivity;
  m.certified_loop_length_ = loop_length;
  return m;
}

std::string Manifold::describe() const {
  switch (kind_) {
    case ModelKind::Euclidean:
      return fmt::format("euclidean(n={})", dimension_);
    case ModelKind::Sphere:
    case ModelKind::Hyperbolic:
      return fmt::format("{}(n={}, k={})", to_string(kind_), dimension_, curvature_);
    case ModelKind::SurfaceOfRevolution:
      return fmt::format("surface_of_revolution({})", profile_->descriptor());
  }
  return "unknown";
}

double Manifold::curvature_at(const Point& p) const {
  if (has_constant_curvature()) return curvature_;
  return profile_->gauss_curvature(p.coords(0));
}

std::pair<double, double> Manifold::curvature_bounds() const {
  if (has_constant_curvature()) return {curvature_, curvature_};
  return profile_->curvature_bounds();
}

Point Manifold::basepoint() const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(ambient_dimension());
  switch (kind_) {
    case ModelKind::Sphere:
    case ModelKind::Hyperbolic:
      x(0) = model_radius(curvature_);
      break;
    case ModelKind::SurfaceOfRevolution:
      x(0) = 0.5 * (profile_->lo() + profile_->hi());
      break;
    default:
      break;
  }
  return Point{std::move(x)};
}

Point Manifold::point(Eigen::VectorXd coords) const {
  Point p{std::move(coords)};
  check_point(p);
  return p;
}

TangentVector Manifold::tangent(const Point& base, Eigen::VectorXd components) const {
  TangentVector v{base, std::move(components)};
  check_point(base);
  check_tangent(v);
  return v;
}

void Manifold::check_point(const Point& p) const {
  if (p.coords.size() != ambient_dimension()) {
    throw DomainError(fmt::format("point has {} coordinates, model expects {}", p.coords.size(),
                                  ambient_dimension()));
  }
  if (!p.coords.allFinite()) throw DomainError("point has non-finite coordinates");
  const double tol = settings_.manifold_tolerance;
  switch (kind_) {
    case ModelKind::Sphere: {
      const double rho = model_radius(curvature_);
      if (std::abs(p.coords.norm() - rho) > tol * std::max(1.0, rho)) {
        throw DomainError("point is off the sphere");
      }
      break;
    }
    case ModelKind::Hyperbolic: {
      const double rho = model_radius(curvature_);
      const double c = minkowski(p.coords, p.coords) + rho * rho;
      if (p.coords(0) <= 0.0 || std::abs(c) > tol * std::max(1.0, p.coords.squaredNorm())) {
        throw DomainError("point is off the hyperboloid sheet");
      }
      break;
    }
    case ModelKind::SurfaceOfRevolution:
      if (!profile_->contains(p.coords(0))) throw DomainError("point outside the profile chart");
      break;
    default:
      break;
  }
}

void Manifold::check_tangent(const TangentVector& v) const {
  if (v.components.size() != ambient_dimension()) {
    throw DomainError("tangent vector has the wrong number of components");
  }
  if (!v.components.allFinite()) throw DomainError("tangent vector is not finite");
  const double tol = settings_.manifold_tolerance;
  const double scale = std::max(1.0, v.components.norm()) * std::max(1.0, v.base.coords.norm());
  switch (kind_) {
    case ModelKind::Sphere:
      if (std::abs(v.base.coords.dot(v.components)) > tol * scale) {
        throw DomainError("vector is not tangent to the sphere");
      }
      break;
    case ModelKind::Hyperbolic:
      if (std::abs(minkowski(v.base.coords, v.components)) > tol * scale) {
        throw DomainError("vector is not tangent to the hyperboloid");
      }
      break;
    default:
      break;
  }
}

double Manifold::inner_at(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                          const Eigen::VectorXd& b) const {
  switch (kind_) {
    case ModelKind::Hyperbolic:
      return minkowski(a, b);
    case ModelKind::SurfaceOfRevolution: {
      const double f = profile_->f(p(0));
      return a(0) * b(0) + f * f * a(1) * b(1);
    }
    default:
      return a.dot(b);
  }
}

std::vector<Eigen::VectorXd> Manifold::orthonormal_frame(const Point& p,
                                                         const Eigen::VectorXd* first) const {
  const int n = ambient_dimension();
  std::vector<Eigen::VectorXd> candidates;
  if (first) candidates.push_back(*first);
  if (kind_ == ModelKind::SurfaceOfRevolution) {
    candidates.push_back(Eigen::Vector2d(1.0, 0.0));
    candidates.push_back(Eigen::Vector2d(0.0, 1.0));
  } else {
    const double rho2 = has_constant_curvature() && curvature_ != 0.0
                            ? 1.0 / std::abs(curvature_)
                            : 0.0;
    // Start from the axis least aligned with p so the projections stay
    // well conditioned.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    if (kind_ != ModelKind::Euclidean) {
      std::stable_sort(order.begin(), order.end(), [&p](int a, int b) {
        return std::abs(p.coords(a)) < std::abs(p.coords(b));
      });
    }
    for (int i : order) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i);
      if (kind_ == ModelKind::Sphere) {
        e -= (p.coords.dot(e) / rho2) * p.coords;
      } else if (kind_ == ModelKind::Hyperbolic) {
        e += (minkowski(p.coords, e) / rho2) * p.coords;
      }
      candidates.push_back(std::move(e));
    }
  }

  std::vector<Eigen::VectorXd> frame;
  for (Eigen::VectorXd c : candidates) {
    if (static_cast<int>(frame.size()) == dimension_) break;
    const double original = std::sqrt(std::max(0.0, inner_at(p.coords, c, c)));
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Eigen::VectorXd& e : frame) c -= inner_at(p.coords, c, e) * e;
    }
    const double len = std::sqrt(std::max(0.0, inner_at(p.coords, c, c)));
    if (len < 1e-6 * original) continue;
    frame.push_back(c / len);
  }
  if (static_cast<int>(frame.size()) != dimension_) {
    throw DomainError("could not build an orthonormal tangent frame");
  }
  return frame;
}

TangentVector Manifold::from_frame(const Point& p, const std::vector<Eigen::VectorXd>& frame,
                                   const Eigen::VectorXd& coefficients) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ambient_dimension());
  for (int i = 0; i < coefficients.size(); ++i) v += coefficients(i) * frame.at(i);
  return TangentVector{p, std::move(v)};
}

Eigen::VectorXd Manifold::geodesic_acceleration(const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& xdot) const {
  const int n = ambient_dimension();
  Eigen::VectorXd y(2 * n);
  y << x, xdot;
  return detail::flow_rhs(*this, y, false).tail(n);
}

void Manifold::renormalize(Eigen::VectorXd& x) const {
  if (kind_ == ModelKind::Sphere) {
    x *= model_radius(curvature_) / x.norm();
  } else if (kind_ == ModelKind::Hyperbolic) {
    const double rho = model_radius(curvature_);
    x(0) = std::sqrt(rho * rho + x.tail(x.size() - 1).squaredNorm());
  }
}

double metric_inner(const Manifold& m, const TangentVector& a, const TangentVector& b) {
  m.check_point(a.base);
  m.check_tangent(a);
  m.check_tangent(b);
  const double tol = m.settings().manifold_tolerance;
  if (a.base.coords.size() != b.base.coords.size() ||
      (a.base.coords - b.base.coords).norm() > tol * std::max(1.0, a.base.coords.norm())) {
    throw DomainError("metric_inner: tangent vectors have different base points");
  }
  return m.inner_at(a.base.coords, a.components, b.components);
}

double metric_norm(const Manifold& m, const TangentVector& v) {
  return std::sqrt(std::max(0.0, m.inner_at(v.base.coords, v.components, v.components)));
}

Point exp_map(const Manifold& m, const TangentVector& v) {
  m.check_point(v.base);
  m.check_tangent(v);
  return exp_unchecked(m, v.base, v.components);
}

TangentVector log_map(const Manifold& m, const Point& p, const Point& q) {
  m.check_point(p);
  m.check_point(q);
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return TangentVector{p, q.coords - p.coords};
    case ModelKind::Sphere: {
      const double rho = model_radius(m.curvature());
      const Eigen::VectorXd ph = p.coords / rho;
      const Eigen::VectorXd qh = q.coords / rho;
      const double plus = (ph + qh).norm();
      if (plus < 1e-9) throw DomainError("log: points are antipodal (cut locus)");
      const double theta = 2.0 * std::atan2((ph - qh).norm(), plus);
      Eigen::VectorXd u = qh - ph.dot(qh) * ph;
      const double un = u.norm();
      if (un == 0.0 || theta == 0.0) return TangentVector{p, Eigen::VectorXd::Zero(p.coords.size())};
      return TangentVector{p, (rho * theta / un) * u};
    }
    case ModelKind::Hyperbolic: {
      const double rho = model_radius(m.curvature());
      const double d = distance(m, p, q);
      Eigen::VectorXd u = q.coords + (minkowski(p.coords, q.coords) / (rho * rho)) * p.coords;
      const double un = std::sqrt(std::max(0.0, minkowski(u, u)));
      if (un == 0.0 || d == 0.0) return TangentVector{p, Eigen::VectorXd::Zero(p.coords.size())};
      return TangentVector{p, (d / un) * u};
    }
    case ModelKind::SurfaceOfRevolution:
      return shoot(m, p, q);
  }
  throw GeometryError("unknown model kind");
}

double distance(const Manifold& m, const Point& p, const Point& q) {
  switch (m.kind()) {
    case ModelKind::Euclidean:
      return (p.coords - q.coords).norm();
    case ModelKind::Sphere: {
      const double rho = model_radius(m.curvature());
      return 2.0 * rho * std::atan2((p.coords - q.coords).norm(), (p.coords + q.coords).norm());
    }
    case ModelKind::Hyperbolic: {
      const double rho = model_radius(m.curvature());
      const Eigen::VectorXd diff = p.coords - q.coords;
      const double chord = std::sqrt(std::max(0.0, minkowski(diff, diff)));
      return 2.0 * rho * std::asinh(chord / (2.0 * rho));
    }
    case ModelKind::SurfaceOfRevolution:
      return metric_norm(m, shoot(m, p, q));
  }
  throw GeometryError("unknown model kind");
}

Point geodesic_point(const Manifold& m, const TangentVector& unit_direction, double t) {
  return exp_unchecked(m, unit_direction.base, t * unit_direction.components);
}

double jacobi_sn(double k, double rho) {
  if (k > 0.0) return std::sin(std::sqrt(k) * rho) / std::sqrt(k);
  if (k < 0.0) return std::sinh(std::sqrt(-k) * rho) / std::sqrt(-k);
  return rho;
}

}  // namespace geolens

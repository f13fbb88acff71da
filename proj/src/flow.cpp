#include "geolens/detail/flow.hpp"

#include <cmath>

#include "geolens/errors.hpp"

namespace geolens::detail {

namespace {

double minkowski(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

}  // namespace

Eigen::VectorXd flow_rhs(const Manifold& m, const Eigen::VectorXd& y, bool with_jacobi) {
  const int n = m.ambient_dimension();
  Eigen::VectorXd dy(y.size());
  dy.head(n) = y.segment(n, n);
  double k = 0.0;
  if (m.kind() == ModelKind::SurfaceOfRevolution) {
    const Profile& prof = m.profile();
    const double u = y(0);
    const double f = prof.f(u);
    const double df = prof.df(u);
    const double du = y(2);
    const double dv = y(3);
    dy(2) = f * df * dv * dv;
    dy(3) = -2.0 * (df / f) * du * dv;
    if (with_jacobi) k = -prof.ddf(u) / f;
  } else {
    k = m.curvature();
    const Eigen::VectorXd x = y.head(n);
    const Eigen::VectorXd xd = y.segment(n, n);
    if (m.kind() == ModelKind::Euclidean) {
      dy.segment(n, n).setZero();
    } else {
      const double speed2 = m.kind() == ModelKind::Hyperbolic ? minkowski(xd, xd) : xd.squaredNorm();
      dy.segment(n, n) = -k * speed2 * x;
    }
  }
  if (with_jacobi) {
    dy(2 * n) = y(2 * n + 1);
    dy(2 * n + 1) = -k * y(2 * n);
  }
  return dy;
}

void rk4_step(const Manifold& m, Eigen::VectorXd& y, double h, bool with_jacobi) {
  try {
    const Eigen::VectorXd k1 = flow_rhs(m, y, with_jacobi);
    const Eigen::VectorXd k2 = flow_rhs(m, y + 0.5 * h * k1, with_jacobi);
    const Eigen::VectorXd k3 = flow_rhs(m, y + 0.5 * h * k2, with_jacobi);
    const Eigen::VectorXd k4 = flow_rhs(m, y + h * k3, with_jacobi);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  } catch (const DomainError& e) {
    throw ChartExitError(e.what(), 0.0);
  }
  if (m.kind() == ModelKind::SurfaceOfRevolution && !m.profile().contains(y(0))) {
    throw ChartExitError("geodesic left the profile interval", 0.0);
  }
}

Eigen::VectorXd flow_unit_time(const Manifold& m, const Eigen::VectorXd& x0,
                               const Eigen::VectorXd& v0) {
  const int n = m.ambient_dimension();
  const double speed = std::sqrt(std::max(0.0, m.inner_at(x0, v0, v0)));
  const int steps = std::max(1, static_cast<int>(std::ceil(speed / m.settings().step)));
  const double h = 1.0 / steps;
  Eigen::VectorXd y(2 * n);
  y << x0, v0;
  for (int i = 0; i < steps; ++i) rk4_step(m, y, h, false);
  return y;
}

SensitiveEndpoint flow_with_sensitivity(const Manifold& m, const Eigen::Vector2d& x0,
                                        const Eigen::Vector2d& v0) {
  const Profile& prof = m.profile();
  // y = [u, v, p, q, S (4x2 column-major)], S = d(u, v, p, q) / d(p0, q0).
  using Vec12 = Eigen::Matrix<double, 12, 1>;
  auto rhs = [&prof](const Vec12& y) {
    const double u = y(0);
    const double p = y(2);
    const double q = y(3);
    const double f = prof.f(u);
    const double df = prof.df(u);
    const double ddf = prof.ddf(u);
    const double g = df / f;
    const double dg = (ddf * f - df * df) / (f * f);
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(0, 2) = 1.0;
    a(1, 3) = 1.0;
    a(2, 0) = (df * df + f * ddf) * q * q;
    a(2, 3) = 2.0 * f * df * q;
    a(3, 0) = -2.0 * dg * p * q;
    a(3, 2) = -2.0 * g * q;
    a(3, 3) = -2.0 * g * p;
    Vec12 dy;
    dy(0) = p;
    dy(1) = q;
    dy(2) = f * df * q * q;
    dy(3) = -2.0 * g * p * q;
    Eigen::Map<const Eigen::Matrix<double, 4, 2>> s(y.data() + 4);
    Eigen::Map<Eigen::Matrix<double, 4, 2>> ds(dy.data() + 4);
    ds = a * s;
    return dy;
  };

  const double speed = std::sqrt(std::max(0.0, m.inner_at(x0, v0, v0)));
  const int steps = std::max(1, static_cast<int>(std::ceil(speed / m.settings().step)));
  const double h = 1.0 / steps;
  Vec12 y = Vec12::Zero();
  y.head<2>() = x0;
  y.segment<2>(2) = v0;
  y(4 + 2) = 1.0;      // dp/dp0
  y(4 + 4 + 3) = 1.0;  // dq/dq0
  try {
    for (int i = 0; i < steps; ++i) {
      const Vec12 k1 = rhs(y);
      const Vec12 k2 = rhs(y + 0.5 * h * k1);
      const Vec12 k3 = rhs(y + 0.5 * h * k2);
      const Vec12 k4 = rhs(y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  } catch (const DomainError& e) {
    throw ChartExitError(e.what(), 0.0);
  }
  if (!prof.contains(y(0))) throw ChartExitError("geodesic left the profile interval", 0.0);
  SensitiveEndpoint out;
  out.position = y.head<2>();
  Eigen::Map<const Eigen::Matrix<double, 4, 2>> s(y.data() + 4);
  out.jacobian = s.topRows<2>();
  return out;
}

}  // namespace geolens::detail

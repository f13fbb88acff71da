#pragma once

#include <Eigen/Dense>

#include "geolens/manifold.hpp"

// Fixed-step RK4 flows shared by the manifold and geodesic modules.
namespace geolens::detail {

// State layout: [x, x'] for a geodesic, [x, x', j, j'] when the scalar
// normal Jacobi equation j'' + K(x) j = 0 is carried along.
Eigen::VectorXd flow_rhs(const Manifold& m, const Eigen::VectorXd& y, bool with_jacobi);

// One classical RK4 step of size h. Throws ChartExitError (reached = 0) if a
// stage leaves the surface-of-revolution chart.
void rk4_step(const Manifold& m, Eigen::VectorXd& y, double h, bool with_jacobi);

// Integrates the geodesic with initial velocity v for unit time with a step
// no larger than m.settings().step in arclength. Returns [x(1), x'(1)].
Eigen::VectorXd flow_unit_time(const Manifold& m, const Eigen::VectorXd& x0,
                               const Eigen::VectorXd& v0);

// Surface of revolution only: time-one flow together with the 2x2 Jacobian
// d x(1) / d v0 from the variational equations.
struct SensitiveEndpoint {
  Eigen::Vector2d position;
  Eigen::Matrix2d jacobian;
};
SensitiveEndpoint flow_with_sensitivity(const Manifold& m, const Eigen::Vector2d& x0,
                                        const Eigen::Vector2d& v0);

}  // namespace geolens::detail

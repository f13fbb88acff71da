#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "geolens/profile.hpp"

namespace geolens {

enum class ModelKind { Euclidean, Sphere, Hyperbolic, SurfaceOfRevolution };

std::string to_string(ModelKind kind);

// A point in the model's global chart: Cartesian coordinates (Euclidean),
// an ambient vector of norm 1/sqrt(k) (sphere), a point on the upper sheet of
// the hyperboloid <x,x>_L = 1/k (hyperbolic) or (u, v) (surface of revolution).
struct Point {
  Eigen::VectorXd coords;
};

// Tangent vector at `base`, in the same ambient/chart coordinates as the point.
struct TangentVector {
  Point base;
  Eigen::VectorXd components;
};

// Numeric parameters of the surface-of-revolution model. Constant-curvature
// models only read the tolerances.
struct NumericSettings {
  double step = 2e-3;           // fixed RK4 step (arclength) for exp/log
  double horizon = 20.0;        // largest |v| accepted by the numeric exp map
  double manifold_tolerance = 1e-10;
  double bvp_tolerance = 1e-8;  // exp(log(p, q)) = q contract
  int max_newton_iterations = 60;
};

// A Riemannian model space. Immutable value type; cheap to copy.
class Manifold {
 public:
  static Manifold euclidean(int dimension);
  static Manifold sphere(int dimension, double curvature = 1.0);
  static Manifold hyperbolic(int dimension, double curvature = -1.0);
  static Manifold surface_of_revolution(Profile profile, NumericSettings settings = {});

  ModelKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  // Length of a coordinate vector.
  int ambient_dimension() const;
  bool has_constant_curvature() const { return kind_ != ModelKind::SurfaceOfRevolution; }
  // Sectional curvature of a constant-curvature model; throws for the
  // surface of revolution.
  double curvature() const;
  const Profile& profile() const;
  const NumericSettings& settings() const { return settings_; }
  Manifold with_settings(const NumericSettings& settings) const;

  // User-certified radii for the numeric model (never estimated).
  Manifold with_certified_radii(std::optional<double> injectivity,
                                std::optional<double> loop_length) const;
  std::optional<double> certified_injectivity() const { return certified_injectivity_; }
  std::optional<double> certified_loop_length() const { return certified_loop_length_; }

  std::string describe() const;

  // Sectional (Gauss) curvature at p.
  double curvature_at(const Point& p) const;
  // Lower/upper bound of the sectional curvature (sampled for the numeric model).
  std::pair<double, double> curvature_bounds() const;

  Point basepoint() const;
  // Validating constructors.
  Point point(Eigen::VectorXd coords) const;
  TangentVector tangent(const Point& base, Eigen::VectorXd components) const;
  void check_point(const Point& p) const;
  void check_tangent(const TangentVector& v) const;

  // Orthonormal basis of T_pX as component vectors. When `first` is given
  // (a non-zero tangent at p) the basis starts with its normalization.
  std::vector<Eigen::VectorXd> orthonormal_frame(const Point& p,
                                                 const Eigen::VectorXd* first = nullptr) const;
  TangentVector from_frame(const Point& p, const std::vector<Eigen::VectorXd>& frame,
                           const Eigen::VectorXd& coefficients) const;

  // g_p(a, b) on raw component vectors; no validation.
  double inner_at(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                  const Eigen::VectorXd& b) const;

  // Geodesic equation x'' = acceleration(x, x') in the model's coordinates.
  Eigen::VectorXd geodesic_acceleration(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& xdot) const;

  // Re-imposes the model constraint on an ambient point (sphere/hyperboloid)
  // or wraps nothing (Euclidean/surface of revolution).
  void renormalize(Eigen::VectorXd& x) const;

 private:
  Manifold() = default;

  ModelKind kind_ = ModelKind::Euclidean;
  int dimension_ = 2;
  double curvature_ = 0.0;
  std::optional<Profile> profile_;
  NumericSettings settings_;
  std::optional<double> certified_injectivity_;
  std::optional<double> certified_loop_length_;
};

// g_p(a, b). Throws DomainError on mismatched bases or off-manifold input.
double metric_inner(const Manifold& m, const TangentVector& a, const TangentVector& b);
double metric_norm(const Manifold& m, const TangentVector& v);

// exp_p(v) = c_v(1). Closed form for constant curvature; RK4 flow for the
// surface of revolution (throws DomainError past the horizon and
// ChartExitError when the geodesic leaves the profile interval).
Point exp_map(const Manifold& m, const TangentVector& v);

// Inverse of exp_p inside the injectivity radius. Throws DomainError at or
// beyond the cut locus (sphere antipode, certified bound) and
// ConvergenceError if shooting fails on the numeric model.
TangentVector log_map(const Manifold& m, const Point& p, const Point& q);

// Riemannian distance. Closed forms for constant curvature; |log_p(q)| for
// the surface of revolution.
double distance(const Manifold& m, const Point& p, const Point& q);

// exp_p(t u) for a unit tangent u (no validation; hot-path helper).
Point geodesic_point(const Manifold& m, const TangentVector& unit_direction, double t);

// Sphere/hyperbolic "sn" function: the norm at distance rho of a normal
// Jacobi field with J(0) = 0, |J'(0)| = 1 in constant curvature k.
double jacobi_sn(double k, double rho);

}  // namespace geolens

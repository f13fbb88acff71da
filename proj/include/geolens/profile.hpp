#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace geolens {

// One node of a tabulated profile: value and first two derivatives at u.
struct ProfileNode {
  double u = 0.0;
  double f = 0.0;
  double df = 0.0;
  double ddf = 0.0;
};

// Radius function f(u) > 0 of a surface of revolution with metric
// du^2 + f(u)^2 dv^2. The function is only known through evaluators for
// f, f' and f'' on a closed interval; queries outside the interval throw
// DomainError unless the profile is periodic, in which case u is wrapped.
class Profile {
 public:
  using Evaluator = std::function<double(double)>;

  Profile(std::string descriptor, Evaluator f, Evaluator df, Evaluator ddf,
          double lo, double hi, bool periodic);

  // f(u) = a + b cos(u), periodic on [-pi, pi]; requires a > |b|.
  static Profile torus(double a, double b);
  // f(u) = c cosh(u / c) on [-half_width, half_width].
  static Profile catenoid(double c, double half_width);
  // f(u) = rho sin(u / rho) on [margin, pi rho - margin]: a band of the round
  // sphere of radius rho, curvature 1 / rho^2.
  static Profile round_band(double rho, double margin);
  // f(u) = sin(u) (1 + eps cos(u)) on [margin, pi - margin]; positive,
  // non-constant curvature for small eps.
  static Profile pear(double eps, double margin);
  // Piecewise quintic Hermite interpolation of (f, f', f'') samples; the
  // interpolant is C^2 and reproduces the node data exactly.
  static Profile from_table(std::vector<ProfileNode> nodes);

  double f(double u) const;
  double df(double u) const;
  double ddf(double u) const;
  // Gauss curvature K(u) = -f''(u) / f(u).
  double gauss_curvature(double u) const;

  // Maps u into the domain (periodic) or throws DomainError.
  double wrap(double u) const;
  bool contains(double u) const;

  double lo() const { return impl_->lo; }
  double hi() const { return impl_->hi; }
  bool periodic() const { return impl_->periodic; }
  const std::string& descriptor() const { return impl_->descriptor; }

  // Min/max of K over a uniform sampling of the domain.
  std::pair<double, double> curvature_bounds(int samples = 2049) const;

 private:
  struct Impl {
    std::string descriptor;
    Evaluator f, df, ddf;
    double lo, hi;
    bool periodic;
  };
  std::shared_ptr<const Impl> impl_;
};

}  // namespace geolens

#pragma once

#include <cmath>
#include <iosfwd>
#include <string>

#include "geolens/manifold.hpp"

namespace geolens {

enum class Provenance { ClosedForm, NumericEstimate, UserCertified, Combined, Unavailable };

std::string to_string(Provenance p);

// A radius that may be infinite, or only known from below when a numeric
// search ran out of horizon (or chart) without a decision.
struct RadiusValue {
  double value = INFINITY;
  bool lower_bound = false;
  Provenance provenance = Provenance::Unavailable;

  bool available() const { return provenance != Provenance::Unavailable; }
  bool infinite() const { return std::isinf(value); }
  // "inf", ">= 12.5" or the value itself.
  std::string format() const;
};

struct RadiiOptions {
  int directions = 64;
  int base_points = 16;
  double horizon = 10.0;
  double step = 1e-3;
};

// Conv, Inj, Conj, Foc and L of a model.
struct RadiiReport {
  RadiusValue injectivity;
  RadiusValue conjugate;
  RadiusValue focal;
  RadiusValue loop_length;
  RadiusValue convexity;

  struct Identities {
    // |Conv - min(Foc, Inj/2)|
    double convexity_residual = 0.0;
    // |Inj/2 - min(Conj/2, L/4)|, NaN when not all inputs are finite values.
    double injectivity_residual = NAN;
    // Conj/2 - Foc (must be >= -tol)
    double focal_gap = INFINITY;
    bool convexity_ok = false;
    bool injectivity_ok = false;
    bool focal_ok = false;
    bool all_ok() const { return convexity_ok && injectivity_ok && focal_ok; }
  };
  Identities check_identities(double tol) const;
};

// First zero of the normal Jacobi field j (j(0) = 0, j'(0) = 1), minimized
// over `directions` evenly spaced unit directions at x.
RadiusValue conjugate_radius(const Manifold& m, const Point& x, int directions,
                             const RadiiOptions& options = {});
// First critical point of |J|, i.e. first zero of j'.
RadiusValue focal_radius(const Manifold& m, const Point& x, int directions,
                         const RadiiOptions& options = {});

// min(Foc, Inj/2). Throws PreconditionError when Inj is not available.
RadiusValue convexity_radius(const RadiusValue& focal, const RadiusValue& injectivity);

// Closed forms; throws DomainError for the surface of revolution.
RadiiReport closed_form_radii(const Manifold& m);

// Closed form for constant curvature. For the surface of revolution Foc and
// Conj come from Jacobi integration over base points and directions, Inj and
// L from the user-certified values on the manifold; Conv is unavailable
// without a certified Inj.
RadiiReport compute_radii(const Manifold& m, const RadiiOptions& options = {});

void write_radii_text(std::ostream& out, const RadiiReport& report);
void write_radii_csv(std::ostream& out, const RadiiReport& report);

}  // namespace geolens

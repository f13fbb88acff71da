#pragma once

#include <stdexcept>
#include <string>

namespace geolens {

// Base class for every error raised by the library.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point or tangent vector violates the model's constraint, or two
// tangent vectors live over different base points.
class DomainError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// A numeric geodesic left the coordinate chart of a surface of revolution.
class ChartExitError : public GeometryError {
 public:
  ChartExitError(const std::string& what, double reached)
      : GeometryError(what), reached_(reached) {}
  // Arclength parameter at which the chart was left.
  double reached() const { return reached_; }

 private:
  double reached_;
};

// Newton/shooting or integrator accuracy failure.
class ConvergenceError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Inputs violate a documented precondition (e.g. radii not below Conv(X)).
class PreconditionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geolens

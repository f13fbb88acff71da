#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geolens/manifold.hpp"
#include "geolens/radii.hpp"
#include "geolens/theorem_suite.hpp"

namespace geolens {

struct ManifoldSpec {
  std::string kind = "euclidean";  // euclidean | sphere | hyperbolic | surface_of_revolution
  int dimension = 2;
  std::optional<double> curvature;  // default 1 (sphere), -1 (hyperbolic)
  std::string profile;              // torus | catenoid | round_band | pear | table
  std::vector<double> profile_params;
  std::string profile_table;  // CSV of u,f,df,ddf; absolute after loading
  std::optional<double> injectivity;
  std::optional<double> loop_length;
};

struct Tolerances {
  double manifold = 1e-10;
  double bvp = 1e-8;
  double nesting = 1e-9;
  double full = 1e-9;
  double nesting_margin = 1e-6;
  double identity = 1e-6;
  double resolution = 1e-3;
};

// Resolved run configuration. Sections: [manifold], [balls], [sampling],
// [integration], [radii], [tolerances], [output].
struct RunConfig {
  ManifoldSpec manifold;
  std::vector<std::pair<double, double>> pairs;  // (R, r)
  int grid = 200;
  int budget = 4096;
  std::uint64_t seed = 0;
  double refine = 1e-4;
  double step = 2e-3;
  double horizon = 20.0;
  RadiiOptions radii;
  Tolerances tolerances;
  std::string output;
  std::string format = "text";  // report format written to `output`: text | json
};

// Parses "key = value" lines under "[section]" headers; '#' and ';' start
// comments. Unknown sections/keys and malformed values throw ConfigError.
// Relative table paths resolve against `base_dir`.
RunConfig parse_config(std::istream& in, const std::string& base_dir = "");
// Throws ConfigError when the file cannot be read.
RunConfig load_config(const std::string& path);

// Every key, numbers in shortest round-trip form; parse_config reproduces
// the same RunConfig.
void emit_config(std::ostream& out, const RunConfig& config);
std::string emit_config(const RunConfig& config);

// Range checks independent of the geometry; throws ConfigError.
void validate_config(const RunConfig& config);

Manifold build_manifold(const RunConfig& config);
ProfileOptions profile_options(const RunConfig& config);
SuiteSettings suite_settings(const RunConfig& config);
// Closed form, or numeric Foc with the certified Inj for the surface of
// revolution (unavailable without it).
RadiusValue model_convexity(const Manifold& m, const RunConfig& config);

}  // namespace geolens

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "geolens/lens.hpp"
#include "geolens/manifold.hpp"
#include "geolens/radii.hpp"

namespace geolens {

enum class ClaimStatus { Pass, Fail, ReportOnly };

std::string to_string(ClaimStatus status);

struct Measurement {
  std::string label;
  double value = 0.0;
};

struct ClaimEntry {
  std::string id;
  std::string description;
  ClaimStatus status = ClaimStatus::ReportOnly;
  std::vector<Measurement> measurements;
  // Witnesses of failures and notes.
  std::vector<std::string> notes;
};

struct ClaimInfo {
  const char* id;
  const char* description;
  bool report_only;
};

// The fixed registry; every report lists each id exactly once, in this order.
const std::vector<ClaimInfo>& claim_registry();

struct SuiteSettings {
  ProfileOptions profile;
  // Random grid pairs for the continuity modulus check.
  int continuity_pairs = 50;
  // Random (s, t) pairs with T <= s < t for the nesting check.
  int nesting_pairs = 20;
  // Random finite subsets per configuration for the Lipschitz check.
  int lipschitz_pairs = 20;
  int lipschitz_subset = 300;
  // Radii r + 1/k, k = 1, 2, 4, ..., 2^(limit_steps - 1).
  int limit_steps = 9;
  double limit_target = 1e-2;
  // Lower budget for the interior clouds fed to Hausdorff scans.
  int hausdorff_budget = 1024;
  // Allowed negative margin of nested samples.
  double nesting_margin = 1e-6;
  double identity_tolerance = 1e-6;
  // Band for the T checks: h = resolution * (R + r).
  double resolution = 1e-3;
  RadiiOptions radii;
};

struct SuiteConfig {
  Manifold manifold;
  std::vector<std::pair<double, double>> pairs;  // (R, r)
  SuiteSettings settings;
  // Required for the surface of revolution; closed form otherwise.
  RadiusValue convexity;
};

struct VerificationReport {
  std::string manifold;
  std::vector<std::pair<double, double>> pairs;
  std::vector<ClaimEntry> claims;
  std::uint64_t seed = 0;
  int grid = 0;
  int budget = 0;
  std::vector<Measurement> tolerances;
  // Resolved configuration text embedded by the caller.
  std::string resolved_config;

  // True iff no pass/fail claim failed.
  bool passed() const;
  const ClaimEntry& claim(const std::string& id) const;
};

// Convexity radius used for the hypothesis check (closed form or the
// config-supplied value).
RadiusValue suite_convexity(const SuiteConfig& config);

// Throws PreconditionError unless every pair satisfies 0 < r <= R < Conv.
void check_suite_preconditions(const SuiteConfig& config);

// All registry claims on the configured (R, r) matrix, the sphere
// counterexample and the speculation probes. Preconditions are checked for
// every pair before any computation.
VerificationReport run_main_theorem_suite(const SuiteConfig& config);

struct CounterexampleOptions {
  // (R, r) on the unit sphere, radii at least pi / 2.
  std::vector<std::pair<double, double>> pairs;
  int separations = 11;
  int budget = 4096;
  std::uint64_t seed = 0;
  double tolerance = 0.05;
};

CounterexampleOptions default_counterexample();

// Lens diameters on the unit 2-sphere for radii outside the hypothesis;
// passes when every diameter is pi within the tolerance.
ClaimEntry run_counterexample(const CounterexampleOptions& options);

// Report-only entries comparing S and T, the second differences of w after
// T and the one-sided slopes at T.
std::vector<ClaimEntry> run_speculation_probe(const SuiteConfig& config);

void write_report_text(std::ostream& out, const VerificationReport& report);
void write_report_json(std::ostream& out, const VerificationReport& report);

}  // namespace geolens

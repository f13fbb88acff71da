#include <numbers>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "geolens/errors.hpp"
#include "geolens/theorem_suite.hpp"
#include "json.hpp"

using namespace geolens;

namespace {

SuiteSettings light() {
  SuiteSettings s;
  s.profile.grid = 40;
  s.profile.budget = 2048;
  s.continuity_pairs = 10;
  s.nesting_pairs = 5;
  s.lipschitz_pairs = 5;
  s.lipschitz_subset = 60;
  s.limit_steps = 5;
  s.limit_target = 0.1;
  s.hausdorff_budget = 256;
  s.radii.directions = 4;
  return s;
}

}  // namespace

TEST(Registry, EveryClaimListedOnce) {
  const auto& reg = claim_registry();
  std::set<std::string> ids;
  int report_only = 0;
  for (const ClaimInfo& c : reg) {
    EXPECT_TRUE(ids.insert(c.id).second) << c.id;
    report_only += c.report_only ? 1 : 0;
  }
  for (const char* id :
       {"full_diameter_until_R_minus_r", "T_at_least_R_minus_r", "T_below_R",
        "diameter_exceeds_gap", "strictly_decreasing_after_T", "continuity_modulus",
        "nesting_after_T", "diameter_lipschitz", "monotone_limit", "convexity_radius_identity",
        "sphere_counterexample"}) {
    EXPECT_EQ(ids.count(id), 1u) << id;
  }
  EXPECT_EQ(report_only, 3);
}

TEST(Suite, EuclideanMatrixPasses) {
  const SuiteConfig cfg{Manifold::euclidean(2), {{1.0, 1.0}, {2.0, 1.0}}, light(), {}};
  const VerificationReport rep = run_main_theorem_suite(cfg);
  ASSERT_EQ(rep.claims.size(), claim_registry().size());
  for (std::size_t i = 0; i < rep.claims.size(); ++i) {
    EXPECT_EQ(rep.claims[i].id, claim_registry()[i].id);
    if (claim_registry()[i].report_only) {
      EXPECT_EQ(rep.claims[i].status, ClaimStatus::ReportOnly);
    } else {
      EXPECT_EQ(rep.claims[i].status, ClaimStatus::Pass) << rep.claims[i].id;
    }
  }
  EXPECT_TRUE(rep.passed());
}

TEST(Suite, SpherePairPasses) {
  const SuiteConfig cfg{Manifold::sphere(2), {{1.2, 0.6}}, light(), {}};
  const VerificationReport rep = run_main_theorem_suite(cfg);
  std::ostringstream text;
  write_report_text(text, rep);
  EXPECT_TRUE(rep.passed()) << text.str();
}

TEST(Suite, RadiusAtConvexityRejected) {
  const SuiteConfig cfg{Manifold::sphere(2), {{std::numbers::pi / 2, 1.0}}, light(), {}};
  EXPECT_THROW(run_main_theorem_suite(cfg), PreconditionError);
  const SuiteConfig torus{Manifold::surface_of_revolution(Profile::torus(2.0, 1.0)),
                          {{0.2, 0.1}}, light(), {}};
  EXPECT_THROW(check_suite_preconditions(torus), PreconditionError);
}

TEST(Suite, NoAdmissiblePairsLeavesPairClaimsUnevaluated) {
  const SuiteConfig cfg{Manifold::sphere(2), {}, light(), {}};
  const VerificationReport rep = run_main_theorem_suite(cfg);
  EXPECT_EQ(rep.claim("T_below_R").status, ClaimStatus::ReportOnly);
  EXPECT_EQ(rep.claim("convexity_radius_identity").status, ClaimStatus::Pass);
  EXPECT_EQ(rep.claim("sphere_counterexample").status, ClaimStatus::Pass);
}

TEST(Counterexample, DiameterIsPi) {
  CounterexampleOptions o = default_counterexample();
  o.budget = 512;
  o.separations = 5;
  const ClaimEntry e = run_counterexample(o);
  EXPECT_EQ(e.status, ClaimStatus::Pass);
  for (const Measurement& m : e.measurements) {
    if (m.label.find("max |w-pi|") != std::string::npos) EXPECT_LE(m.value, 0.05);
  }
}

TEST(Speculation, ReportOnlyEntries) {
  const SuiteConfig cfg{Manifold::hyperbolic(2), {{0.8, 0.5}}, light(), {}};
  const std::vector<ClaimEntry> entries = run_speculation_probe(cfg);
  ASSERT_EQ(entries.size(), 3u);
  for (const ClaimEntry& e : entries) {
    EXPECT_EQ(e.status, ClaimStatus::ReportOnly);
    EXPECT_FALSE(e.measurements.empty());
  }
}

TEST(Report, JsonIsParseableAndOrdered) {
  const SuiteConfig cfg{Manifold::euclidean(2), {{1.0, 1.0}}, light(), {}};
  VerificationReport rep = run_main_theorem_suite(cfg);
  rep.resolved_config = "[manifold]\nkind = euclidean\n";
  std::ostringstream s;
  write_report_json(s, rep);
  const nlohmann::json j = nlohmann::json::parse(s.str());
  ASSERT_EQ(j["claims"].size(), claim_registry().size());
  EXPECT_EQ(j["claims"][0]["id"], "full_diameter_until_R_minus_r");
  EXPECT_EQ(j["claims"][0]["status"], "pass");
  EXPECT_THROW(rep.claim("no_such_claim"), GeometryError);
}

TEST(Report, DeterministicText) {
  const SuiteConfig cfg{Manifold::hyperbolic(2), {{1.0, 0.5}}, light(), {}};
  std::ostringstream a, b;
  write_report_text(a, run_main_theorem_suite(cfg));
  write_report_text(b, run_main_theorem_suite(cfg));
  EXPECT_EQ(a.str(), b.str());
}

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "geolens/config.hpp"
#include "geolens/errors.hpp"

using namespace geolens;

namespace {

RunConfig parse(const std::string& text, const std::string& base = "") {
  std::istringstream in(text);
  return parse_config(in, base);
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("geolens_config_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, ParsesAllSections) {
  const RunConfig c = parse(R"(
# comment
[manifold]
kind = sphere   ; trailing comment
dimension = 3
curvature = 4

[balls]
pairs = 0.5 0.25; 0.6 0.6

[sampling]
grid = 50
budget = 900
seed = 12
refine = 1e-3

[integration]
step = 0.004
horizon = 12

[radii]
directions = 6
base_points = 3
horizon = 5
step = 0.002

[tolerances]
nesting = 1e-8
identity = 1e-7

[output]
path = out.csv
format = json
)");
  EXPECT_EQ(c.manifold.kind, "sphere");
  EXPECT_EQ(c.manifold.dimension, 3);
  EXPECT_EQ(*c.manifold.curvature, 4.0);
  ASSERT_EQ(c.pairs.size(), 2u);
  EXPECT_EQ(c.pairs[1], std::make_pair(0.6, 0.6));
  EXPECT_EQ(c.grid, 50);
  EXPECT_EQ(c.budget, 900);
  EXPECT_EQ(c.seed, 12u);
  EXPECT_EQ(c.refine, 1e-3);
  EXPECT_EQ(c.step, 0.004);
  EXPECT_EQ(c.radii.directions, 6);
  EXPECT_EQ(c.radii.horizon, 5.0);
  EXPECT_EQ(c.tolerances.nesting, 1e-8);
  EXPECT_EQ(c.tolerances.identity, 1e-7);
  EXPECT_EQ(c.output, "out.csv");
  EXPECT_EQ(c.format, "json");
  EXPECT_NO_THROW(validate_config(c));
  EXPECT_EQ(build_manifold(c).describe(), Manifold::sphere(3, 4.0).describe());
}

TEST(Config, SingleRadiusPair) {
  const RunConfig c = parse("[manifold]\nkind = euclidean\n[balls]\nR = 2\nr = 1\n");
  ASSERT_EQ(c.pairs.size(), 1u);
  EXPECT_EQ(c.pairs[0], std::make_pair(2.0, 1.0));
  EXPECT_EQ(c.grid, 200);
  EXPECT_EQ(c.budget, 4096);
}

TEST(Config, RoundTrip) {
  RunConfig c = parse(
      "[manifold]\nkind = surface_of_revolution\nprofile = torus\nprofile_params = 2, 1\n"
      "injectivity = 0.9\nloop_length = 2.5\n[balls]\npairs = 0.3 0.2\n"
      "[sampling]\nseed = 99\nrefine = 0.1\n[tolerances]\nbvp = 3.3333333333333335e-9\n");
  const std::string once = emit_config(c);
  const RunConfig again = parse(once);
  EXPECT_EQ(emit_config(again), once);
  EXPECT_EQ(again.tolerances.bvp, 3.3333333333333335e-9);
  EXPECT_EQ(*again.manifold.injectivity, 0.9);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("[manifold]\ncolour = red\n"), ConfigError);
  EXPECT_THROW(parse("[nowhere]\nkind = sphere\n"), ConfigError);
  EXPECT_THROW(parse("[sampling]\ngrid = many\n"), ConfigError);
  EXPECT_THROW(parse("[balls]\npairs = 1\n"), ConfigError);
  EXPECT_THROW(parse("kind = sphere\n"), ConfigError);
  EXPECT_THROW(parse("[manifold]\nkind\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/geolens.ini"), ConfigError);

  EXPECT_THROW(parse("[manifold]\nkind = klein_bottle\n"), ConfigError);
  EXPECT_THROW(parse("[manifold]\nkind = euclidean\n[balls]\npairs = 1 1\n[sampling]\ngrid = 1\n"),
               ConfigError);
  RunConfig no_budget = parse("[manifold]\nkind = euclidean\n[balls]\npairs = 1 1\n");
  no_budget.budget = 0;
  EXPECT_THROW(validate_config(no_budget), ConfigError);
  RunConfig torus = parse("[manifold]\nkind = surface_of_revolution\nprofile = torus\n"
                          "profile_params = 1, 2\n[balls]\npairs = 0.1 0.1\n");
  EXPECT_THROW(build_manifold(torus), ConfigError);
}

TEST(Config, ModelConvexity) {
  const RunConfig sphere = parse("[manifold]\nkind = sphere\n[balls]\npairs = 1 1\n");
  EXPECT_DOUBLE_EQ(model_convexity(build_manifold(sphere), sphere).value, std::numbers::pi / 2);
  const RunConfig bare = parse("[manifold]\nkind = surface_of_revolution\nprofile = torus\n"
                               "profile_params = 2, 1\n[balls]\npairs = 0.2 0.1\n"
                               "[radii]\ndirections = 4\nbase_points = 2\nhorizon = 4\n");
  EXPECT_FALSE(model_convexity(build_manifold(bare), bare).available());
  RunConfig certified = bare;
  certified.manifold.injectivity = 1.0;
  const RadiusValue conv = model_convexity(build_manifold(certified), certified);
  EXPECT_TRUE(conv.available());
  EXPECT_LE(conv.value, 0.5);
}

TEST(Config, TableProfileResolvedAgainstConfigDirectory) {
  const auto dir = scratch_dir("table");
  {
    std::ofstream t(dir / "profile.csv");
    t.precision(17);
    t << "u,f,df,ddf\n";
    for (int i = 0; i <= 20; ++i) {
      const double u = 0.5 + 2.0 * i / 20;
      t << u << "," << std::sin(u) << "," << std::cos(u) << "," << -std::sin(u) << "\n";
    }
  }
  {
    std::ofstream c(dir / "run.ini");
    c << "[manifold]\nkind = surface_of_revolution\nprofile = table\n"
         "profile_table = profile.csv\ninjectivity = 1\n[balls]\npairs = 0.2 0.1\n";
  }
  const RunConfig c = load_config((dir / "run.ini").string());
  EXPECT_TRUE(std::filesystem::path(c.manifold.profile_table).is_absolute());
  const Manifold m = build_manifold(c);
  EXPECT_NEAR(m.profile().f(1.3), std::sin(1.3), 1e-12);
  EXPECT_NEAR(m.profile().gauss_curvature(1.1), 1.0, 1e-6);
  std::filesystem::remove_all(dir);
}

TEST(Config, DerivedOptions) {
  RunConfig c = parse("[manifold]\nkind = hyperbolic\n[balls]\npairs = 1 0.5\n"
                      "[sampling]\ngrid = 30\nbudget = 5000\nseed = 4\n");
  const ProfileOptions p = profile_options(c);
  EXPECT_EQ(p.grid, 30);
  EXPECT_EQ(p.budget, 5000);
  EXPECT_EQ(p.seed, 4u);
  EXPECT_EQ(suite_settings(c).hausdorff_budget, 1024);
  EXPECT_EQ(build_manifold(c).curvature(), -1.0);
}

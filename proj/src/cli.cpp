#include "geolens/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "geolens/errors.hpp"
#include "geolens/lens.hpp"
#include "geolens/radii.hpp"
#include "geolens/theorem_suite.hpp"

namespace geolens {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::string resolved_path(const std::string& out) { return out + ".resolved.ini"; }

// Writes the primary output and the resolved configuration next to it.
void write_outputs(const RunConfig& config, const std::string& content) {
  if (config.output.empty()) return;
  write_file_atomically(config.output, content);
  write_file_atomically(resolved_path(config.output), emit_config(config));
}

std::string render_report(const VerificationReport& report, const std::string& format) {
  std::ostringstream s;
  if (format == "json") {
    write_report_json(s, report);
  } else {
    write_report_text(s, report);
  }
  return s.str();
}

bool is_unit_sphere(const RunConfig& c) {
  return c.manifold.kind == "sphere" && c.manifold.curvature.value_or(1.0) == 1.0;
}

bool admissible(double R, double r, const RadiusValue& conv) {
  return r > 0.0 && r <= R && conv.available() && R < conv.value;
}

VerificationReport single_entry_report(const RunConfig& config, const std::string& manifold,
                                       std::vector<std::pair<double, double>> pairs,
                                       std::vector<ClaimEntry> entries) {
  VerificationReport rep;
  rep.manifold = manifold;
  rep.pairs = std::move(pairs);
  rep.claims = std::move(entries);
  rep.seed = config.seed;
  rep.grid = config.grid;
  rep.budget = config.budget;
  rep.resolved_config = emit_config(config);
  return rep;
}

CounterexampleOptions counterexample_options(const RunConfig& config,
                                             const std::vector<std::pair<double, double>>& pairs) {
  CounterexampleOptions cx = default_counterexample();
  if (!pairs.empty()) cx.pairs = pairs;
  cx.budget = config.budget;
  cx.seed = config.seed;
  return cx;
}

}  // namespace

void write_file_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError(fmt::format("cannot write '{}'", path));
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ConfigError(fmt::format("cannot write '{}'", path));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError(fmt::format("cannot move output into place at '{}'", path));
  }
}

int cmd_profile(const RunConfig& config, std::ostream& out) {
  if (config.pairs.size() != 1) {
    throw ConfigError("profile needs exactly one (R, r) pair in [balls]");
  }
  if (config.output.empty()) throw ConfigError("profile needs an output path (--out or [output] path)");
  const Manifold m = build_manifold(config);
  const RadiusValue conv = model_convexity(m, config);
  const auto [R, r] = config.pairs.front();
  const BallPair bp = make_ball_pair(m, R, r, 0.0, conv);
  const WProfile prof = w_profile(bp, profile_options(config));
  std::ostringstream csv;
  write_profile_csv(csv, prof);
  write_outputs(config, csv.str());
  out << fmt::format("T_est = {:.10g} (+- {:.2g})  S_est = {:.10g} (+- {:.2g})  rows = {}  -> {}\n",
                     prof.T_est, prof.T_resolution, prof.S_est, prof.S_resolution,
                     prof.grid.size(), config.output);
  return kExitOk;
}

int cmd_verify(const RunConfig& config, bool expect_counterexample, std::ostream& out) {
  const Manifold m = build_manifold(config);
  const RadiusValue conv = model_convexity(m, config);
  std::vector<std::pair<double, double>> good;
  std::vector<std::pair<double, double>> counter;
  for (const auto& [R, r] : config.pairs) {
    if (admissible(R, r, conv)) {
      good.emplace_back(R, r);
      continue;
    }
    if (!expect_counterexample) {
      throw PreconditionError(fmt::format(
          "(R, r) = ({}, {}) violates 0 < r <= R < Conv = {}; pass --expect-counterexample for "
          "the sphere counterexample",
          R, r, conv.format()));
    }
    if (!is_unit_sphere(config) || R < kHalfPi || r < kHalfPi) {
      throw PreconditionError(fmt::format(
          "(R, r) = ({}, {}) is neither admissible nor a unit-sphere counterexample", R, r));
    }
    counter.emplace_back(R, r);
  }
  SuiteConfig suite{m, good, suite_settings(config), conv};
  VerificationReport rep = run_main_theorem_suite(suite);
  rep.pairs = config.pairs;
  if (!counter.empty()) {
    const ClaimEntry cx = run_counterexample(counterexample_options(config, counter));
    for (ClaimEntry& e : rep.claims) {
      if (e.id == cx.id) e = cx;
    }
  }
  rep.resolved_config = emit_config(config);
  write_report_text(out, rep);
  write_outputs(config, render_report(rep, config.format));
  return rep.passed() ? kExitOk : kExitClaimFailure;
}

int cmd_radii(const RunConfig& config, std::ostream& out) {
  const Manifold m = build_manifold(config);
  const RadiiReport report = compute_radii(m, config.radii);
  out << m.describe() << "\n";
  write_radii_text(out, report);
  const RadiiReport::Identities id = report.check_identities(config.tolerances.identity);
  out << fmt::format("identities: convexity {}  injectivity {}  focal {}\n",
                     id.convexity_ok ? "ok" : "FAILED", id.injectivity_ok ? "ok" : "FAILED",
                     id.focal_ok ? "ok" : "FAILED");
  std::ostringstream csv;
  write_radii_csv(csv, report);
  out << "\n" << csv.str();
  write_outputs(config, csv.str());
  return id.all_ok() ? kExitOk : kExitClaimFailure;
}

int cmd_counterexample(const RunConfig& config, std::ostream& out) {
  validate_config(config);
  std::vector<std::pair<double, double>> pairs;
  if (is_unit_sphere(config)) {
    for (const auto& [R, r] : config.pairs) {
      if (R >= kHalfPi && r >= kHalfPi) pairs.emplace_back(R, r);
    }
  }
  const CounterexampleOptions cx = counterexample_options(config, pairs);
  const ClaimEntry entry = run_counterexample(cx);
  const VerificationReport rep =
      single_entry_report(config, Manifold::sphere(2, 1.0).describe(), cx.pairs, {entry});
  write_report_text(out, rep);
  write_outputs(config, render_report(rep, config.format));
  return rep.passed() ? kExitOk : kExitClaimFailure;
}

int cmd_speculate(const RunConfig& config, std::ostream& out) {
  const Manifold m = build_manifold(config);
  const RadiusValue conv = model_convexity(m, config);
  const SuiteConfig suite{m, config.pairs, suite_settings(config), conv};
  const VerificationReport rep =
      single_entry_report(config, m.describe(), config.pairs, run_speculation_probe(suite));
  write_report_text(out, rep);
  write_outputs(config, render_report(rep, config.format));
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesic ball intersection diameters: profiles, verification and radii"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<int> budget;
  std::optional<std::string> out_path;
  bool expect = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--seed", seed, "sampling seed");
    sub->add_option("--grid", grid, "number of t-grid points");
    sub->add_option("--budget", budget, "samples per lens");
    sub->add_option("--out", out_path, "output path");
  };
  CLI::App* profile = app.add_subcommand("profile", "write the w(t) profile as CSV");
  CLI::App* verify = app.add_subcommand("verify", "run the claim suite");
  CLI::App* radii = app.add_subcommand("radii", "print the radii report");
  CLI::App* counter = app.add_subcommand("counterexample", "unit sphere with radii >= pi/2");
  CLI::App* speculate = app.add_subcommand("speculate", "report-only probes of S, T and w");
  for (CLI::App* sub : {profile, verify, radii, counter, speculate}) add_common(sub);
  verify->add_flag("--expect-counterexample", expect,
                   "run non-admissible unit-sphere pairs as the counterexample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    RunConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (grid) config.grid = *grid;
    if (budget) config.budget = *budget;
    if (out_path) config.output = *out_path;
    validate_config(config);
    if (profile->parsed()) return cmd_profile(config, out);
    if (verify->parsed()) return cmd_verify(config, expect, out);
    if (radii->parsed()) return cmd_radii(config, out);
    if (counter->parsed()) return cmd_counterexample(config, out);
    return cmd_speculate(config, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace geolens

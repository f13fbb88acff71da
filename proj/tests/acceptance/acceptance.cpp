// Acceptance run: one PASS/FAIL line per check. Exit status is non-zero
// iff a gating check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "geolens/cli.hpp"
#include "geolens/lens.hpp"
#include "geolens/radii.hpp"
#include "oracles.hpp"

using namespace geolens;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGrid = 200;
constexpr int kBudget = 4096;
constexpr std::uint64_t kSeed = 0;

struct Case {
  std::string name;
  Manifold m;
  double R, r;
  WProfile prof;
  double h() const { return 1e-3 * (R + r); }
};

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;
  void fail(std::string why) {
    ok = false;
    if (notes.size() < 8) notes.push_back(std::move(why));
  }
};

int gating_failures = 0;

void report(int index, const std::string& name, const Outcome& o, const std::string& summary,
            bool gating = true) {
  std::cout << fmt::format("{}  [{:>2}/10] {}{}  {}\n", o.ok ? "PASS" : "FAIL", index, name,
                           gating ? "" : " (report-only)", summary);
  for (const std::string& n : o.notes) std::cout << "        " << n << "\n";
  if (gating && !o.ok) ++gating_failures;
}

std::vector<Case> build_cases() {
  std::vector<Case> cases;
  ProfileOptions opts;
  opts.grid = kGrid;
  opts.budget = kBudget;
  opts.seed = kSeed;
  struct Spec {
    std::string model;
    Manifold m;
  };
  const std::vector<Spec> models = {{"euclidean", Manifold::euclidean(2)},
                                    {"sphere", Manifold::sphere(2)},
                                    {"hyperbolic", Manifold::hyperbolic(2)}};
  const double conv_sphere = kPi / 2;
  for (const Spec& s : models) {
    for (auto [R, r] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}, std::pair{1.2, 0.6}}) {
      if (s.model == "sphere" && R >= conv_sphere) continue;
      const auto start = std::chrono::steady_clock::now();
      WProfile prof = w_profile(make_ball_pair(s.m, R, r), opts);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      const std::string name = fmt::format("{}({:g},{:g})", s.model, R, r);
      std::cout << fmt::format("  profile {:<22} T_est={:.6f} S_est={:.6f}  {:.1f}s\n", name,
                               prof.T_est, prof.S_est, secs);
      cases.push_back(Case{name, s.m, R, r, std::move(prof)});
    }
  }
  return cases;
}

void full_diameter(const std::vector<Case>& cases) {
  Outcome o;
  double worst = 0.0, worst_slack = 0.0;
  for (const Case& c : cases) {
    const WProfile& p = c.prof;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      if (p.grid[i] > c.R - c.r) continue;
      const double dev = std::abs(p.w[i] - 2 * c.r);
      worst = std::max(worst, dev);
      worst_slack = std::max(worst_slack, p.slack[i]);
      if (dev > p.slack[i] || p.slack[i] > 0.02) {
        o.fail(fmt::format("{} t={:.6f}: |w-2r|={:.3g} slack={:.3g}", c.name, p.grid[i], dev,
                           p.slack[i]));
      }
    }
  }
  report(1, "full_diameter_until_R_minus_r", o,
         fmt::format("max |w-2r| = {:.3g}, max slack = {:.3g}", worst, worst_slack));
}

void T_bounds(const std::vector<Case>& cases) {
  Outcome o;
  std::string summary;
  for (const Case& c : cases) {
    const double T = c.prof.T_est;
    const double h = c.h();
    const bool in_band = T >= c.R - c.r - h && T <= c.R;
    const bool equal_radii_ok = c.R != c.r || T <= h;
    if (!in_band || !equal_radii_ok) {
      o.fail(fmt::format("{}: T_est={:.6f} outside [{:.6f}, {:.6f}]", c.name, T, c.R - c.r - h,
                         c.R == c.r ? h : c.R));
    }
  }
  report(2, "R_minus_r_le_T_lt_R", o, fmt::format("{} configurations", cases.size()));
}

void exceeds_gap(const std::vector<Case>& cases) {
  Outcome o;
  double min_margin = INFINITY;
  for (const Case& c : cases) {
    const WProfile& p = c.prof;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      const double t = p.grid[i];
      if (t <= c.R - c.r || t >= c.R + c.r) continue;
      const double margin = p.w[i] - (c.R + c.r - t);
      if (margin < -p.slack[i]) {
        o.fail(fmt::format("{} t={:.6f}: w - (R+r-t) = {:.3g}", c.name, t, margin));
      }
      if (t <= c.R + c.r - 0.1) {
        min_margin = std::min(min_margin, margin);
        if (!(margin > 0.0)) {
          o.fail(fmt::format("{} t={:.6f}: margin {:.3g} not strictly positive", c.name, t,
                             margin));
        }
      }
    }
  }
  report(3, "diameter_exceeds_R_plus_r_minus_t", o,
         fmt::format("min interior margin = {:.4g}", min_margin));
}

void decreasing_and_continuous(const std::vector<Case>& cases) {
  Outcome o;
  double min_drop = INFINITY, worst_mod = -INFINITY;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    const WProfile& p = c.prof;
    const double from = p.T_est + c.h();
    const int offset = static_cast<int>(std::ceil(0.05 * (c.R + c.r) / p.spacing() - 1e-9));
    for (std::size_t i = 0; i + 1 < p.grid.size(); ++i) {
      if (p.grid[i] < from) continue;
      if (p.w[i + 1] > p.w[i] + p.slack[i + 1]) {
        o.fail(fmt::format("{} t={:.6f}: w rises by {:.3g}", c.name, p.grid[i],
                           p.w[i + 1] - p.w[i]));
      }
      if (i + offset < p.grid.size()) {
        const double drop = p.w[i] - p.w[i + offset];
        min_drop = std::min(min_drop, drop);
        if (!(drop > 0.0)) {
          o.fail(fmt::format("{} t={:.6f}: no decrease over 0.05(R+r)", c.name, p.grid[i]));
        }
      }
    }
    // Continuity modulus on random grid pairs.
    const BallPair base = make_ball_pair(c.m, c.R, c.r);
    std::mt19937_64 rng(derive_seed(kSeed, 900 + ci));
    std::uniform_int_distribution<std::size_t> pick(0, p.grid.size() - 1);
    const double pitch = default_pitch(2, c.r, 1024);
    for (int k = 0; k < 50; ++k) {
      const std::size_t a = pick(rng), b = pick(rng);
      const PointCloud ya = sample_intersection(base.with_separation(p.grid[a]), 1024, kSeed, pitch);
      const PointCloud yb = sample_intersection(base.with_separation(p.grid[b]), 1024, kSeed, pitch);
      const double lhs = std::abs(p.w[a] - p.w[b]);
      const double rhs = 2.0 * (hausdorff(c.m, ya, yb) + ya.fill_radius + yb.fill_radius) +
                         std::max(p.slack[a], p.slack[b]);
      worst_mod = std::max(worst_mod, lhs - rhs);
      if (lhs > rhs) {
        o.fail(fmt::format("{} pair ({:.4f}, {:.4f}): {:.4g} > {:.4g}", c.name, p.grid[a],
                           p.grid[b], lhs, rhs));
      }
    }
  }
  report(4, "continuous_strictly_decreasing_after_T", o,
         fmt::format("min drop over 0.05(R+r) = {:.4g}, max modulus excess = {:.3g}", min_drop,
                     worst_mod));
}

void euclidean_oracle(const std::vector<Case>& cases) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const Case* c = nullptr;
  for (const Case& k : cases) {
    if (k.m.kind() == ModelKind::Euclidean && k.R == 2.0 && k.r == 1.0) c = &k;
  }
  const double R = 2.0, r = 1.0;
  const WProfile& p = c->prof;
  double worst_oracle = 0.0, worst_closed = 0.0;
  int confirmed = 0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double t = p.grid[i];
    const double dense = oracle::euclidean_lens_diameter(R, r, t);
    const double closed = t >= R + r ? 0.0 : t <= std::sqrt(3.0) ? 2 * r : oracle::corner_chord(R, r, t);
    const double dev = std::abs(p.w[i] - dense);
    worst_oracle = std::max(worst_oracle, dev);
    if (dev > 5e-3) o.fail(fmt::format("t={:.6f}: w={:.6f} oracle={:.6f}", t, p.w[i], dense));
    if (std::abs(closed - dense) <= 5e-3) {
      ++confirmed;
      const double dc = std::abs(p.w[i] - closed);
      worst_closed = std::max(worst_closed, dc);
      if (dc > 5e-3) o.fail(fmt::format("t={:.6f}: w={:.6f} closed form={:.6f}", t, p.w[i], closed));
    }
  }
  if (std::abs(p.S_est - std::sqrt(3.0)) > 1e-3) {
    o.fail(fmt::format("S_est={:.6f}, sqrt(3)={:.6f}", p.S_est, std::sqrt(3.0)));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(5, "euclidean_closed_form_oracle", o,
         fmt::format("max |w-oracle| = {:.3g}, closed form confirmed on {}/{} rows (max dev {:.3g}), "
                     "S_est = {:.6f}, oracle {:.1f}s",
                     worst_oracle, confirmed, p.grid.size(), worst_closed, p.S_est, secs));
}

void counterexample() {
  Outcome o;
  double worst = 0.0;
  const Manifold s = Manifold::sphere(2);
  for (auto [R, r] : {std::pair{kPi / 2, kPi / 2}, std::pair{2.0, 1.8}}) {
    for (int i = 0; i <= 10; ++i) {
      const double t = (R + r) * i / 10.0;
      const BallPair bp = make_unchecked_ball_pair(s, R, r, t);
      const double w = lens_diameter(bp, kBudget, derive_seed(kSeed, 300 + i)).value;
      worst = std::max(worst, std::abs(w - kPi));
      if (std::abs(w - kPi) > 0.05) {
        o.fail(fmt::format("(R, r) = ({:.4f}, {:.4f}) t={:.4f}: w={:.6f}", R, r, t, w));
      }
    }
  }
  report(6, "sphere_counterexample_diameter_pi", o, fmt::format("max |w-pi| = {:.3g}", worst));
}

void radii_identities() {
  Outcome o;
  for (const Manifold& m : {Manifold::euclidean(2), Manifold::sphere(2), Manifold::hyperbolic(2)}) {
    const RadiiReport r = closed_form_radii(m);
    if (!r.check_identities(1e-6).all_ok()) o.fail(m.describe() + ": identity check failed");
    const double conv = std::min(r.focal.value, r.injectivity.value / 2);
    const double inj = std::min(r.conjugate.value / 2, r.loop_length.value / 4);
    const auto close = [](double a, double b) {
      return (std::isinf(a) && std::isinf(b) && a == b) || std::abs(a - b) <= 1e-6;
    };
    if (!close(r.convexity.value, conv)) o.fail(m.describe() + ": Conv != min(Foc, Inj/2)");
    if (!close(r.injectivity.value / 2, inj)) o.fail(m.describe() + ": Inj/2 != min(Conj/2, L/4)");
    if (!(r.focal.value <= r.conjugate.value / 2 + 1e-6)) o.fail(m.describe() + ": Foc > Conj/2");
  }
  const Manifold s = Manifold::sphere(2);
  RadiiOptions opts;
  opts.horizon = 8.0;
  const RadiusValue foc = focal_radius(s, s.basepoint(), 64, opts);
  const RadiusValue conj = conjugate_radius(s, s.basepoint(), 64, opts);
  if (std::abs(foc.value - kPi / 2) > 1e-6) o.fail(fmt::format("numeric Foc = {:.12f}", foc.value));
  if (std::abs(conj.value - kPi) > 1e-6) o.fail(fmt::format("numeric Conj = {:.12f}", conj.value));
  report(7, "radii_identities", o,
         fmt::format("numeric Foc - pi/2 = {:.3g}, Conj - pi = {:.3g}", foc.value - kPi / 2,
                     conj.value - kPi));
}

void nesting(const std::vector<Case>& cases) {
  Outcome o;
  double worst = INFINITY;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Case& c = cases[ci];
    const BallPair base = make_ball_pair(c.m, c.R, c.r);
    std::mt19937_64 rng(derive_seed(kSeed, 1900 + ci));
    std::uniform_real_distribution<double> u(c.prof.T_est, c.R + c.r);
    for (int k = 0; k < 20; ++k) {
      double s = u(rng), t = u(rng);
      if (s > t) std::swap(s, t);
      if (!(s < t)) continue;
      const Point cs = c.prof.pair.gamma.point_at(c.m, s);
      const PointCloud lens = sample_intersection(base.with_separation(t), kBudget,
                                                  derive_seed(kSeed, 2900 + k));
      for (const Point& x : lens.points) {
        const double margin = c.r - distance(c.m, cs, x);
        worst = std::min(worst, margin);
        if (margin < -1e-6) {
          o.fail(fmt::format("{} s={:.6f} t={:.6f}: margin {:.3g}", c.name, s, t, margin));
          break;
        }
      }
    }
  }
  report(8, "nesting_after_T", o, fmt::format("min margin = {:.3g}", worst));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

void determinism(const std::vector<Case>& cases) {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "geolens_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "run.ini") << "[manifold]\nkind = euclidean\n[balls]\npairs = 2 1\n"
                                    "[sampling]\ngrid = 200\nbudget = 4096\nseed = 7\n";
  std::string outputs[2];
  for (int k = 0; k < 2; ++k) {
    const std::string cfg = (dir / "run.ini").string();
    const std::string out = (dir / fmt::format("w{}.csv", k)).string();
    const char* argv[] = {"geolens", "profile", "--config", cfg.c_str(), "--out", out.c_str()};
    std::ostringstream sink, err;
    if (run_cli(6, argv, sink, err) != kExitOk) o.fail("profile run failed: " + err.str());
    outputs[k] = slurp(out);
  }
  if (outputs[0].empty() || outputs[0] != outputs[1]) o.fail("CLI profile CSVs differ");

  const Case& c = cases.back();
  ProfileOptions opts;
  opts.grid = kGrid;
  opts.budget = kBudget;
  opts.seed = kSeed;
  std::ostringstream a, b;
  write_profile_csv(a, c.prof);
  write_profile_csv(b, w_profile(make_ball_pair(c.m, c.R, c.r), opts));
  if (a.str() != b.str()) o.fail(c.name + ": in-process profile CSVs differ");
  fs::remove_all(dir);
  report(9, "deterministic_csv", o,
         fmt::format("{} + {} bytes compared", outputs[0].size(), a.str().size()));
}

void speculation(const std::vector<Case>& cases) {
  Outcome o;
  double worst_gap = 0.0, worst_second = -INFINITY;
  for (const Case& c : cases) {
    const WProfile& p = c.prof;
    const double gap = std::abs(p.S_est - p.T_est);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 2 * c.h()) o.fail(fmt::format("{}: |S-T| = {:.3g}", c.name, gap));
    for (std::size_t i = 1; i + 1 < p.grid.size(); ++i) {
      if (p.grid[i - 1] < p.T_est) continue;
      const double d2 = p.w[i - 1] - 2 * p.w[i] + p.w[i + 1];
      const double slack = std::max({p.slack[i - 1], p.slack[i], p.slack[i + 1]});
      worst_second = std::max(worst_second, d2 - slack);
      if (d2 > slack) {
        o.fail(fmt::format("{} t={:.6f}: second difference {:.3g} > slack {:.3g}", c.name,
                           p.grid[i], d2, slack));
      }
    }
  }
  report(10, "speculation_S_equals_T_and_concavity", o,
         fmt::format("max |S-T| = {:.3g}, max (second difference - slack) = {:.3g}", worst_gap,
                     worst_second),
         false);
}

}  // namespace

int main() {
  try {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Case> cases = build_cases();
    full_diameter(cases);
    T_bounds(cases);
    exceeds_gap(cases);
    decreasing_and_continuous(cases);
    euclidean_oracle(cases);
    counterexample();
    radii_identities();
    nesting(cases);
    determinism(cases);
    speculation(cases);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << fmt::format("acceptance: {} gating failure(s), {:.1f}s\n", gating_failures, secs);
  } catch (const std::exception& e) {
    std::cout << "FAIL  acceptance aborted: " << e.what() << "\n";
    return 2;
  }
  return gating_failures == 0 ? 0 : 1;
}

#include "geolens/theorem_suite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "geolens/errors.hpp"
#include "geolens/point_cloud.hpp"
#include "json.hpp"

namespace geolens {

namespace {

constexpr double kPi = std::numbers::pi;

const char* const kFullDiameter = "full_diameter_until_R_minus_r";
const char* const kTLower = "T_at_least_R_minus_r";
const char* const kTBelowR = "T_below_R";
const char* const kGap = "diameter_exceeds_gap";
const char* const kDecrease = "strictly_decreasing_after_T";
const char* const kContinuity = "continuity_modulus";
const char* const kNesting = "nesting_after_T";
const char* const kLipschitz = "diameter_lipschitz";
const char* const kLimit = "monotone_limit";
const char* const kIdentity = "convexity_radius_identity";
const char* const kMinimizing = "geodesic_minimizing";
const char* const kWitness = "witness_admissibility";
const char* const kCounterexample = "sphere_counterexample";
const char* const kSEqualsT = "speculation.S_equals_T";
const char* const kConcavity = "speculation.concavity_after_T";
const char* const kSmoothness = "speculation.smoothness_at_T";

std::string pair_label(double R, double r) { return fmt::format("({:g},{:g})", R, r); }

class ClaimBook {
 public:
  ClaimBook() {
    for (const ClaimInfo& info : claim_registry()) {
      ClaimEntry e;
      e.id = info.id;
      e.description = info.description;
      e.status = info.report_only ? ClaimStatus::ReportOnly : ClaimStatus::Pass;
      entries_.push_back(std::move(e));
    }
  }

  ClaimEntry& operator[](const std::string& id) {
    for (ClaimEntry& e : entries_) {
      if (e.id == id) return e;
    }
    throw GeometryError("unknown claim id " + id);
  }

  void record(const std::string& id, bool ok, const std::string& label, double value) {
    ClaimEntry& e = (*this)[id];
    e.measurements.push_back({label, value});
    if (!ok && e.status == ClaimStatus::Pass) e.status = ClaimStatus::Fail;
  }

  void fail(const std::string& id, const std::string& note) {
    ClaimEntry& e = (*this)[id];
    if (e.status == ClaimStatus::Pass) e.status = ClaimStatus::Fail;
    e.notes.push_back(note);
  }

  void note(const std::string& id, const std::string& note) { (*this)[id].notes.push_back(note); }

  void replace(ClaimEntry entry) { (*this)[entry.id] = std::move(entry); }

  std::vector<ClaimEntry> take() { return std::move(entries_); }

 private:
  std::vector<ClaimEntry> entries_;
};

struct PairRun {
  BallPair pair;
  WProfile profile;
};

double model_tolerance(const Manifold& m) {
  return m.has_constant_curvature() ? 1e-9 : 100.0 * m.settings().bvp_tolerance;
}

void check_full_diameter(ClaimBook& book, const PairRun& run) {
  const WProfile& p = run.profile;
  const double R = run.pair.R;
  const double r = run.pair.r;
  const std::string tag = pair_label(R, r);
  double worst_dev = 0.0;
  double worst_slack = 0.0;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    if (p.grid[i] > R - r + 1e-12 * (R + r)) break;
    const double dev = std::abs(p.w[i] - 2.0 * r);
    worst_dev = std::max(worst_dev, dev);
    worst_slack = std::max(worst_slack, p.slack[i]);
    if (dev > p.slack[i]) {
      book.fail(kFullDiameter, fmt::format("{} t={:.6g}: w={:.12g}, slack {:.3g}", tag, p.grid[i],
                                           p.w[i], p.slack[i]));
    }
  }
  book.record(kFullDiameter, true, tag + " max |w-2r|", worst_dev);
  book.record(kFullDiameter, worst_slack <= 0.02, tag + " max slack", worst_slack);
}

void check_T(ClaimBook& book, const PairRun& run, double resolution) {
  const double R = run.pair.R;
  const double r = run.pair.r;
  const double h = resolution * (R + r);
  const double T = run.profile.T_est;
  const std::string tag = pair_label(R, r);
  bool lower = T >= R - r - h;
  if (R == r) lower = lower && T <= h;
  book.record(kTLower, lower, tag + " T_est", T);
  book.record(kTLower, true, tag + " T_est-(R-r)", T - (R - r));
  book.record(kTBelowR, T < R, tag + " R-T_est", R - T);
}

void check_gap(ClaimBook& book, const PairRun& run) {
  const WProfile& p = run.profile;
  const double R = run.pair.R;
  const double r = run.pair.r;
  const std::string tag = pair_label(R, r);
  double worst = INFINITY;
  double strict = INFINITY;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const double t = p.grid[i];
    if (!(t > R - r && t < R + r)) continue;
    const double gap = p.w[i] - (R + r - t);
    worst = std::min(worst, gap + p.slack[i]);
    if (gap + p.slack[i] < 0.0) {
      book.fail(kGap, fmt::format("{} t={:.6g}: w={:.12g} below R+r-t={:.12g}", tag, t, p.w[i],
                                  R + r - t));
    }
    if (R + r - t >= 0.1) strict = std::min(strict, gap);
  }
  book.record(kGap, true, tag + " min w-(R+r-t)+slack", worst);
  book.record(kGap, !(strict <= 0.0), tag + " min strict margin (R+r-t>=0.1)", strict);
}

void check_decrease(ClaimBook& book, const PairRun& run, double resolution) {
  const WProfile& p = run.profile;
  const double R = run.pair.R;
  const double r = run.pair.r;
  const std::string tag = pair_label(R, r);
  const double start = p.T_est + resolution * (R + r);
  const std::size_t n = p.grid.size();
  double worst_rise = -INFINITY;
  double min_drop = INFINITY;
  const std::size_t lag = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(0.05 * (R + r) / p.spacing())));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (p.grid[i] < start) continue;
    const double rise = p.w[i + 1] - p.w[i];
    const double allowed = std::max(p.slack[i], p.slack[i + 1]);
    worst_rise = std::max(worst_rise, rise - allowed);
    if (rise > allowed) {
      book.fail(kDecrease, fmt::format("{} w rises by {:.3g} between t={:.6g} and {:.6g}", tag,
                                       rise, p.grid[i], p.grid[i + 1]));
    }
    if (i + lag < n) {
      const double drop = p.w[i] - p.w[i + lag];
      min_drop = std::min(min_drop, drop);
      if (!(drop > 0.0)) {
        book.fail(kDecrease, fmt::format("{} no decrease between t={:.6g} and {:.6g}", tag,
                                         p.grid[i], p.grid[i + lag]));
      }
    }
  }
  book.record(kDecrease, true, tag + " max rise-slack", worst_rise);
  book.record(kDecrease, true, tag + " min drop over 0.05(R+r)", min_drop);
}

class CloudCache {
 public:
  CloudCache(const PairRun& run, int budget) : run_(run), budget_(budget) {}

  const PointCloud& at(std::size_t i) {
    auto it = clouds_.find(i);
    if (it == clouds_.end()) {
      it = clouds_
               .emplace(i, sample_intersection(run_.pair.with_separation(run_.profile.grid[i]),
                                               budget_, derive_seed(run_.profile.seed, i)))
               .first;
    }
    return it->second;
  }

 private:
  const PairRun& run_;
  int budget_;
  std::map<std::size_t, PointCloud> clouds_;
};

void check_continuity(ClaimBook& book, const PairRun& run, CloudCache& clouds,
                      const SuiteSettings& s, std::mt19937_64& rng) {
  const WProfile& p = run.profile;
  const Manifold& m = run.pair.manifold;
  const std::string tag = pair_label(run.pair.R, run.pair.r);
  std::uniform_int_distribution<std::size_t> pick(0, p.grid.size() - 1);
  double worst = INFINITY;
  for (int k = 0; k < s.continuity_pairs; ++k) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    if (i == j) j = (j + 1) % p.grid.size();
    const PointCloud& a = clouds.at(i);
    const PointCloud& b = clouds.at(j);
    const double dh = hausdorff(m, a, b);
    const double lhs = std::abs(p.w[i] - p.w[j]);
    const double rhs = 2.0 * (dh + a.fill_radius + b.fill_radius) + p.slack[i] + p.slack[j];
    worst = std::min(worst, rhs - lhs);
    if (lhs > rhs) {
      book.fail(kContinuity, fmt::format("{} s={:.6g} t={:.6g}: |dw|={:.6g} > {:.6g}", tag,
                                         p.grid[i], p.grid[j], lhs, rhs));
    }
  }
  book.record(kContinuity, true, tag + " min modulus margin", worst);
}

void check_nesting(ClaimBook& book, const PairRun& run, const SuiteSettings& s,
                   std::mt19937_64& rng) {
  const BallPair& bp = run.pair;
  const Manifold& m = bp.manifold;
  const std::string tag = pair_label(bp.R, bp.r);
  const double end = bp.R + bp.r;
  const double T = run.profile.T_est;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = INFINITY;
  for (int k = 0; k < s.nesting_pairs; ++k) {
    const double sep_s = T + unit(rng) * (end - T);
    double sep_t = sep_s + unit(rng) * (end - sep_s);
    if (!(sep_t > sep_s)) sep_t = end;
    if (!(sep_t > sep_s)) continue;
    const PointCloud cloud = sample_intersection(bp.with_separation(sep_t), s.profile.budget,
                                                 derive_seed(s.profile.seed, 5000 + k));
    const Point cs = bp.gamma.point_at(m, sep_s);
    double margin = INFINITY;
    for (const Point& x : cloud.points) margin = std::min(margin, bp.r - distance(m, cs, x));
    worst = std::min(worst, margin);
    if (margin < -s.nesting_margin) {
      book.fail(kNesting, fmt::format("{} s={:.6g} t={:.6g}: margin {:.3g}", tag, sep_s, sep_t,
                                      margin));
    }
  }
  book.record(kNesting, true, tag + " min margin", worst);
}

PointCloud random_subset(const PointCloud& cloud, int size, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(cloud.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  PointCloud out;
  const std::size_t n = std::min<std::size_t>(idx.size(), static_cast<std::size_t>(size));
  for (std::size_t i = 0; i < n; ++i) out.points.push_back(cloud.points[idx[i]]);
  return out;
}

void check_lipschitz(ClaimBook& book, const PairRun& run, CloudCache& clouds,
                     const SuiteSettings& s, std::mt19937_64& rng) {
  const Manifold& m = run.pair.manifold;
  const std::string tag = pair_label(run.pair.R, run.pair.r);
  std::uniform_int_distribution<std::size_t> pick(0, run.profile.grid.size() - 1);
  double worst = INFINITY;
  for (int k = 0; k < s.lipschitz_pairs; ++k) {
    const PointCloud y = random_subset(clouds.at(pick(rng)), s.lipschitz_subset, rng);
    const PointCloud z = random_subset(clouds.at(pick(rng)), s.lipschitz_subset, rng);
    const bool ok = diameter_lipschitz_check(m, y, z);
    const double margin =
        2.0 * hausdorff(m, y, z) - std::abs(diameter(m, y).value - diameter(m, z).value);
    worst = std::min(worst, margin);
    if (!ok) book.fail(kLipschitz, fmt::format("{} subset pair {}: margin {:.3g}", tag, k, margin));
  }
  book.record(kLipschitz, true, tag + " min 2dH-|dDiam|", worst);
}

void check_limit(ClaimBook& book, const PairRun& run, const SuiteSettings& s) {
  const BallPair& bp = run.pair;
  const Manifold& m = bp.manifold;
  const std::string tag = pair_label(bp.R, bp.r);
  // A separation inside (R - r, R + r), where both spheres bound the lens.
  const double t = bp.R;
  const double pitch = default_pitch(m.dimension(), bp.r, s.hausdorff_budget);
  const std::uint64_t seed = derive_seed(s.profile.seed, 7000);
  std::vector<PointCloud> seq;
  for (int j = 0; j < s.limit_steps; ++j) {
    const double radius = bp.r + std::ldexp(1.0, -j);
    const BallPair big = make_unchecked_ball_pair(m, bp.R, radius, t);
    seq.push_back(sample_intersection(big, s.hausdorff_budget, seed, pitch));
  }
  const PointCloud limit =
      sample_intersection(bp.with_separation(t), s.hausdorff_budget, seed, pitch);
  try {
    const MonotoneLimit res = monotone_limit_check(m, seq, Nesting::Decreasing, limit);
    bool decreasing = true;
    for (std::size_t k = 0; k + 1 < res.distances.size(); ++k) {
      if (res.distances[k + 1] > res.distances[k] + limit.fill_radius) decreasing = false;
    }
    if (!decreasing) book.fail(kLimit, tag + " Hausdorff distances to the limit do not decrease");
    book.record(kLimit, res.last < s.limit_target, tag + " last d_H", res.last);
  } catch (const DomainError& e) {
    book.fail(kLimit, tag + " " + e.what());
  }
}

void check_minimizing(ClaimBook& book, const PairRun& run, std::mt19937_64& rng) {
  const BallPair& bp = run.pair;
  const Manifold& m = bp.manifold;
  const std::string tag = pair_label(bp.R, bp.r);
  std::uniform_real_distribution<double> unit(0.0, bp.R + bp.r);
  const double tol = model_tolerance(m);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double t1 = unit(rng);
    const double t2 = unit(rng);
    const double err =
        std::abs(distance(m, bp.gamma.point_at(m, t1), bp.gamma.point_at(m, t2)) - std::abs(t1 - t2));
    worst = std::max(worst, err);
  }
  book.record(kMinimizing, worst <= tol, tag + " max |d-|t1-t2||", worst);
}

void check_witnesses(ClaimBook& book, const PairRun& run) {
  const WProfile& p = run.profile;
  const std::string tag = pair_label(run.pair.R, run.pair.r);
  const double tol = model_tolerance(run.pair.manifold);
  double worst = INFINITY;
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const BallPair bp = run.pair.with_separation(p.grid[i]);
    const double margin =
        std::min(membership(bp, p.witness_a[i]).margin, membership(bp, p.witness_b[i]).margin);
    worst = std::min(worst, margin);
    if (margin < -tol) {
      book.fail(kWitness, fmt::format("{} t={:.6g}: witness margin {:.3g}", tag, p.grid[i], margin));
    }
  }
  book.record(kWitness, true, tag + " min witness margin", worst);
}

void check_identity(ClaimBook& book, const SuiteConfig& config) {
  const Manifold& m = config.manifold;
  const double tol = config.settings.identity_tolerance;
  RadiiReport report;
  if (m.has_constant_curvature()) {
    report = closed_form_radii(m);
  } else {
    report = compute_radii(m, config.settings.radii);
  }
  const RadiiReport::Identities id = report.check_identities(tol);
  book.record(kIdentity, id.convexity_ok, "Conv - min(Foc, Inj/2)", id.convexity_residual);
  book.record(kIdentity, id.injectivity_ok, "Inj/2 - min(Conj/2, L/4)", id.injectivity_residual);
  book.record(kIdentity, id.focal_ok, "Conj/2 - Foc", id.focal_gap);
  if (m.has_constant_curvature() && m.dimension() == 2) {
    // Jacobi integration against the closed forms.
    const Point x = m.basepoint();
    const RadiusValue foc = focal_radius(m, x, 8, config.settings.radii);
    const RadiusValue conj = conjugate_radius(m, x, 8, config.settings.radii);
    if (!report.focal.infinite()) {
      book.record(kIdentity, !foc.lower_bound && std::abs(foc.value - report.focal.value) <= tol,
                  "numeric Foc - closed form", foc.value - report.focal.value);
    } else {
      book.record(kIdentity, foc.lower_bound, "numeric Foc search horizon", foc.value);
    }
    if (!report.conjugate.infinite()) {
      book.record(kIdentity,
                  !conj.lower_bound && std::abs(conj.value - report.conjugate.value) <= tol,
                  "numeric Conj - closed form", conj.value - report.conjugate.value);
    } else {
      book.record(kIdentity, conj.lower_bound, "numeric Conj search horizon", conj.value);
    }
  }
}

std::vector<ClaimEntry> speculation_entries(const SuiteConfig& config,
                                            const std::vector<PairRun>& runs) {
  std::vector<ClaimEntry> out;
  const std::map<std::string, const ClaimInfo*> info = [] {
    std::map<std::string, const ClaimInfo*> m;
    for (const ClaimInfo& c : claim_registry()) m[c.id] = &c;
    return m;
  }();
  auto entry = [&](const char* id) {
    ClaimEntry e;
    e.id = id;
    e.description = info.at(id)->description;
    e.status = ClaimStatus::ReportOnly;
    return e;
  };
  ClaimEntry st = entry(kSEqualsT);
  ClaimEntry conc = entry(kConcavity);
  ClaimEntry smooth = entry(kSmoothness);
  if (!config.manifold.has_constant_curvature()) {
    for (ClaimEntry* e : {&st, &conc, &smooth}) {
      e->notes.push_back("not evaluated: variable curvature model");
    }
    return {st, conc, smooth};
  }
  const double resolution = config.settings.resolution;
  for (const PairRun& run : runs) {
    const WProfile& p = run.profile;
    const double R = run.pair.R;
    const double r = run.pair.r;
    const double h = resolution * (R + r);
    const std::string tag = pair_label(R, r);

    const double gap = std::abs(p.S_est - p.T_est);
    st.measurements.push_back({tag + " |S_est-T_est|", gap});
    st.measurements.push_back({tag + " 2h", 2.0 * h});
    st.notes.push_back(fmt::format("{} |S-T| {} 2h", tag, gap <= 2.0 * h ? "<=" : ">"));

    double max_d2 = -INFINITY;
    double max_slack = 0.0;
    for (std::size_t i = 1; i + 1 < p.grid.size(); ++i) {
      if (p.grid[i - 1] < p.T_est) continue;
      max_d2 = std::max(max_d2, p.w[i - 1] - 2.0 * p.w[i] + p.w[i + 1]);
      max_slack = std::max(max_slack, p.slack[i]);
    }
    conc.measurements.push_back({tag + " max second difference", max_d2});
    conc.measurements.push_back({tag + " slack", max_slack});
    conc.notes.push_back(fmt::format("{} second differences {} slack", tag,
                                     max_d2 <= max_slack ? "<=" : ">"));

    std::size_t iT = 0;
    while (iT < p.grid.size() && p.grid[iT] < p.T_est) ++iT;
    const double dt = p.spacing();
    if (iT >= 2 && iT + 1 < p.grid.size()) {
      const double left = (p.w[iT - 1] - p.w[iT - 2]) / dt;
      const double right = (p.w[iT + 1] - p.w[iT]) / dt;
      smooth.measurements.push_back({tag + " slope left of T", left});
      smooth.measurements.push_back({tag + " slope right of T", right});
      smooth.measurements.push_back({tag + " slope jump", right - left});
    } else {
      smooth.notes.push_back(tag + " T too close to the grid ends for one-sided slopes");
    }
  }
  return {st, conc, smooth};
}

std::vector<PairRun> run_profiles(const SuiteConfig& config) {
  std::vector<PairRun> runs;
  const RadiusValue conv = suite_convexity(config);
  for (const auto& [R, r] : config.pairs) {
    BallPair bp = make_ball_pair(config.manifold, R, r, 0.0, conv);
    WProfile prof = w_profile(bp, config.settings.profile);
    runs.push_back(PairRun{std::move(bp), std::move(prof)});
  }
  return runs;
}

VerificationReport empty_report(const SuiteConfig& config) {
  VerificationReport rep;
  rep.manifold = config.manifold.describe();
  rep.pairs = config.pairs;
  rep.seed = config.settings.profile.seed;
  rep.grid = config.settings.profile.grid;
  rep.budget = config.settings.profile.budget;
  const SuiteSettings& s = config.settings;
  rep.tolerances = {{"nesting_tolerance", s.profile.nesting_tolerance},
                    {"full_tolerance", s.profile.full_tolerance},
                    {"refine", s.profile.refine},
                    {"resolution", s.resolution},
                    {"nesting_margin", s.nesting_margin},
                    {"identity_tolerance", s.identity_tolerance},
                    {"limit_target", s.limit_target}};
  return rep;
}

}  // namespace

std::string to_string(ClaimStatus status) {
  switch (status) {
    case ClaimStatus::Pass:
      return "pass";
    case ClaimStatus::Fail:
      return "fail";
    case ClaimStatus::ReportOnly:
      return "report-only";
  }
  return "unknown";
}

const std::vector<ClaimInfo>& claim_registry() {
  static const std::vector<ClaimInfo> registry = {
      {kFullDiameter, "w(t) = 2r for t in [0, R - r], within the diameter slack", false},
      {kTLower, "R - r - h <= T_est, and T_est <= h when R = r", false},
      {kTBelowR, "T_est < R", false},
      {kGap, "w(t) >= R + r - t - slack on (R - r, R + r), strictly away from R + r", false},
      {kDecrease,
       "w non-increasing within slack on [T_est + h, R + r] with a positive drop over "
       "0.05 (R + r); also the observable content of strong convexity of small balls",
       false},
      {kContinuity, "|w(s) - w(t)| <= 2 d_H(lens(s), lens(t)) + fill and diameter slack", false},
      {kNesting, "lens(t) lies in D_r(gamma(s)) for T_est <= s < t, margin >= -1e-6", false},
      {kLipschitz, "|Diam Y - Diam Z| <= 2 d_H(Y, Z) on random finite subsets", false},
      {kLimit, "lenses with radii r + 1/k are nested and converge to the lens in d_H", false},
      {kIdentity,
       "Conv = min(Foc, Inj/2), Inj/2 = min(Conj/2, L/4), Foc <= Conj/2; Jacobi estimates "
       "match closed forms",
       false},
      {kMinimizing, "d(gamma(t1), gamma(t2)) = |t1 - t2| on [0, R + r]", false},
      {kWitness, "diameter witnesses lie in the lens", false},
      {kCounterexample,
       "unit sphere with radii >= pi/2: lens diameter stays pi, so w is not eventually "
       "decreasing",
       false},
      {kSEqualsT, "compares S_est with T_est", true},
      {kConcavity, "second differences of w after T_est", true},
      {kSmoothness, "one-sided finite-difference slopes of w at T_est", true},
  };
  return registry;
}

bool VerificationReport::passed() const {
  return std::none_of(claims.begin(), claims.end(),
                      [](const ClaimEntry& c) { return c.status == ClaimStatus::Fail; });
}

const ClaimEntry& VerificationReport::claim(const std::string& id) const {
  for (const ClaimEntry& c : claims) {
    if (c.id == id) return c;
  }
  throw GeometryError("report has no claim " + id);
}

RadiusValue suite_convexity(const SuiteConfig& config) {
  if (config.manifold.has_constant_curvature()) return closed_form_radii(config.manifold).convexity;
  return config.convexity;
}

void check_suite_preconditions(const SuiteConfig& config) {
  const RadiusValue conv = suite_convexity(config);
  for (const auto& [R, r] : config.pairs) {
    // Throws PreconditionError on violation.
    make_ball_pair(config.manifold, R, r, 0.0, conv);
  }
}

CounterexampleOptions default_counterexample() {
  CounterexampleOptions o;
  o.pairs = {{kPi / 2.0, kPi / 2.0}, {2.0, 1.8}};
  return o;
}

ClaimEntry run_counterexample(const CounterexampleOptions& options) {
  ClaimEntry e;
  e.id = kCounterexample;
  for (const ClaimInfo& c : claim_registry()) {
    if (e.id == c.id) e.description = c.description;
  }
  e.status = ClaimStatus::Pass;
  const Manifold m = Manifold::sphere(2, 1.0);
  const int n = std::max(2, options.separations);
  for (const auto& [R, r] : options.pairs) {
    const BallPair bp = make_unchecked_ball_pair(m, R, r);
    const std::string tag = pair_label(R, r);
    double worst = 0.0;
    double first = 0.0;
    double last = 0.0;
    for (int k = 0; k < n; ++k) {
      const double t = (R + r) * k / (n - 1);
      const LensDiameter d = lens_diameter(bp.with_separation(std::min(t, R + r)), options.budget,
                                           derive_seed(options.seed, k));
      const double dev = std::abs(d.value - kPi);
      worst = std::max(worst, dev);
      if (k == 0) first = d.value;
      last = d.value;
      if (dev > options.tolerance) {
        e.status = ClaimStatus::Fail;
        e.notes.push_back(fmt::format("{} t={:.6g}: diameter {:.12g}", tag, t, d.value));
      }
    }
    e.measurements.push_back({tag + " max |w-pi|", worst});
    e.measurements.push_back({tag + " w(0)-w(R+r)", first - last});
    if (last >= kPi - options.tolerance) {
      e.notes.push_back(tag + " w(R+r) is still pi: not eventually decreasing");
    }
  }
  return e;
}

std::vector<ClaimEntry> run_speculation_probe(const SuiteConfig& config) {
  check_suite_preconditions(config);
  if (!config.manifold.has_constant_curvature()) return speculation_entries(config, {});
  return speculation_entries(config, run_profiles(config));
}

VerificationReport run_main_theorem_suite(const SuiteConfig& config) {
  check_suite_preconditions(config);
  VerificationReport rep = empty_report(config);
  const SuiteSettings& s = config.settings;
  ClaimBook book;

  const std::vector<PairRun> runs = run_profiles(config);
  for (std::size_t c = 0; c < runs.size(); ++c) {
    const PairRun& run = runs[c];
    std::mt19937_64 rng(derive_seed(s.profile.seed, 100000 + c));
    check_full_diameter(book, run);
    check_T(book, run, s.resolution);
    check_gap(book, run);
    check_decrease(book, run, s.resolution);
    CloudCache clouds(run, s.hausdorff_budget);
    check_continuity(book, run, clouds, s, rng);
    check_nesting(book, run, s, rng);
    check_lipschitz(book, run, clouds, s, rng);
    check_limit(book, run, s);
    check_minimizing(book, run, rng);
    check_witnesses(book, run);
  }
  if (runs.empty()) {
    for (const ClaimInfo& info : claim_registry()) {
      if (info.report_only || info.id == std::string(kCounterexample) ||
          info.id == std::string(kIdentity)) {
        continue;
      }
      ClaimEntry& e = book[info.id];
      e.status = ClaimStatus::ReportOnly;
      e.notes.push_back("not evaluated: no admissible (R, r) pairs");
    }
  }
  check_identity(book, config);

  CounterexampleOptions cx = default_counterexample();
  cx.budget = s.profile.budget;
  cx.seed = s.profile.seed;
  book.replace(run_counterexample(cx));
  for (ClaimEntry& e : speculation_entries(config, runs)) book.replace(std::move(e));

  rep.claims = book.take();
  return rep;
}

void write_report_text(std::ostream& out, const VerificationReport& report) {
  out << "manifold: " << report.manifold << "\n";
  out << "pairs:";
  for (const auto& [R, r] : report.pairs) out << " " << pair_label(R, r);
  out << "\n";
  out << fmt::format("seed {}  grid {}  budget {}\n", report.seed, report.grid, report.budget);
  out << "tolerances:";
  for (const Measurement& t : report.tolerances) out << fmt::format(" {}={:g}", t.label, t.value);
  out << "\n\n";
  int failed = 0;
  int report_only = 0;
  for (const ClaimEntry& c : report.claims) {
    std::string tag = c.status == ClaimStatus::Pass   ? "PASS"
                      : c.status == ClaimStatus::Fail ? "FAIL"
                                                      : "INFO";
    if (c.status == ClaimStatus::Fail) ++failed;
    if (c.status == ClaimStatus::ReportOnly) ++report_only;
    out << fmt::format("{}  {}\n      {}\n", tag, c.id, c.description);
    for (const Measurement& m : c.measurements) {
      out << fmt::format("      {:<44} {:.10g}\n", m.label, m.value);
    }
    for (const std::string& n : c.notes) out << "      - " << n << "\n";
  }
  out << fmt::format("\nresult: {} ({} claims, {} failed, {} report-only)\n",
                     report.passed() ? "PASS" : "FAIL", report.claims.size(), failed, report_only);
  if (!report.resolved_config.empty()) {
    out << "\n# resolved configuration\n" << report.resolved_config;
  }
}

void write_report_json(std::ostream& out, const VerificationReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["manifold"] = report.manifold;
  ordered_json pairs = ordered_json::array();
  for (const auto& [R, r] : report.pairs) pairs.push_back({R, r});
  j["pairs"] = pairs;
  ordered_json env;
  env["seed"] = report.seed;
  env["grid"] = report.grid;
  env["budget"] = report.budget;
  ordered_json tol;
  for (const Measurement& t : report.tolerances) tol[t.label] = t.value;
  env["tolerances"] = tol;
  j["environment"] = env;
  ordered_json claims = ordered_json::array();
  for (const ClaimEntry& c : report.claims) {
    ordered_json e;
    e["id"] = c.id;
    e["status"] = to_string(c.status);
    e["description"] = c.description;
    ordered_json ms = ordered_json::array();
    for (const Measurement& m : c.measurements) {
      ordered_json mj;
      mj["label"] = m.label;
      if (std::isfinite(m.value)) {
        mj["value"] = m.value;
      } else {
        mj["value"] = std::isnan(m.value) ? "nan" : (m.value > 0 ? "inf" : "-inf");
      }
      ms.push_back(mj);
    }
    e["measurements"] = ms;
    e["notes"] = c.notes;
    claims.push_back(e);
  }
  j["claims"] = claims;
  j["passed"] = report.passed();
  if (!report.resolved_config.empty()) j["resolved_config"] = report.resolved_config;
  out << j.dump(2) << "\n";
}

}  // namespace geolens

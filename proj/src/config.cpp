#include "geolens/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "geolens/errors.hpp"

namespace geolens {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    if (lower(v) == "inf") return INFINITY;
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  }
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(to_double(key, item));
  }
  return out;
}

// "R r; R r; ..."
std::vector<std::pair<double, double>> to_pairs(const std::string& key, const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::stringstream fields(trim(item));
    std::string a, b, extra;
    if (trim(item).empty()) continue;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ConfigError(fmt::format("{}: '{}' is not an 'R r' pair", key, trim(item)));
    }
    out.emplace_back(to_double(key, a), to_double(key, b));
  }
  return out;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);  // shortest representation that round-trips
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& base_dir) {
  RunConfig c;
  std::string section;
  std::string line;
  int lineno = 0;
  std::optional<double> R, r;
  std::vector<std::pair<double, double>> pairs;
  bool have_pairs = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    // ';' separates pairs inside [balls] values, so only '#' comments there.
    std::string body = line;
    if (section == "balls") {
      const auto hash = line.find('#');
      if (hash != std::string::npos) body = line.substr(0, hash);
    } else if (cut != std::string::npos) {
      body = line.substr(0, cut);
    }
    body = trim(body);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(fmt::format("line {}: bad section header", lineno));
      section = lower(trim(body.substr(1, body.size() - 2)));
      static const char* known[] = {"manifold", "balls",      "sampling", "integration",
                                    "radii",    "tolerances", "output"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
        throw ConfigError(fmt::format("line {}: unknown section [{}]", lineno, section));
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
    }
    if (section.empty()) throw ConfigError(fmt::format("line {}: key outside a section", lineno));
    const std::string key = lower(trim(body.substr(0, eq)));
    const std::string value = trim(body.substr(eq + 1));
    const std::string where = fmt::format("[{}] {}", section, key);
    bool known = true;
    if (section == "manifold") {
      if (key == "kind") {
        c.manifold.kind = lower(value);
      } else if (key == "dimension") {
        c.manifold.dimension = to_int<int>(where, value);
      } else if (key == "curvature") {
        c.manifold.curvature = to_double(where, value);
      } else if (key == "profile") {
        c.manifold.profile = lower(value);
      } else if (key == "profile_params") {
        c.manifold.profile_params = to_list(where, value);
      } else if (key == "profile_table") {
        std::filesystem::path p(value);
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        c.manifold.profile_table = p.empty() ? "" : std::filesystem::absolute(p).lexically_normal().string();
      } else if (key == "injectivity") {
        c.manifold.injectivity = to_double(where, value);
      } else if (key == "loop_length") {
        c.manifold.loop_length = to_double(where, value);
      } else {
        known = false;
      }
    } else if (section == "balls") {
      if (key == "r") {
        // Keys are case-insensitive except R/r.
        if (trim(body.substr(0, eq)) == "R") {
          R = to_double(where, value);
        } else {
          r = to_double(where, value);
        }
      } else if (key == "pairs") {
        pairs = to_pairs(where, value);
        have_pairs = true;
      } else {
        known = false;
      }
    } else if (section == "sampling") {
      if (key == "grid") {
        c.grid = to_int<int>(where, value);
      } else if (key == "budget") {
        c.budget = to_int<int>(where, value);
      } else if (key == "seed") {
        c.seed = to_int<std::uint64_t>(where, value);
      } else if (key == "refine") {
        c.refine = to_double(where, value);
      } else {
        known = false;
      }
    } else if (section == "integration") {
      if (key == "step") {
        c.step = to_double(where, value);
      } else if (key == "horizon") {
        c.horizon = to_double(where, value);
      } else {
        known = false;
      }
    } else if (section == "radii") {
      if (key == "directions") {
        c.radii.directions = to_int<int>(where, value);
      } else if (key == "base_points") {
        c.radii.base_points = to_int<int>(where, value);
      } else if (key == "horizon") {
        c.radii.horizon = to_double(where, value);
      } else if (key == "step") {
        c.radii.step = to_double(where, value);
      } else {
        known = false;
      }
    } else if (section == "tolerances") {
      Tolerances& t = c.tolerances;
      if (key == "manifold") {
        t.manifold = to_double(where, value);
      } else if (key == "bvp") {
        t.bvp = to_double(where, value);
      } else if (key == "nesting") {
        t.nesting = to_double(where, value);
      } else if (key == "full") {
        t.full = to_double(where, value);
      } else if (key == "nesting_margin") {
        t.nesting_margin = to_double(where, value);
      } else if (key == "identity") {
        t.identity = to_double(where, value);
      } else if (key == "resolution") {
        t.resolution = to_double(where, value);
      } else {
        known = false;
      }
    } else if (section == "output") {
      if (key == "path") {
        c.output = value;
      } else if (key == "format") {
        c.format = lower(value);
      } else {
        known = false;
      }
    }
    if (!known) throw ConfigError(fmt::format("line {}: unknown key {}", lineno, where));
  }
  if (R.has_value() != r.has_value()) {
    throw ConfigError("[balls] needs both R and r (or neither, with pairs)");
  }
  if (R) c.pairs.emplace_back(*R, *r);
  if (have_pairs) c.pairs.insert(c.pairs.end(), pairs.begin(), pairs.end());
  validate_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  const std::filesystem::path p(path);
  return parse_config(in, p.parent_path().string());
}

void validate_config(const RunConfig& c) {
  const ManifoldSpec& m = c.manifold;
  static const char* kinds[] = {"euclidean", "sphere", "hyperbolic", "surface_of_revolution"};
  if (std::find(std::begin(kinds), std::end(kinds), m.kind) == std::end(kinds)) {
    throw ConfigError(fmt::format("unknown manifold kind '{}'", m.kind));
  }
  if (m.dimension < 2) throw ConfigError("dimension must be at least 2");
  if (m.kind == "sphere" && m.curvature && !(*m.curvature > 0.0)) {
    throw ConfigError("sphere curvature must be positive");
  }
  if (m.kind == "hyperbolic" && m.curvature && !(*m.curvature < 0.0)) {
    throw ConfigError("hyperbolic curvature must be negative");
  }
  if (m.kind == "euclidean" && m.curvature && *m.curvature != 0.0) {
    throw ConfigError("euclidean curvature must be 0");
  }
  if (m.kind == "surface_of_revolution") {
    if (m.dimension != 2) throw ConfigError("a surface of revolution has dimension 2");
    static const char* profiles[] = {"torus", "catenoid", "round_band", "pear", "table"};
    if (std::find(std::begin(profiles), std::end(profiles), m.profile) == std::end(profiles)) {
      throw ConfigError(fmt::format("unknown profile '{}'", m.profile));
    }
    if (m.profile == "table" && m.profile_table.empty()) {
      throw ConfigError("profile = table needs profile_table");
    }
    if (m.profile != "table" && m.profile_params.size() != 2) {
      throw ConfigError(fmt::format("profile {} takes two profile_params", m.profile));
    }
  } else if (!m.profile.empty() || !m.profile_params.empty() || !m.profile_table.empty()) {
    throw ConfigError("profile keys only apply to surface_of_revolution");
  }
  if (m.injectivity && !(*m.injectivity > 0.0)) throw ConfigError("injectivity must be positive");
  if (m.loop_length && !(*m.loop_length > 0.0)) throw ConfigError("loop_length must be positive");
  for (const auto& [R, r] : c.pairs) {
    if (!(R > 0.0 && r > 0.0) || !std::isfinite(R) || !std::isfinite(r)) {
      throw ConfigError(fmt::format("ball radii must be positive and finite (R = {}, r = {})", R, r));
    }
  }
  if (c.grid < 2) throw ConfigError("grid must be at least 2");
  if (c.budget < 1) throw ConfigError("budget must be at least 1");
  if (!(c.refine > 0.0)) throw ConfigError("refine must be positive");
  if (!(c.step > 0.0) || !(c.horizon > 0.0)) throw ConfigError("integration step/horizon must be positive");
  if (c.radii.directions < 1 || c.radii.base_points < 1 || !(c.radii.horizon > 0.0) ||
      !(c.radii.step > 0.0)) {
    throw ConfigError("radii settings must be positive");
  }
  const Tolerances& t = c.tolerances;
  for (double v : {t.manifold, t.bvp, t.nesting, t.full, t.nesting_margin, t.identity,
                   t.resolution}) {
    if (!(v > 0.0)) throw ConfigError("tolerances must be positive");
  }
  if (c.format != "text" && c.format != "json") {
    throw ConfigError(fmt::format("output format must be text or json, not '{}'", c.format));
  }
}

void emit_config(std::ostream& out, const RunConfig& c) {
  const ManifoldSpec& m = c.manifold;
  out << "[manifold]\n";
  out << "kind = " << m.kind << "\n";
  out << "dimension = " << m.dimension << "\n";
  if (m.curvature) out << "curvature = " << num(*m.curvature) << "\n";
  if (!m.profile.empty()) out << "profile = " << m.profile << "\n";
  if (!m.profile_params.empty()) {
    out << "profile_params = ";
    for (std::size_t i = 0; i < m.profile_params.size(); ++i) {
      out << (i ? ", " : "") << num(m.profile_params[i]);
    }
    out << "\n";
  }
  if (!m.profile_table.empty()) out << "profile_table = " << m.profile_table << "\n";
  if (m.injectivity) out << "injectivity = " << num(*m.injectivity) << "\n";
  if (m.loop_length) out << "loop_length = " << num(*m.loop_length) << "\n";
  out << "\n[balls]\n";
  if (!c.pairs.empty()) {
    out << "pairs = ";
    for (std::size_t i = 0; i < c.pairs.size(); ++i) {
      out << (i ? "; " : "") << num(c.pairs[i].first) << " " << num(c.pairs[i].second);
    }
    out << "\n";
  }
  out << "\n[sampling]\n";
  out << "grid = " << c.grid << "\nbudget = " << c.budget << "\nseed = " << c.seed
      << "\nrefine = " << num(c.refine) << "\n";
  out << "\n[integration]\n";
  out << "step = " << num(c.step) << "\nhorizon = " << num(c.horizon) << "\n";
  out << "\n[radii]\n";
  out << "directions = " << c.radii.directions << "\nbase_points = " << c.radii.base_points
      << "\nhorizon = " << num(c.radii.horizon) << "\nstep = " << num(c.radii.step) << "\n";
  const Tolerances& t = c.tolerances;
  out << "\n[tolerances]\n";
  out << "manifold = " << num(t.manifold) << "\nbvp = " << num(t.bvp)
      << "\nnesting = " << num(t.nesting) << "\nfull = " << num(t.full)
      << "\nnesting_margin = " << num(t.nesting_margin) << "\nidentity = " << num(t.identity)
      << "\nresolution = " << num(t.resolution) << "\n";
  out << "\n[output]\n";
  if (!c.output.empty()) out << "path = " << c.output << "\n";
  out << "format = " << c.format << "\n";
}

std::string emit_config(const RunConfig& config) {
  std::ostringstream out;
  emit_config(out, config);
  return out.str();
}

Manifold build_manifold(const RunConfig& c) {
  validate_config(c);
  const ManifoldSpec& s = c.manifold;
  if (s.kind == "euclidean") return Manifold::euclidean(s.dimension);
  if (s.kind == "sphere") return Manifold::sphere(s.dimension, s.curvature.value_or(1.0));
  if (s.kind == "hyperbolic") return Manifold::hyperbolic(s.dimension, s.curvature.value_or(-1.0));

  std::optional<Profile> profile;
  try {
    const std::vector<double>& p = s.profile_params;
    if (s.profile == "torus") {
      profile = Profile::torus(p[0], p[1]);
    } else if (s.profile == "catenoid") {
      profile = Profile::catenoid(p[0], p[1]);
    } else if (s.profile == "round_band") {
      profile = Profile::round_band(p[0], p[1]);
    } else if (s.profile == "pear") {
      profile = Profile::pear(p[0], p[1]);
    } else {
      std::ifstream in(s.profile_table);
      if (!in) throw ConfigError(fmt::format("cannot read profile table '{}'", s.profile_table));
      std::vector<ProfileNode> nodes;
      std::string line;
      while (std::getline(in, line)) {
        const std::string body = trim(line.substr(0, line.find('#')));
        if (body.empty()) continue;
        std::vector<double> v;
        try {
          v = to_list("profile_table", body);
        } catch (const ConfigError&) {
          if (nodes.empty()) continue;  // header row
          throw;
        }
        if (v.size() != 4) throw ConfigError("profile_table rows need u,f,df,ddf");
        nodes.push_back({v[0], v[1], v[2], v[3]});
      }
      profile = Profile::from_table(std::move(nodes));
    }
  } catch (const DomainError& e) {
    throw ConfigError(fmt::format("invalid profile: {}", e.what()));
  }
  NumericSettings settings;
  settings.step = c.step;
  settings.horizon = c.horizon;
  settings.manifold_tolerance = c.tolerances.manifold;
  settings.bvp_tolerance = c.tolerances.bvp;
  return Manifold::surface_of_revolution(*profile, settings)
      .with_certified_radii(s.injectivity, s.loop_length);
}

ProfileOptions profile_options(const RunConfig& c) {
  ProfileOptions o;
  o.grid = c.grid;
  o.budget = c.budget;
  o.seed = c.seed;
  o.refine = c.refine;
  o.nesting_tolerance = c.tolerances.nesting;
  o.full_tolerance = c.tolerances.full;
  return o;
}

SuiteSettings suite_settings(const RunConfig& c) {
  SuiteSettings s;
  s.profile = profile_options(c);
  s.hausdorff_budget = std::max(1, std::min(c.budget, 1024));
  s.nesting_margin = c.tolerances.nesting_margin;
  s.identity_tolerance = c.tolerances.identity;
  s.resolution = c.tolerances.resolution;
  s.radii = c.radii;
  return s;
}

RadiusValue model_convexity(const Manifold& m, const RunConfig& config) {
  if (m.has_constant_curvature()) return closed_form_radii(m).convexity;
  return compute_radii(m, config.radii).convexity;
}

}  // namespace geolens

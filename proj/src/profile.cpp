#include "geolens/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "geolens/errors.hpp"

namespace geolens {

namespace {

// Quintic Hermite basis on [0, 1], coefficients of s^0..s^5. Order: value at
// 0, slope at 0, curvature at 0, curvature at 1, slope at 1, value at 1.
constexpr std::array<std::array<double, 6>, 6> kQuinticBasis = {{
    {1, 0, 0, -10, 15, -6},
    {0, 1, 0, -6, 8, -3},
    {0, 0, 0.5, -1.5, 1.5, -0.5},
    {0, 0, 0, 0.5, -1, 0.5},
    {0, 0, 0, -4, 7, -3},
    {0, 0, 0, 10, -15, 6},
}};

// k-th derivative of sum c_i s^i.
double poly_derivative(const std::array<double, 6>& c, double s, int k) {
  double acc = 0.0;
  for (int i = 5; i >= k; --i) {
    double coeff = c[i];
    for (int j = 0; j < k; ++j) coeff *= static_cast<double>(i - j);
    acc = acc * s + coeff;
  }
  return acc;
}

class HermiteTable {
 public:
  explicit HermiteTable(std::vector<ProfileNode> nodes) : nodes_(std::move(nodes)) {}

  double eval(double u, int k) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u,
                               [](double x, const ProfileNode& n) { return x < n.u; });
    std::size_t i = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
    i = std::clamp<std::size_t>(i, 1, nodes_.size() - 1) - 1;
    const ProfileNode& a = nodes_[i];
    const ProfileNode& b = nodes_[i + 1];
    const double h = b.u - a.u;
    const double s = (u - a.u) / h;
    const std::array<double, 6> w = {a.f, a.df * h, a.ddf * h * h,
                                     b.ddf * h * h, b.df * h, b.f};
    double acc = 0.0;
    for (int m = 0; m < 6; ++m) acc += w[m] * poly_derivative(kQuinticBasis[m], s, k);
    return acc / std::pow(h, k);
  }

 private:
  std::vector<ProfileNode> nodes_;
};

}  // namespace

Profile::Profile(std::string descriptor, Evaluator f, Evaluator df, Evaluator ddf,
                 double lo, double hi, bool periodic) {
  if (!(hi > lo)) throw DomainError("profile interval must satisfy lo < hi");
  impl_ = std::make_shared<const Impl>(Impl{std::move(descriptor), std::move(f), std::move(df),
                                            std::move(ddf), lo, hi, periodic});
  for (int i = 0; i <= 256; ++i) {
    const double u = lo + (hi - lo) * i / 256.0;
    if (!(impl_->f(u) > 0.0)) {
      throw DomainError(fmt::format("profile '{}' is not positive at u = {}",
                                    impl_->descriptor, u));
    }
  }
}

Profile Profile::torus(double a, double b) {
  if (!(a > std::abs(b))) throw DomainError("torus profile requires a > |b|");
  return Profile(
      fmt::format("torus({}, {})", a, b), [a, b](double u) { return a + b * std::cos(u); },
      [b](double u) { return -b * std::sin(u); }, [b](double u) { return -b * std::cos(u); },
      -std::numbers::pi, std::numbers::pi, true);
}

Profile Profile::catenoid(double c, double half_width) {
  if (!(c > 0.0) || !(half_width > 0.0)) throw DomainError("catenoid requires c > 0, width > 0");
  return Profile(
      fmt::format("catenoid({}, {})", c, half_width),
      [c](double u) { return c * std::cosh(u / c); }, [c](double u) { return std::sinh(u / c); },
      [c](double u) { return std::cosh(u / c) / c; }, -half_width, half_width, false);
}

Profile Profile::round_band(double rho, double margin) {
  if (!(rho > 0.0) || !(margin > 0.0) || !(2.0 * margin < std::numbers::pi * rho)) {
    throw DomainError("round band requires rho > 0 and 0 < margin < pi rho / 2");
  }
  return Profile(
      fmt::format("round_band({}, {})", rho, margin),
      [rho](double u) { return rho * std::sin(u / rho); },
      [rho](double u) { return std::cos(u / rho); },
      [rho](double u) { return -std::sin(u / rho) / rho; }, margin,
      std::numbers::pi * rho - margin, false);
}

Profile Profile::pear(double eps, double margin) {
  if (!(std::abs(eps) < 0.25) || !(margin > 0.0) || !(2.0 * margin < std::numbers::pi)) {
    throw DomainError("pear profile requires |eps| < 1/4 and 0 < margin < pi / 2");
  }
  return Profile(
      fmt::format("pear({}, {})", eps, margin),
      [eps](double u) { return std::sin(u) * (1.0 + eps * std::cos(u)); },
      [eps](double u) { return std::cos(u) + eps * std::cos(2.0 * u); },
      [eps](double u) { return -std::sin(u) - 2.0 * eps * std::sin(2.0 * u); }, margin,
      std::numbers::pi - margin, false);
}

Profile Profile::from_table(std::vector<ProfileNode> nodes) {
  if (nodes.size() < 2) throw DomainError("profile table needs at least two nodes");
  std::sort(nodes.begin(), nodes.end(),
            [](const ProfileNode& a, const ProfileNode& b) { return a.u < b.u; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i].u > nodes[i - 1].u)) throw DomainError("profile table has repeated u");
  }
  const double lo = nodes.front().u;
  const double hi = nodes.back().u;
  const std::size_t count = nodes.size();
  auto table = std::make_shared<const HermiteTable>(std::move(nodes));
  return Profile(
      fmt::format("table({} nodes)", count), [table](double u) { return table->eval(u, 0); },
      [table](double u) { return table->eval(u, 1); },
      [table](double u) { return table->eval(u, 2); }, lo, hi, false);
}

double Profile::wrap(double u) const {
  if (!std::isfinite(u)) throw DomainError("profile query at non-finite u");
  if (impl_->periodic) {
    const double period = impl_->hi - impl_->lo;
    double w = std::fmod(u - impl_->lo, period);
    if (w < 0.0) w += period;
    return impl_->lo + w;
  }
  if (u < impl_->lo || u > impl_->hi) {
    throw DomainError(fmt::format("u = {} outside profile interval [{}, {}]", u, impl_->lo,
                                  impl_->hi));
  }
  return u;
}

bool Profile::contains(double u) const {
  return std::isfinite(u) && (impl_->periodic || (u >= impl_->lo && u <= impl_->hi));
}

double Profile::f(double u) const { return impl_->f(wrap(u)); }
double Profile::df(double u) const { return impl_->df(wrap(u)); }
double Profile::ddf(double u) const { return impl_->ddf(wrap(u)); }

double Profile::gauss_curvature(double u) const {
  const double w = wrap(u);
  return -impl_->ddf(w) / impl_->f(w);
}

std::pair<double, double> Profile::curvature_bounds(int samples) const {
  double lo = INFINITY;
  double hi = -INFINITY;
  for (int i = 0; i < samples; ++i) {
    const double u = impl_->lo + (impl_->hi - impl_->lo) * i / (samples - 1.0);
    const double k = gauss_curvature(u);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  return {lo, hi};
}

}  // namespace geolens

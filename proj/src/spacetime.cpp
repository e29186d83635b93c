#include "qpv/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpv {

namespace {

constexpr double kPicosecond = 1e-12;

void require_radius(double r, const char* what) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::domain_error(std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace

double radius_from_times(std::int64_t t_send_ps, std::int64_t t_recv_ps) {
  if (t_recv_ps < t_send_ps) {
    throw std::domain_error("reply cannot arrive before the challenge left");
  }
  return static_cast<double>(t_recv_ps - t_send_ps) * kPicosecond *
         kSpeedOfLight / 2.0;
}

double range_from_excess_ps(std::int64_t delta_ps) {
  if (delta_ps < 0) throw std::domain_error("excess latency must be >= 0");
  return static_cast<double>(delta_ps) * kPicosecond * kSpeedOfLight;
}

PositionRegion interval_region(double v1, double r1, double v2, double r2) {
  require_radius(r1, "radius r1");
  require_radius(r2, "radius r2");
  if (!std::isfinite(v1) || !std::isfinite(v2)) {
    throw std::domain_error("verifier positions must be finite");
  }
  double lo = std::max(v1 - r1, v2 - r2);
  double hi = std::min(v1 + r1, v2 + r2);
  PositionRegion region;
  if (hi < lo) {
    region.kind = RegionKind::Empty;
    return region;
  }
  region.kind = RegionKind::Interval;
  region.lo = lo;
  region.hi = hi;
  region.diameter = hi - lo;
  return region;
}

PositionRegion lens_region(Point2 v1, double r1, Point2 v2, double r2) {
  require_radius(r1, "radius r1");
  require_radius(r2, "radius r2");
  double dx = v2.x - v1.x;
  double dy = v2.y - v1.y;
  double d = std::hypot(dx, dy);
  if (!std::isfinite(d)) {
    throw std::domain_error("verifier positions must be finite");
  }

  PositionRegion region;
  if (d > r1 + r2) {
    region.kind = RegionKind::Empty;
    return region;
  }
  region.kind = RegionKind::Lens;

  double r_small = std::min(r1, r2);
  if (d <= std::fabs(r1 - r2)) {
    // One disk inside the other (includes coincident centers): the
    // intersection is the smaller disk.
    region.diameter = 2.0 * r_small;
    region.area = std::numbers::pi * r_small * r_small;
    return region;
  }

  // Proper two-point intersection (corners coincide at tangency).
  double x1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  double half_chord = std::sqrt(std::max(0.0, r1 * r1 - x1 * x1));
  double ux = dx / d;
  double uy = dy / d;
  region.has_corners = true;
  region.corner_a = {v1.x + x1 * ux - half_chord * uy,
                     v1.y + x1 * uy + half_chord * ux};
  region.corner_b = {v1.x + x1 * ux + half_chord * uy,
                     v1.y + x1 * uy - half_chord * ux};

  // Maximum chord: a full diameter of the smaller circle fits inside the
  // larger disk when d^2 <= r_big^2 - r_small^2; otherwise the widest pair
  // is either the corner chord or the along-axis extent.
  double r_big = std::max(r1, r2);
  if (d * d <= r_big * r_big - r_small * r_small) {
    region.diameter = 2.0 * r_small;
  } else {
    region.diameter = std::max(2.0 * half_chord, r1 + r2 - d);
  }

  auto clamped_acos = [](double v) {
    return std::acos(std::clamp(v, -1.0, 1.0));
  };
  double a1 = clamped_acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1));
  double a2 = clamped_acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2));
  double s = std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) *
                               (d + r1 + r2));
  region.area = r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(s);
  return region;
}

LatencyBudget latency_budget(std::vector<LatencyComponent> components) {
  double total = 0.0;
  for (const auto& c : components) {
    if (!std::isfinite(c.nanoseconds) || c.nanoseconds < 0.0) {
      throw std::domain_error("latency component '" + c.name +
                              "' must be finite and >= 0");
    }
    total += c.nanoseconds;
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const LatencyComponent& a, const LatencyComponent& b) {
                     return a.nanoseconds > b.nanoseconds;
                   });
  return {total, std::move(components)};
}

}  // namespace qpv

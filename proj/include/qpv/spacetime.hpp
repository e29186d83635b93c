#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpv {

// Exact by SI definition; never configurable.
inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct Point2 {
  double x;
  double y;
};

// All wire timestamps are integer picoseconds.
struct TimingRecord {
  std::int64_t t1_send_ps;
  std::int64_t t1_recv_ps;
  std::int64_t t2_send_ps;
  std::int64_t t2_recv_ps;
};

// Round-trip time to a reflecting prover bounds its distance:
// r = (t_recv - t_send) c / 2. Requires t_recv >= t_send.
double radius_from_times(std::int64_t t_send_ps, std::int64_t t_recv_ps);

// Positional slack bought by delta_t of excess latency: c * delta_t.
double range_from_excess_ps(std::int64_t delta_ps);

enum class RegionKind { Interval, Lens, Empty };

// Where the prover can be, given both verifiers' round-trip radii.
// 1-D: an interval (possibly a single point). 2-D: the intersection of two
// disks; diameter is the region's maximum chord, which near tangency is
// perpendicular to the baseline and much wider than the along-axis extent.
struct PositionRegion {
  RegionKind kind = RegionKind::Empty;
  double diameter = 0.0;
  // Interval only.
  double lo = 0.0;
  double hi = 0.0;
  // Lens only.
  double area = 0.0;
  bool has_corners = false;  // proper two-point circle intersection
  Point2 corner_a{0.0, 0.0};
  Point2 corner_b{0.0, 0.0};
};

PositionRegion interval_region(double v1, double r1, double v2, double r2);
PositionRegion lens_region(Point2 v1, double r1, Point2 v2, double r2);

struct LatencyComponent {
  std::string name;
  double nanoseconds;
};

struct LatencyBudget {
  double total_ns;
  std::vector<LatencyComponent> breakdown;  // sorted by duration, descending
};

// Sums the component delays; components must be finite and >= 0.
LatencyBudget latency_budget(std::vector<LatencyComponent> components);

}  // namespace qpv

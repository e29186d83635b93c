#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpv/planner.hpp"
#include "qpv/protocol.hpp"
#include "qpv/spacetime.hpp"

namespace qpv {

// Anything wrong with the run configuration: syntax, unknown or duplicate
// keys, bad values, missing required keys. Messages name the offending key
// and, where available, the line.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryConfig {
  int dimension = 1;
  // 1-D positions.
  double v1 = 0.0;
  double v2 = 0.0;
  // 2-D positions.
  Point2 v1_point{0.0, 0.0};
  Point2 v2_point{0.0, 0.0};
  std::optional<TimingRecord> timing;
  std::optional<double> excess_ns;
  bool present = false;
};

// Flat sectioned key=value file, resolved with documented defaults. Fields
// a command needs but the file omits surface as ConfigError at resolve
// time, naming the key.
struct RunConfig {
  // [protocol]
  std::optional<std::int64_t> rounds;
  int input_bits = 40;
  std::optional<double> mu;
  double rep_rate_hz = 2e6;

  // [channel]
  std::optional<double> eta;
  std::optional<double> p_e;
  // Optional fitted detection product; when set, eta is derived as
  // eta_mu / mu instead of being read from `eta`.
  std::optional<double> eta_mu;

  // [security]
  SecurityParams security{1e-10, 1e-3};

  // [coefficients]
  ScoreCoefficients coefficients{0.04275, 0.05019, 1.0};

  // [geometry]
  GeometryConfig geometry;

  // [latency], only components present in the file.
  std::vector<LatencyComponent> latency;

  // [run]
  std::vector<std::uint64_t> seeds;
  std::string role = "honest";
  std::string mode = "monte-carlo";  // or "expected"
  std::string boolean_backend = "keyed";
  std::uint64_t boolean_seed = 1;
  double adversary_det_eff = 1.0;
  std::optional<std::int64_t> vacuum_responses;  // default: round(x*)
  MuInterval mu_interval{0.05, 2.0};
  double mu_tolerance = 1e-4;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Assemble ProtocolParams for a command. Channel and rounds are always
// required; mu only when require_mu (optimize searches over it).
ProtocolParams resolve_protocol_params(const RunConfig& cfg, bool require_mu);

// Session role from cfg.role plus its strategy parameters. x_star_hint
// fills VacuumResponder/Composite budgets when vacuum_responses is absent.
SessionRole resolve_role(const RunConfig& cfg, double x_star_hint);

BooleanFunction::Backend resolve_backend(const RunConfig& cfg);

}  // namespace qpv

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qpv/config.hpp"
#include "qpv/planner.hpp"
#include "qpv/protocol.hpp"
#include "qpv/report.hpp"
#include "qpv/security_bounds.hpp"
#include "qpv/spacetime.hpp"
#include "qpv/version.hpp"

namespace {

// Exit codes: 0 success / verification passed, 1 verification failed
// (a simulated trial fell below threshold, or the located region is empty),
// 2 configuration error, 3 internal error.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

struct Options {
  std::string config_path;
  std::string format = "obj";
  std::string out_path;
  std::vector<std::uint64_t> seeds;  // simulate only; overrides [run] seeds
};

qpv::ReportFormat parse_format(const std::string& f) {
  return f == "table" ? qpv::ReportFormat::Table : qpv::ReportFormat::Object;
}

void emit(const qpv::ordered_json& report, const Options& opt) {
  std::string text = qpv::render_report(report, parse_format(opt.format));
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + opt.out_path);
  out << text;
  if (!out) throw std::runtime_error("cannot write output file: " + opt.out_path);
}

int run_threshold(const qpv::RunConfig& cfg, const Options& opt) {
  qpv::ProtocolParams p = qpv::resolve_protocol_params(cfg, true);
  qpv::ThresholdReport t =
      qpv::threshold(p.rounds, p.mu, cfg.coefficients, p.security);
  qpv::ordered_json results{{"threshold", qpv::threshold_json(t)}};
  emit(qpv::make_report("threshold", cfg, std::move(results)), opt);
  return kExitOk;
}

int run_optimize(const qpv::RunConfig& cfg, const Options& opt) {
  qpv::ProtocolParams p = qpv::resolve_protocol_params(cfg, false);
  qpv::PlanResult plan =
      qpv::optimize_mu(p, cfg.coefficients, cfg.mu_interval, cfg.mu_tolerance);
  qpv::AttackResource attack =
      qpv::attack_resource_rate(p.input_bits, p.rep_rate_hz);
  qpv::ordered_json results{
      {"plan",
       {{"mu_star", plan.mu_star},
        {"honest_score", plan.honest_score},
        {"threshold", plan.threshold},
        {"margin", plan.margin},
        {"feasible", plan.feasible}}},
      {"attack_resource",
       {{"pairs_per_second", attack.pairs_per_second},
        {"positive_requirement", attack.positive_requirement}}}};
  emit(qpv::make_report("optimize", cfg, std::move(results)), opt);
  // An infeasible channel is a correct planning answer, not a failure.
  return kExitOk;
}

int run_simulate(const qpv::RunConfig& cfg, const Options& opt) {
  qpv::ProtocolParams p = qpv::resolve_protocol_params(cfg, true);
  qpv::ThresholdReport t =
      qpv::threshold(p.rounds, p.mu, cfg.coefficients, p.security);

  if (cfg.mode == "expected") {
    qpv::ExpectedTally tally = qpv::honest_expected_tally(p);
    double score = qpv::expected_tally_score(tally, cfg.coefficients);
    qpv::ordered_json results{
        {"expected_tally",
         {{"correct", tally.correct},
          {"incorrect", tally.incorrect},
          {"no_response", tally.no_response}}},
        {"expected_score", score},
        {"threshold", qpv::threshold_json(t)}};
    emit(qpv::make_report("simulate", cfg, std::move(results)), opt);
    return kExitOk;
  }

  std::vector<std::uint64_t> seeds = opt.seeds.empty() ? cfg.seeds : opt.seeds;
  if (seeds.empty()) {
    throw qpv::ConfigError(
        "simulate needs at least one seed (--seed or [run] seeds)");
  }
  qpv::BooleanFunction f(p.input_bits, cfg.boolean_seed,
                         qpv::resolve_backend(cfg));
  qpv::SessionRole role = qpv::resolve_role(cfg, t.x_star);

  qpv::ordered_json trials = qpv::ordered_json::array();
  bool all_passed = true;
  for (std::uint64_t seed : seeds) {
    qpv::TrialRecord rec = qpv::run_session(p, cfg.coefficients, f, role, seed);
    all_passed &= rec.passed;
    trials.push_back(qpv::trial_json(rec));
  }
  qpv::ordered_json results{{"threshold", qpv::threshold_json(t)},
                            {"trials", std::move(trials)},
                            {"all_passed", all_passed}};
  emit(qpv::make_report("simulate", cfg, std::move(results)), opt);
  return all_passed ? kExitOk : kExitVerifyFailed;
}

int run_locate(const qpv::RunConfig& cfg, const Options& opt) {
  const qpv::GeometryConfig& g = cfg.geometry;
  if (!g.present) throw qpv::ConfigError("locate needs a [geometry] section");
  if (!g.timing) {
    throw qpv::ConfigError(
        "locate needs [geometry] timing (t1_send_ps .. t2_recv_ps)");
  }
  double r1 = qpv::radius_from_times(g.timing->t1_send_ps, g.timing->t1_recv_ps);
  double r2 = qpv::radius_from_times(g.timing->t2_send_ps, g.timing->t2_recv_ps);
  // Unaccounted response latency smears the position estimate by c * dt in
  // total, half of it on each verifier's radius.
  double slack = 0.0;
  if (g.excess_ns) {
    slack = qpv::range_from_excess_ps(
        static_cast<std::int64_t>(std::llround(*g.excess_ns * 1000.0)));
    r1 += slack / 2.0;
    r2 += slack / 2.0;
  }

  qpv::PositionRegion region =
      g.dimension == 1 ? qpv::interval_region(g.v1, r1, g.v2, r2)
                       : qpv::lens_region(g.v1_point, r1, g.v2_point, r2);

  qpv::ordered_json rj{{"kind", region.kind == qpv::RegionKind::Empty  ? "empty"
                                : region.kind == qpv::RegionKind::Lens ? "lens"
                                                                       : "interval"},
                       {"diameter", region.diameter}};
  if (region.kind == qpv::RegionKind::Interval) {
    rj["lo"] = region.lo;
    rj["hi"] = region.hi;
  }
  if (region.kind == qpv::RegionKind::Lens) {
    rj["area"] = region.area;
    if (region.has_corners) {
      rj["corner_a"] = {{"x", region.corner_a.x}, {"y", region.corner_a.y}};
      rj["corner_b"] = {{"x", region.corner_b.x}, {"y", region.corner_b.y}};
    }
  }
  qpv::ordered_json results{{"radius_1", r1},
                            {"radius_2", r2},
                            {"excess_range_m", slack},
                            {"region", std::move(rj)}};
  emit(qpv::make_report("locate", cfg, std::move(results)), opt);
  return region.kind == qpv::RegionKind::Empty ? kExitVerifyFailed : kExitOk;
}

int run_budget(const qpv::RunConfig& cfg, const Options& opt) {
  if (cfg.latency.empty()) {
    throw qpv::ConfigError("budget needs a [latency] section with components");
  }
  qpv::LatencyBudget b = qpv::latency_budget(cfg.latency);
  qpv::ordered_json breakdown = qpv::ordered_json::array();
  for (const auto& c : b.breakdown) {
    breakdown.push_back({{"component", c.name}, {"nanoseconds", c.nanoseconds}});
  }
  qpv::ordered_json results{{"total_ns", b.total_ns},
                            {"breakdown", std::move(breakdown)}};
  emit(qpv::make_report("budget", cfg, std::move(results)), opt);
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "run configuration file")
      ->required();
  cmd->add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"obj", "table"}));
  cmd->add_option("--out", opt.out_path, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Desk-scale planning, certification thresholds, round-by-round "
      "simulation, and spacetime localization for a coherent-state "
      "position-verification protocol."};
  app.set_version_flag("--version", qpv::kVersion);
  app.require_subcommand(1);

  Options opt;
  CLI::App* threshold_cmd =
      app.add_subcommand("threshold", "certified pass threshold and its parts");
  CLI::App* optimize_cmd =
      app.add_subcommand("optimize", "best source intensity for the channel");
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "run verification sessions");
  CLI::App* locate_cmd =
      app.add_subcommand("locate", "position region from round-trip timing");
  CLI::App* budget_cmd =
      app.add_subcommand("budget", "response latency budget breakdown");
  for (CLI::App* cmd :
       {threshold_cmd, optimize_cmd, simulate_cmd, locate_cmd, budget_cmd}) {
    add_common(cmd, opt);
  }
  simulate_cmd->add_option("--seed", opt.seeds,
                           "session seed, repeatable; overrides [run] seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    qpv::RunConfig cfg = qpv::load_config(opt.config_path);
    if (app.got_subcommand(threshold_cmd)) return run_threshold(cfg, opt);
    if (app.got_subcommand(optimize_cmd)) return run_optimize(cfg, opt);
    if (app.got_subcommand(simulate_cmd)) return run_simulate(cfg, opt);
    if (app.got_subcommand(locate_cmd)) return run_locate(cfg, opt);
    return run_budget(cfg, opt);
  } catch (const qpv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

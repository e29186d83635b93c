#include "qpv/report.hpp"

#include "qpv/version.hpp"

namespace qpv {

namespace {

// Shortest-round-trip literal, identical to the JSON rendering, so the two
// formats never disagree on a value.
std::string number(double v) { return ordered_json(v).dump(); }

ordered_json tally_json(const RoundTally& t) {
  return {{"correct", t.n_correct},
          {"incorrect", t.n_incorrect},
          {"no_response", t.n_no_response}};
}

}  // namespace

ordered_json make_report(const std::string& command, const RunConfig& cfg,
                         ordered_json results) {
  ordered_json protocol;
  if (cfg.rounds) protocol["rounds"] = *cfg.rounds;
  protocol["input_bits"] = cfg.input_bits;
  if (cfg.mu) protocol["mu"] = *cfg.mu;
  protocol["rep_rate_hz"] = cfg.rep_rate_hz;

  ordered_json channel;
  if (cfg.eta) channel["eta"] = *cfg.eta;
  if (cfg.eta_mu) channel["eta_mu"] = *cfg.eta_mu;
  if (cfg.p_e) channel["p_e"] = *cfg.p_e;

  ordered_json run{{"role", cfg.role},
                   {"mode", cfg.mode},
                   {"boolean_backend", cfg.boolean_backend},
                   {"boolean_seed", cfg.boolean_seed}};

  return {{"command", command},
          {"version", kVersion},
          {"config",
           {{"protocol", protocol},
            {"channel", channel},
            {"security",
             {{"epsilon", cfg.security.epsilon}, {"xi", cfg.security.xi}}},
            {"coefficients",
             {{"gamma_c", cfg.coefficients.gamma_c},
              {"gamma_perp", cfg.coefficients.gamma_perp},
              {"gamma_i", cfg.coefficients.gamma_i}}},
            {"run", run}}},
          {"results", std::move(results)}};
}

ordered_json threshold_json(const ThresholdReport& t) {
  return {{"gamma0", t.gamma0},
          {"s0_upper", t.s0_upper},
          {"s1_upper", t.s1_upper},
          {"s2plus_upper", t.s2plus_upper},
          {"x_star", t.x_star},
          {"n_xi", t.n_xi},
          {"total_failure_prob", t.total_failure_prob},
          {"class_bounds",
           {{"n0_lower", t.classes.n0_lower},
            {"n1_upper", t.classes.n1_upper},
            {"n2plus_upper", t.classes.n2plus_upper}}}};
}

ordered_json trial_json(const TrialRecord& t) {
  return {{"seed", t.seed},
          {"rounds", t.rounds},
          {"tally", tally_json(t.tally)},
          {"by_class",
           {{"vacuum", tally_json(t.by_class[0])},
            {"single", tally_json(t.by_class[1])},
            {"multi", tally_json(t.by_class[2])}}},
          {"score", t.score},
          {"threshold", t.threshold},
          {"passed", t.passed}};
}

std::string render_report(const ordered_json& report, ReportFormat format) {
  if (format == ReportFormat::Object) return report.dump(2) + "\n";

  const auto& results = report.at("results");
  std::string out = "total,correct,error,no_response,score_or_threshold\n";
  if (results.contains("trials")) {
    for (const auto& trial : results.at("trials")) {
      const auto& tl = trial.at("tally");
      std::int64_t correct = tl.at("correct").get<std::int64_t>();
      std::int64_t error = tl.at("incorrect").get<std::int64_t>();
      std::int64_t silent = tl.at("no_response").get<std::int64_t>();
      out += std::to_string(correct + error) + ',' + std::to_string(correct) +
             ',' + std::to_string(error) + ',' + std::to_string(silent) + ',' +
             number(trial.at("score").get<double>()) + '\n';
    }
    return out;
  }
  if (results.contains("expected_tally")) {
    const auto& tl = results.at("expected_tally");
    double correct = tl.at("correct").get<double>();
    double error = tl.at("incorrect").get<double>();
    double silent = tl.at("no_response").get<double>();
    double gamma0 = results.at("threshold").at("gamma0").get<double>();
    out += number(correct + error) + ',' + number(correct) + ',' +
           number(error) + ',' + number(silent) + ',' + number(gamma0) + '\n';
    return out;
  }
  throw ConfigError("table format is only defined for simulate results");
}

}  // namespace qpv

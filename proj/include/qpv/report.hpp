#pragma once

#include <string>

#include "json.hpp"
#include "qpv/config.hpp"
#include "qpv/protocol.hpp"
#include "qpv/security_bounds.hpp"

namespace qpv {

using ordered_json = nlohmann::ordered_json;

enum class ReportFormat { Object, Table };

// Reports are insertion-ordered JSON rendered with fixed indentation and
// shortest-round-trip number formatting, so identical inputs produce
// byte-identical output.
ordered_json make_report(const std::string& command, const RunConfig& cfg,
                         ordered_json results);

ordered_json threshold_json(const ThresholdReport& t);
ordered_json trial_json(const TrialRecord& t);

// Object: indented JSON. Table: CSV with header
//   total,correct,error,no_response,score_or_threshold
// one row per trial (total = correct + error responses, mirroring the
// published tally layout); an expected-tally result contributes a theory
// row with the threshold in the last column. Table is only defined for
// results carrying trials or an expected tally.
std::string render_report(const ordered_json& report, ReportFormat format);

}  // namespace qpv

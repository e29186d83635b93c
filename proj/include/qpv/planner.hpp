#pragma once

#include <cstdint>

#include "qpv/photon_stats.hpp"
#include "qpv/security_bounds.hpp"

namespace qpv {

struct ProtocolParams {
  std::int64_t rounds;    // N
  int input_bits;         // n, even, challenge halves of n/2 bits each
  double mu;              // source intensity
  ChannelModel channel;
  SecurityParams security;
  double rep_rate_hz;     // source repetition rate
};

// Real-valued expected round counts for an honest session.
struct ExpectedTally {
  double correct;
  double incorrect;
  double no_response;
};

struct MuInterval {
  double lo;
  double hi;
};

struct PlanResult {
  double mu_star;
  double honest_score;
  double threshold;
  double margin;    // honest_score - threshold
  bool feasible;    // margin >= 0 somewhere in the search interval
};

struct AttackResource {
  double pairs_per_second;     // rep_rate * (n/4 - 5)
  bool positive_requirement;   // false: attack needs no pre-shared pairs
};

// Expected honest score
//   N (gamma_c D (1-p_e) - gamma_perp (1-D) - gamma_i D p_e),
// with detection probability D = 1 - e^(-eta mu).
double honest_expected_score(const ProtocolParams& p,
                             const ScoreCoefficients& c);

ExpectedTally honest_expected_tally(const ProtocolParams& p);

// Same linear form as the per-round score, on real-valued tallies.
double expected_tally_score(const ExpectedTally& t,
                            const ScoreCoefficients& c);

// Maximize margin(mu) = honest_expected_score - gamma0 over the interval:
// 0.01-step coarse grid, then golden-section refinement around the best
// grid point down to mu_tol. Ties prefer the smaller mu. Interval must be
// inside (0, 5]. A negative best margin is a legitimate outcome (the
// channel cannot support the protocol) and is flagged, not thrown.
PlanResult optimize_mu(const ProtocolParams& fixed, const ScoreCoefficients& c,
                       MuInterval interval, double mu_tol);

// Entangled-pair consumption rate an attacker needs to keep up with the
// challenge stream. Non-positive requirement (input_bits < 24) means the
// function family is too small to force any pre-shared entanglement.
AttackResource attack_resource_rate(int input_bits, double rep_rate_hz);

void validate_params(const ProtocolParams& p);

}  // namespace qpv

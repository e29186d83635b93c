#pragma once

#include <cstdint>

namespace qpv {

// Per-round score weights: +gamma_c for a correct credential, -gamma_i for
// a wrong one, -gamma_perp for silence. The concentration arguments behind
// the threshold need max(|gamma_c|, |gamma_perp|, |gamma_i|) <= 1.
struct ScoreCoefficients {
  double gamma_c;
  double gamma_perp;
  double gamma_i;
};

struct SecurityParams {
  double epsilon;  // per-inequality failure budget, in (0, 1)
  double xi;       // response-mismatch detection probability floor, in (0, 1)
};

// High-probability bounds on how many of N rounds fall in each photon
// class. Real-valued: these are tail bounds, not counts.
struct ClassBounds {
  double n0_lower;      // vacuum rounds, lower bound
  double n1_upper;      // single-photon rounds, upper bound
  double n2plus_upper;  // multi-photon rounds, upper bound
};

struct VacuumBound {
  double value;   // score bound over the vacuum class
  double x_star;  // response count achieving it
};

// Certified pass threshold and its three class components. An adversary
// keeps its total score below gamma0 except with probability
// total_failure_prob (five union-bounded tail events, each at epsilon).
struct ThresholdReport {
  double s0_upper;
  double s1_upper;
  double s2plus_upper;
  double gamma0;
  double x_star;
  std::int64_t n_xi;
  double total_failure_prob;
  ClassBounds classes;
};

// Best certified score an adversary collecting x responses out of n0
// vacuum rounds can reach: responses carry no credential information, so
// correct/incorrect counts concentrate around x/2 (Chernoff), and silence
// costs gamma_perp each. Requires 0 <= x <= n0, epsilon in (0, 1).
double vacuum_score_upper_at(double x, double n0, const ScoreCoefficients& c,
                             double epsilon);

// Maximum of vacuum_score_upper_at over x in [0, n0], taken over the
// stationary point in closed form (clamped) plus both endpoints. The
// stationary point is used directly instead of the expanded closed-form
// expression for the maximum, whose printed form does not reproduce the
// maximized value.
VacuumBound vacuum_score_upper(double n0, const ScoreCoefficients& c,
                               double epsilon);

// Rounds after which answering both verifiers inconsistently gets caught
// with probability at least 1 - epsilon: ceil(ln eps / ln(1 - xi)).
std::int64_t mismatch_round_cap(double epsilon, double xi);

// Single-photon class: full credit for up to N_xi mismatch-capped rounds,
// Azuma fluctuation allowance sqrt(2 ln(1/eps) (n1 - cap)) beyond.
double single_photon_score_upper(double n1, const ScoreCoefficients& c,
                                 double epsilon, double xi);

// Multi-photon rounds are conceded entirely: n2plus * gamma_c.
double multi_photon_score_upper(double n2plus, const ScoreCoefficients& c);

// Chernoff class-count bounds for N rounds at intensity mu, each at
// failure budget epsilon. Upper bounds clamp to N, the vacuum lower bound
// to 0, so degenerate N stays well-defined.
ClassBounds photon_class_bounds(double n_rounds, double mu, double epsilon);

// Compose the three class bounds into the verification threshold.
ThresholdReport threshold(std::int64_t n_rounds, double mu,
                          const ScoreCoefficients& c,
                          const SecurityParams& sec);

void validate_coefficients(const ScoreCoefficients& c);
void validate_security(const SecurityParams& sec);

}  // namespace qpv

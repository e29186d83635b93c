#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "qpv/planner.hpp"
#include "qpv/rng.hpp"

namespace qpv {

// Publicly agreed basis-selection function f: {0,1}^n -> {0,1}.
//
// Explicit keeps the full truth table in memory and is capped at n = 30
// (2^30 bits = 128 MiB); beyond that use Keyed, which evaluates a keyed
// pseudorandom bit on demand and stands in for a table too large to store.
// ConstantZero pins f to 0 for tests that need a known basis.
class BooleanFunction {
 public:
  enum class Backend { Explicit, Keyed, ConstantZero };

  BooleanFunction(int input_bits, std::uint64_t seed, Backend backend);

  int eval(std::uint64_t input) const;  // input < 2^input_bits

  int input_bits() const { return input_bits_; }
  std::uint64_t seed() const { return seed_; }
  Backend backend() const { return backend_; }

  // Fraction of inputs mapped to 1; enumerates the table, Explicit only.
  double ones_fraction() const;

 private:
  int input_bits_;
  std::uint64_t seed_;
  Backend backend_;
  std::vector<std::uint64_t> table_;  // Explicit: 2^n bits
};

// One round's classical challenge: half the input bits from each verifier,
// the basis bit b = f(s1 || s2), and the credential c encoded in that basis.
struct Challenge {
  std::uint64_t s1;
  std::uint64_t s2;
  int basis;
  int credential;
};

enum class Response : std::uint8_t { Zero = 0, One = 1, NoResponse = 2 };

enum class PhotonClass : int { Vacuum = 0, Single = 1, Multi = 2 };

struct RoundTally {
  std::int64_t n_correct = 0;
  std::int64_t n_incorrect = 0;
  std::int64_t n_no_response = 0;

  RoundTally& operator+=(const RoundTally& o) {
    n_correct += o.n_correct;
    n_incorrect += o.n_incorrect;
    n_no_response += o.n_no_response;
    return *this;
  }
  friend RoundTally operator+(RoundTally a, const RoundTally& b) { return a += b; }
  friend bool operator==(const RoundTally&, const RoundTally&) = default;

  std::int64_t rounds() const { return n_correct + n_incorrect + n_no_response; }
};

double score_tally(const RoundTally& t, const ScoreCoefficients& c);

// Prover models. Adversaries answer both verifiers identically (consistent
// responses); the mismatch penalty enters only through the threshold's
// mismatch round cap.
struct HonestProver {};

// Knows the photon class (granted a God's-eye view; vacuum rounds carry no
// credential information anyway) and gambles a uniform credential on its
// first `responses` vacuum rounds, staying silent otherwise.
struct VacuumResponder {
  std::int64_t responses;
};

// Measures every pulse in a uniformly guessed basis behind its own
// threshold detector with efficiency det_eff. Detected + right basis reads
// the credential; detected + wrong basis yields a uniform outcome; correct
// with probability 3/4 overall on detected rounds.
struct InterceptResend {
  double det_eff;
};

// Class-aware combination: multi-photon rounds answered perfectly,
// single-photon rounds intercept-resent, vacuum rounds gambled like
// VacuumResponder.
struct CompositeAdversary {
  double det_eff;
  std::int64_t vacuum_responses;
};

using SessionRole =
    std::variant<HonestProver, VacuumResponder, InterceptResend, CompositeAdversary>;

// Round-order state for strategies with budgets.
struct AdversaryState {
  std::int64_t vacuum_emitted = 0;
};

// Draws s1, s2 and the credential uniformly; basis from f. Consumes two
// 64-bit draws (input word, credential bit) in that order.
Challenge make_challenge(const BooleanFunction& f, Rng& rng);

// Response for a known photon number k: threshold detection through
// channel.eta, then the credential flipped with probability p_e.
Response honest_response_given_photons(const Challenge& ch, std::int64_t k,
                                       const ChannelModel& channel, Rng& rng);

// Same, sampling k ~ Poisson(mu) internally.
Response honest_prover_respond(const Challenge& ch, double mu,
                               const ChannelModel& channel, Rng& rng);

Response adversary_respond(const SessionRole& role, const Challenge& ch,
                           std::int64_t k, AdversaryState& state, Rng& rng);

struct TrialRecord {
  std::uint64_t seed = 0;
  std::int64_t rounds = 0;
  RoundTally tally;
  std::array<RoundTally, 3> by_class{};  // indexed by PhotonClass
  double score = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

// Everything one round does, exposed so batches of rounds can be replayed
// or distributed: round i always draws from rng.substream(i), so any
// contiguous partition of [0, N) reproduces the same session as long as
// the strategy state is carried across batches in round order.
struct RoundOutcome {
  PhotonClass photon_class;
  Response response;
  int credential;
};
RoundOutcome play_round(std::uint64_t round_index, const Rng& session_rng,
                        const BooleanFunction& f, const ProtocolParams& p,
                        const SessionRole& role, AdversaryState& state);

// Full session: N challenges, responses, tally, score, verdict against the
// recomputed threshold for (N, mu, epsilon, xi). Bit-reproducible for a
// given seed. Per-class sub-tallies always sum to the total tally.
TrialRecord run_session(const ProtocolParams& p, const ScoreCoefficients& c,
                        const BooleanFunction& f, const SessionRole& role,
                        std::uint64_t seed);

// Verdict for an already-scored session; boundary (score == threshold)
// passes.
bool verify(double score, double threshold);

}  // namespace qpv

#include "qpv/protocol.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qpv {

namespace {

constexpr int kExplicitMaxBits = 30;

std::uint64_t stir(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Keyed pseudorandom bit: two mix rounds over (seed, input). Fixed for the
// life of the protocol; both verifiers evaluate it identically.
int keyed_bit(std::uint64_t seed, std::uint64_t input) {
  std::uint64_t z = input ^ (seed + 0x9E3779B97F4A7C15ull);
  z = stir(z);
  z = stir(z + 0xA24BAED4963EE407ull * seed);
  return static_cast<int>(z & 1u);
}

Response bit_response(std::uint64_t bit) {
  return bit ? Response::One : Response::Zero;
}

Response respond_vacuum_budget(std::int64_t budget, AdversaryState& state,
                               Rng& rng) {
  if (state.vacuum_emitted >= budget) return Response::NoResponse;
  ++state.vacuum_emitted;
  return bit_response(rng.next_bits(1));
}

Response respond_intercept(double det_eff, const Challenge& ch,
                           std::int64_t k, Rng& rng) {
  if (!sample_threshold_detection(k, det_eff, rng)) return Response::NoResponse;
  int basis_guess = static_cast<int>(rng.next_bits(1));
  if (basis_guess == ch.basis) return bit_response(ch.credential);
  // Wrong measurement basis: the outcome is uniform.
  return bit_response(rng.next_bits(1));
}

}  // namespace

BooleanFunction::BooleanFunction(int input_bits, std::uint64_t seed,
                                 Backend backend)
    : input_bits_(input_bits), seed_(seed), backend_(backend) {
  if (input_bits < 1 || input_bits > 64) {
    throw std::domain_error("boolean function input_bits must be in [1, 64]");
  }
  if (backend == Backend::Explicit) {
    if (input_bits > kExplicitMaxBits) {
      throw std::domain_error(
          "explicit truth table capped at 30 input bits; use the keyed "
          "backend for wider inputs");
    }
    std::uint64_t entries = 1ull << input_bits;
    std::size_t words = static_cast<std::size_t>((entries + 63) / 64);
    table_.resize(words);
    Rng rng(seed);
    for (auto& w : table_) w = rng.next_u64();
    // Mask bits beyond 2^n so table enumeration sees only the domain.
    if (entries % 64 != 0) {
      table_.back() &= (1ull << (entries % 64)) - 1;
    }
  }
}

int BooleanFunction::eval(std::uint64_t input) const {
  if (input_bits_ < 64 && input >= (1ull << input_bits_)) {
    throw std::domain_error("boolean function input wider than input_bits");
  }
  switch (backend_) {
    case Backend::Explicit:
      return static_cast<int>((table_[input >> 6] >> (input & 63u)) & 1u);
    case Backend::Keyed:
      return keyed_bit(seed_, input);
    case Backend::ConstantZero:
      return 0;
  }
  throw std::logic_error("unreachable boolean backend");
}

double BooleanFunction::ones_fraction() const {
  if (backend_ == Backend::ConstantZero) return 0.0;
  if (backend_ != Backend::Explicit) {
    throw std::domain_error("ones_fraction requires an enumerable table");
  }
  std::int64_t ones = 0;
  for (std::uint64_t w : table_) ones += std::popcount(w);
  return static_cast<double>(ones) /
         static_cast<double>(1ull << input_bits_);
}

double score_tally(const RoundTally& t, const ScoreCoefficients& c) {
  validate_coefficients(c);
  return c.gamma_c * static_cast<double>(t.n_correct) -
         c.gamma_perp * static_cast<double>(t.n_no_response) -
         c.gamma_i * static_cast<double>(t.n_incorrect);
}

Challenge make_challenge(const BooleanFunction& f, Rng& rng) {
  int n = f.input_bits();
  if (n % 2 != 0) {
    throw std::domain_error("challenge input width must be even");
  }
  std::uint64_t word = rng.next_bits(n);
  int half = n / 2;  // half <= 32, so the mask shift is always valid
  Challenge ch;
  ch.s1 = word >> half;
  ch.s2 = word & ((1ull << half) - 1);
  ch.basis = f.eval(word);
  ch.credential = static_cast<int>(rng.next_bits(1));
  return ch;
}

Response honest_response_given_photons(const Challenge& ch, std::int64_t k,
                                       const ChannelModel& channel, Rng& rng) {
  if (!sample_threshold_detection(k, channel.eta, rng)) {
    return Response::NoResponse;
  }
  bool flip = rng.next_bernoulli(channel.p_e);
  return bit_response(static_cast<std::uint64_t>(ch.credential ^ (flip ? 1 : 0)));
}

Response honest_prover_respond(const Challenge& ch, double mu,
                               const ChannelModel& channel, Rng& rng) {
  validate_channel(channel);
  std::int64_t k = sample_photon_number(mu, rng);
  return honest_response_given_photons(ch, k, channel, rng);
}

Response adversary_respond(const SessionRole& role, const Challenge& ch,
                           std::int64_t k, AdversaryState& state, Rng& rng) {
  if (k < 0) throw std::domain_error("photon number k must be >= 0");
  return std::visit(
      [&](const auto& r) -> Response {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, HonestProver>) {
          throw std::domain_error("honest prover is not an adversary strategy");
        } else if constexpr (std::is_same_v<T, VacuumResponder>) {
          if (k != 0) return Response::NoResponse;
          return respond_vacuum_budget(r.responses, state, rng);
        } else if constexpr (std::is_same_v<T, InterceptResend>) {
          return respond_intercept(r.det_eff, ch, k, rng);
        } else {
          if (k >= 2) return bit_response(ch.credential);
          if (k == 1) return respond_intercept(r.det_eff, ch, k, rng);
          return respond_vacuum_budget(r.vacuum_responses, state, rng);
        }
      },
      role);
}

RoundOutcome play_round(std::uint64_t round_index, const Rng& session_rng,
                        const BooleanFunction& f, const ProtocolParams& p,
                        const SessionRole& role, AdversaryState& state) {
  Rng rng = session_rng.substream(round_index);
  Challenge ch = make_challenge(f, rng);
  std::int64_t k = sample_photon_number(p.mu, rng);
  Response resp;
  if (std::holds_alternative<HonestProver>(role)) {
    resp = honest_response_given_photons(ch, k, p.channel, rng);
  } else {
    resp = adversary_respond(role, ch, k, state, rng);
  }
  PhotonClass cls = k == 0   ? PhotonClass::Vacuum
                    : k == 1 ? PhotonClass::Single
                             : PhotonClass::Multi;
  return {cls, resp, ch.credential};
}

TrialRecord run_session(const ProtocolParams& p, const ScoreCoefficients& c,
                        const BooleanFunction& f, const SessionRole& role,
                        std::uint64_t seed) {
  validate_params(p);
  validate_coefficients(c);
  if (f.input_bits() != p.input_bits) {
    throw std::domain_error("boolean function width does not match input_bits");
  }

  ThresholdReport th = threshold(p.rounds, p.mu, c, p.security);
  Rng session_rng(seed);
  AdversaryState state;

  TrialRecord rec;
  rec.seed = seed;
  rec.rounds = p.rounds;
  for (std::int64_t i = 0; i < p.rounds; ++i) {
    RoundOutcome out =
        play_round(static_cast<std::uint64_t>(i), session_rng, f, p, role, state);
    RoundTally& cls = rec.by_class[static_cast<int>(out.photon_class)];
    if (out.response == Response::NoResponse) {
      ++cls.n_no_response;
    } else if (static_cast<int>(out.response) == out.credential) {
      ++cls.n_correct;
    } else {
      ++cls.n_incorrect;
    }
  }
  rec.tally = rec.by_class[0] + rec.by_class[1] + rec.by_class[2];
  rec.score = score_tally(rec.tally, c);
  rec.threshold = th.gamma0;
  rec.passed = verify(rec.score, rec.threshold);
  return rec;
}

bool verify(double score, double threshold) { return score >= threshold; }

}  // namespace qpv

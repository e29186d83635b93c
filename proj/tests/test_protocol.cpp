#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "qpv/protocol.hpp"

using namespace qpv;

namespace {

const ScoreCoefficients kCoeffs{0.04275, 0.05019, 1.0};

ProtocolParams reference_params(std::int64_t rounds) {
  return {rounds, 40, 0.52, {0.70, 0.003}, {1e-10, 1e-3}, 2e6};
}

// Reference SplitMix64, written out here so the table test does not lean
// on the production generator.
struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

}  // namespace

TEST_CASE("explicit table is the seed's word stream") {
  const int n = 10;
  BooleanFunction f(n, 123, BooleanFunction::Backend::Explicit);
  SplitMix ref{123};
  std::vector<std::uint64_t> words(1 << (n - 6));
  for (auto& w : words) w = ref.next();
  for (std::uint64_t x = 0; x < (1u << n); ++x) {
    int expected = static_cast<int>((words[x >> 6] >> (x & 63u)) & 1u);
    CAPTURE(x);
    REQUIRE(f.eval(x) == expected);
  }
}

TEST_CASE("explicit table is balanced") {
  BooleanFunction f(20, 42, BooleanFunction::Backend::Explicit);
  double q = f.ones_fraction();
  double tol = 5.0 * 0.5 / std::sqrt(static_cast<double>(1 << 20));
  CAPTURE(q);
  CHECK(std::fabs(q - 0.5) < tol);
}

TEST_CASE("explicit backend is capped and points at the keyed one") {
  CHECK_NOTHROW(BooleanFunction(30, 1, BooleanFunction::Backend::Explicit));
  try {
    BooleanFunction f(31, 1, BooleanFunction::Backend::Explicit);
    FAIL("expected a domain_error");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("keyed") != std::string::npos);
  }
}

TEST_CASE("eval rejects inputs wider than the domain") {
  BooleanFunction f(20, 7, BooleanFunction::Backend::Explicit);
  CHECK_THROWS_AS(f.eval(1ull << 20), std::domain_error);
  BooleanFunction k(40, 7, BooleanFunction::Backend::Keyed);
  CHECK_THROWS_AS(k.eval(1ull << 40), std::domain_error);
}

TEST_CASE("keyed backend is deterministic and seed-sensitive") {
  BooleanFunction a(40, 5, BooleanFunction::Backend::Keyed);
  BooleanFunction b(40, 5, BooleanFunction::Backend::Keyed);
  BooleanFunction c(40, 6, BooleanFunction::Backend::Keyed);
  int diff = 0, ones = 0;
  for (std::uint64_t x = 0; x < 4096; ++x) {
    REQUIRE(a.eval(x) == b.eval(x));
    diff += (a.eval(x) != c.eval(x));
    ones += a.eval(x);
  }
  CHECK(diff > 0);
  double q = static_cast<double>(ones) / 4096.0;
  double tol = 5.0 * 0.5 / std::sqrt(4096.0);
  CAPTURE(q);
  CHECK(std::fabs(q - 0.5) < tol);
  CHECK_THROWS_AS(a.ones_fraction(), std::domain_error);
}

TEST_CASE("constant-zero backend") {
  BooleanFunction f(40, 9, BooleanFunction::Backend::ConstantZero);
  for (std::uint64_t x : {0ull, 1ull, 999ull, (1ull << 40) - 1}) {
    CHECK(f.eval(x) == 0);
  }
  CHECK(f.ones_fraction() == 0.0);
}

TEST_CASE("challenge consumes the input word then the credential bit") {
  BooleanFunction f(20, 11, BooleanFunction::Backend::Explicit);
  Rng a(555), b(555);
  Challenge ch = make_challenge(f, a);
  std::uint64_t word = b.next_bits(20);
  std::uint64_t cred = b.next_bits(1);
  CHECK(ch.s1 == word >> 10);
  CHECK(ch.s2 == (word & 1023u));
  CHECK(ch.basis == f.eval(word));
  CHECK(ch.credential == static_cast<int>(cred));
}

TEST_CASE("challenge statistics match the table") {
  BooleanFunction f(20, 42, BooleanFunction::Backend::Explicit);
  double q = f.ones_fraction();
  Rng rng(2718);
  const int n = 100000;
  int basis_ones = 0, cred_ones = 0;
  for (int i = 0; i < n; ++i) {
    Challenge ch = make_challenge(f, rng);
    REQUIRE(ch.s1 < (1u << 10));
    REQUIRE(ch.s2 < (1u << 10));
    basis_ones += ch.basis;
    cred_ones += ch.credential;
  }
  double basis_freq = static_cast<double>(basis_ones) / n;
  double cred_freq = static_cast<double>(cred_ones) / n;
  double tol = 5.0 * std::sqrt(0.25 / n);
  CAPTURE(basis_freq);
  CAPTURE(cred_freq);
  CHECK(std::fabs(basis_freq - q) < tol);
  CHECK(std::fabs(cred_freq - 0.5) < tol);
}

TEST_CASE("odd challenge width is rejected") {
  BooleanFunction f(21, 3, BooleanFunction::Backend::Explicit);
  Rng rng(1);
  CHECK_THROWS_AS(make_challenge(f, rng), std::domain_error);
}

TEST_CASE("honest response with a perfect channel") {
  Challenge ch{0, 0, 0, 1};
  ChannelModel perfect{1.0, 0.0};
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    CHECK(honest_response_given_photons(ch, 0, perfect, rng) ==
          Response::NoResponse);
    CHECK(honest_response_given_photons(ch, 1, perfect, rng) == Response::One);
    CHECK(honest_response_given_photons(ch, 3, perfect, rng) == Response::One);
  }
  ChannelModel flipping{1.0, 0.5};
  // p_e = 0.5 is the largest admissible readout error; responses split.
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    ones += (honest_response_given_photons(ch, 1, flipping, rng) == Response::One);
  }
  double freq = static_cast<double>(ones) / n;
  CHECK(std::fabs(freq - 0.5) < 5.0 * std::sqrt(0.25 / n));

  ChannelModel blind{0.0, 0.0};
  CHECK(honest_response_given_photons(ch, 5, blind, rng) == Response::NoResponse);
}

TEST_CASE("bright-pulse response rate approaches one") {
  Challenge ch{0, 0, 0, 0};
  ChannelModel perfect{1.0, 0.0};
  Rng rng(77);
  const int n = 20000;
  int responded = 0;
  for (int i = 0; i < n; ++i) {
    responded += (honest_prover_respond(ch, 10.0, perfect, rng) ==
                  Response::Zero);
  }
  double freq = static_cast<double>(responded) / n;
  double expected = 1.0 - std::exp(-10.0);
  double tol = 5.0 * std::sqrt(expected * (1.0 - expected) / n);
  CAPTURE(freq);
  CHECK(freq >= expected - tol);
}

TEST_CASE("intercept-resend is 3/4 correct on detected single photons") {
  BooleanFunction f(20, 42, BooleanFunction::Backend::Explicit);
  SessionRole role = InterceptResend{1.0};
  AdversaryState state;
  Rng rng(31337);
  const int n = 20000;
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    Challenge ch = make_challenge(f, rng);
    Response r = adversary_respond(role, ch, 1, state, rng);
    REQUIRE(r != Response::NoResponse);
    correct += (static_cast<int>(r) == ch.credential);
  }
  double freq = static_cast<double>(correct) / n;
  double tol = 5.0 * std::sqrt(0.75 * 0.25 / n);
  CAPTURE(freq);
  CHECK(std::fabs(freq - 0.75) < tol);
}

TEST_CASE("intercept-resend with a dead detector stays silent") {
  SessionRole role = InterceptResend{0.0};
  AdversaryState state;
  Rng rng(5);
  Challenge ch{1, 2, 0, 1};
  for (int i = 0; i < 50; ++i) {
    CHECK(adversary_respond(role, ch, 3, state, rng) == Response::NoResponse);
  }
}

TEST_CASE("vacuum responder spends its budget on vacuum rounds only") {
  SessionRole role = VacuumResponder{3};
  AdversaryState state;
  Rng rng(17);
  Challenge ch{0, 0, 0, 1};
  // Photon-carrying rounds never draw from the budget.
  for (int i = 0; i < 5; ++i) {
    CHECK(adversary_respond(role, ch, 1 + i % 3, state, rng) ==
          Response::NoResponse);
  }
  int answered = 0;
  for (int i = 0; i < 10; ++i) {
    answered += (adversary_respond(role, ch, 0, state, rng) !=
                 Response::NoResponse);
  }
  CHECK(answered == 3);
  CHECK(state.vacuum_emitted == 3);
}

TEST_CASE("composite adversary answers perfectly on multi-photon rounds") {
  SessionRole role = CompositeAdversary{1.0, 2};
  AdversaryState state;
  Rng rng(23);
  for (int cred : {0, 1}) {
    Challenge ch{0, 0, 1, cred};
    for (std::int64_t k : {std::int64_t{2}, std::int64_t{5}}) {
      CHECK(adversary_respond(role, ch, k, state, rng) ==
            (cred ? Response::One : Response::Zero));
    }
  }
  CHECK(state.vacuum_emitted == 0);
  // Vacuum rounds still burn the shared budget.
  Challenge ch{0, 0, 0, 1};
  int answered = 0;
  for (int i = 0; i < 6; ++i) {
    answered += (adversary_respond(role, ch, 0, state, rng) !=
                 Response::NoResponse);
  }
  CHECK(answered == 2);
}

TEST_CASE("the honest prover is not an adversary strategy") {
  SessionRole role = HonestProver{};
  AdversaryState state;
  Rng rng(1);
  Challenge ch{0, 0, 0, 0};
  CHECK_THROWS_AS(adversary_respond(role, ch, 1, state, rng), std::domain_error);
  SessionRole v = VacuumResponder{1};
  CHECK_THROWS_AS(adversary_respond(v, ch, -1, state, rng), std::domain_error);
}

TEST_CASE("sessions are bit-reproducible") {
  ProtocolParams p = reference_params(10000);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  for (SessionRole role :
       {SessionRole{HonestProver{}}, SessionRole{CompositeAdversary{1.0, 28}}}) {
    TrialRecord a = run_session(p, kCoeffs, f, role, 99);
    TrialRecord b = run_session(p, kCoeffs, f, role, 99);
    CHECK(a.tally == b.tally);
    for (int i = 0; i < 3; ++i) CHECK(a.by_class[i] == b.by_class[i]);
    CHECK(a.score == b.score);
    CHECK(a.threshold == b.threshold);
    CHECK(a.passed == b.passed);
  }
}

TEST_CASE("round batching does not change the outcome") {
  // Replaying the same session as two contiguous batches with carried
  // strategy state must reproduce run_session exactly.
  ProtocolParams p = reference_params(10000);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  SessionRole role = CompositeAdversary{1.0, 28};
  TrialRecord whole = run_session(p, kCoeffs, f, role, 4242);

  Rng session_rng(4242);
  AdversaryState state;
  RoundTally by_class[3];
  const std::int64_t split = 3777;
  for (std::int64_t i = 0; i < split; ++i) {
    RoundOutcome out = play_round(i, session_rng, f, p, role, state);
    RoundTally& cls = by_class[static_cast<int>(out.photon_class)];
    if (out.response == Response::NoResponse) ++cls.n_no_response;
    else if (static_cast<int>(out.response) == out.credential) ++cls.n_correct;
    else ++cls.n_incorrect;
  }
  for (std::int64_t i = split; i < p.rounds; ++i) {
    RoundOutcome out = play_round(i, session_rng, f, p, role, state);
    RoundTally& cls = by_class[static_cast<int>(out.photon_class)];
    if (out.response == Response::NoResponse) ++cls.n_no_response;
    else if (static_cast<int>(out.response) == out.credential) ++cls.n_correct;
    else ++cls.n_incorrect;
  }
  for (int i = 0; i < 3; ++i) CHECK(by_class[i] == whole.by_class[i]);
}

TEST_CASE("per-class tallies always sum to the total") {
  ProtocolParams p = reference_params(20000);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  TrialRecord rec = run_session(p, kCoeffs, f, HonestProver{}, 12);
  CHECK(rec.by_class[0] + rec.by_class[1] + rec.by_class[2] == rec.tally);
  CHECK(rec.tally.rounds() == p.rounds);
}

TEST_CASE("tally aggregation is exact and scoring is linear to rounding") {
  RoundTally a{1000, 3, 2000};
  RoundTally b{304193, 915, 694891};
  RoundTally sum = a + b;
  CHECK(sum.n_correct == 305193);
  double split = score_tally(a, kCoeffs) + score_tally(b, kCoeffs);
  double joint = score_tally(sum, kCoeffs);
  CHECK(std::fabs(split - joint) <= 1e-12 * (std::fabs(joint) + 1.0));
}

TEST_CASE("an empty session cannot pass") {
  ProtocolParams p = reference_params(0);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  TrialRecord rec = run_session(p, kCoeffs, f, HonestProver{}, 1);
  CHECK(rec.tally.rounds() == 0);
  CHECK(rec.score == 0.0);
  CHECK(rec.threshold == doctest::Approx(24.010206).epsilon(1e-6));
  CHECK_FALSE(rec.passed);
}

TEST_CASE("session rejects a mismatched function width") {
  ProtocolParams p = reference_params(10);
  BooleanFunction f(20, 1, BooleanFunction::Backend::Keyed);
  CHECK_THROWS_AS(run_session(p, kCoeffs, f, HonestProver{}, 1),
                  std::domain_error);
}

TEST_CASE("honest million-round sessions match expectation but miss the cut") {
  // At N = 1e6 the expected score sits 40 sigma below the certified
  // threshold; honesty is not enough at this session length.
  ProtocolParams p = reference_params(1000000);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  const double expected_score = -22787.6;
  const double score_sigma = 52.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    TrialRecord rec = run_session(p, kCoeffs, f, HonestProver{}, seed);
    CAPTURE(seed);
    CAPTURE(rec.score);
    CHECK(std::fabs(rec.score - expected_score) < 5.0 * score_sigma);
    CHECK(rec.threshold == doctest::Approx(-20667.23).epsilon(1e-5));
    CHECK_FALSE(rec.passed);

    // Class populations at 5 sigma.
    double probs[3] = {std::exp(-0.52), 0.52 * std::exp(-0.52), 0.0};
    probs[2] = 1.0 - probs[0] - probs[1];
    for (int cls = 0; cls < 3; ++cls) {
      double n = static_cast<double>(rec.by_class[cls].rounds());
      double mean = 1e6 * probs[cls];
      double tol = 5.0 * std::sqrt(1e6 * probs[cls] * (1.0 - probs[cls]));
      CAPTURE(cls);
      CHECK(std::fabs(n - mean) < tol);
    }
  }
}

TEST_CASE("honest sessions pass once the margin turns positive") {
  // Margin at N = 4e6 is +2449 with score sigma ~104: passing is a 23
  // sigma certainty.
  ProtocolParams p = reference_params(4000000);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  for (std::uint64_t seed : {1u, 2u}) {
    TrialRecord rec = run_session(p, kCoeffs, f, HonestProver{}, seed);
    CAPTURE(seed);
    CAPTURE(rec.score);
    CAPTURE(rec.threshold);
    CHECK(rec.passed);
  }
}

TEST_CASE("composite adversary scores its analytic expectation and fails") {
  ProtocolParams p = reference_params(1000000);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  TrialRecord rec =
      run_session(p, kCoeffs, f, CompositeAdversary{1.0, 28}, 7);
  // Per round: multi answered perfectly, singles intercept-resent, vacuum
  // silent beyond the budget.
  const double expected = -93096.5;
  const double sigma = 265.93;
  CAPTURE(rec.score);
  CHECK(std::fabs(rec.score - expected) < 5.0 * sigma);
  CHECK_FALSE(rec.passed);
}

TEST_CASE("intercept-resend scores its analytic expectation and fails") {
  ProtocolParams p = reference_params(1000000);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  TrialRecord rec = run_session(p, kCoeffs, f, InterceptResend{1.0}, 7);
  const double expected = -118208.2;
  const double sigma = 299.08;
  CAPTURE(rec.score);
  CHECK(std::fabs(rec.score - expected) < 5.0 * sigma);
  CHECK_FALSE(rec.passed);
}

TEST_CASE("vacuum responder scores its analytic expectation and fails") {
  ProtocolParams p = reference_params(1000000);
  BooleanFunction f(40, 1, BooleanFunction::Backend::Keyed);
  TrialRecord rec = run_session(p, kCoeffs, f, VacuumResponder{28}, 7);
  // 28 fifty-fifty gambles, silence everywhere else.
  double expected = 28.0 * 0.5 * (kCoeffs.gamma_c - kCoeffs.gamma_i) -
                    kCoeffs.gamma_perp * (1e6 - 28.0);
  CAPTURE(rec.score);
  CHECK(std::fabs(rec.score - expected) < 14.0);
  CHECK_FALSE(rec.passed);
  CHECK(rec.by_class[0].n_correct + rec.by_class[0].n_incorrect == 28);
  CHECK(rec.by_class[1].n_correct == 0);
  CHECK(rec.by_class[2].n_correct == 0);

  // The realized vacuum-class score respects the certified vacuum bound.
  double n0 = static_cast<double>(rec.by_class[0].rounds());
  double vac_score = score_tally(rec.by_class[0], kCoeffs);
  CHECK(vac_score <=
        vacuum_score_upper(n0, kCoeffs, p.security.epsilon).value + 1e-9);
}

TEST_CASE("boundary scores pass") {
  CHECK(verify(-20667.23, -20667.23));
  CHECK(verify(-20667.22, -20667.23));
  CHECK_FALSE(verify(-20667.24, -20667.23));
}

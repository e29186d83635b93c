#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "qpv/rng.hpp"

using qpv::Rng;

TEST_CASE("same seed reproduces the same stream") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += (a.next_u64() == b.next_u64());
  CHECK(equal == 0);
}

TEST_CASE("substreams depend on the construction seed, not the state") {
  Rng parent(777);
  Rng before = parent.substream(5);
  for (int i = 0; i < 100; ++i) parent.next_u64();
  Rng after = parent.substream(5);
  for (int i = 0; i < 100; ++i) CHECK(before.next_u64() == after.next_u64());
}

TEST_CASE("distinct substream indices give distinct streams") {
  Rng parent(777);
  Rng s0 = parent.substream(0);
  Rng s1 = parent.substream(1);
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += (s0.next_u64() == s1.next_u64());
  CHECK(equal == 0);
}

TEST_CASE("next_unit lies in [0, 1) and has the uniform mean") {
  Rng rng(9);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = rng.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  double mean = sum / n;
  double tol = 5.0 * std::sqrt(1.0 / 12.0 / n);
  CAPTURE(mean);
  CAPTURE(tol);
  CHECK(std::abs(mean - 0.5) < tol);
}

TEST_CASE("bernoulli frequency matches p at 5 sigma") {
  Rng rng(11);
  const int n = 100000;
  const double p = 0.3051;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += rng.next_bernoulli(p);
  double freq = static_cast<double>(hits) / n;
  double tol = 5.0 * std::sqrt(p * (1.0 - p) / n);
  CAPTURE(freq);
  CAPTURE(tol);
  CHECK(std::abs(freq - p) < tol);
}

TEST_CASE("bernoulli consumes one draw regardless of p") {
  Rng a(4242), b(4242), c(4242);
  a.next_bernoulli(0.0);
  b.next_bernoulli(1.0);
  c.next_bernoulli(0.5);
  std::uint64_t wa = a.next_u64(), wb = b.next_u64(), wc = c.next_u64();
  CHECK(wa == wb);
  CHECK(wb == wc);
}

TEST_CASE("next_bits yields the requested width") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.next_bits(1) <= 1u);
    CHECK(rng.next_bits(20) < (1ull << 20));
    CHECK(rng.next_bits(40) < (1ull << 40));
  }
  // Width 64 must not shift by 64 (undefined); it returns the raw word.
  Rng x(99), y(99);
  CHECK(x.next_bits(64) == y.next_u64());
}

TEST_CASE("single-bit draws are balanced at 5 sigma") {
  Rng rng(31);
  const int n = 100000;
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += static_cast<int>(rng.next_bits(1));
  double freq = static_cast<double>(ones) / n;
  double tol = 5.0 * 0.5 / std::sqrt(static_cast<double>(n));
  CAPTURE(freq);
  CHECK(std::abs(freq - 0.5) < tol);
}

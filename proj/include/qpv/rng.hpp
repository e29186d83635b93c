#pragma once

#include <cstdint>

namespace qpv {

// Deterministic generator for all Monte Carlo draws. SplitMix64 core with
// O(1) substream derivation, so a session can hand every round its own
// stream keyed by round index and produce identical results regardless of
// how rounds are batched across workers.
//
// Substreams derive from the construction seed, not the current state:
// substream(i) is the same generator whether requested before or after
// draws on the parent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Always consumes exactly one draw, so stream positions stay aligned
  // across parameter choices (including p = 0 and p = 1).
  bool next_bernoulli(double p) { return next_unit() < p; }

  // Low `bits` uniform bits, bits in [1, 64].
  std::uint64_t next_bits(int bits) {
    std::uint64_t raw = next_u64();
    return bits >= 64 ? raw : raw >> (64 - bits);
  }

  Rng substream(std::uint64_t index) const {
    return Rng(mix(seed_ ^ (0xA24BAED4963EE407ull * (index + 1))));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace qpv

#pragma once

#include <cstdint>

#include "qpv/rng.hpp"

namespace qpv {

// Phase-randomized coherent pulses are an exact Poisson mixture of photon
// number states, so the source is fully described by its mean photon number
// mu. Everything downstream only distinguishes three classes.
struct ClassProbs {
  double vacuum;   // k = 0
  double single;   // k = 1
  double multi;    // k >= 2
};

// Lumped transmission-and-detector model for the honest prover's arm.
struct ChannelModel {
  double eta;  // end-to-end detection efficiency, in [0, 1]
  double p_e;  // basis-matched readout error probability, in [0, 0.5]
};

// Probabilities (e^-mu, mu e^-mu, 1 - e^-mu - mu e^-mu). mu >= 0, finite;
// throws std::domain_error otherwise.
ClassProbs poisson_class_probs(double mu);

// Exact Poisson sample by CDF inversion. Large means are split into
// sub-means below the e^-mu underflow range and summed, which is exact by
// Poisson additivity; no normal approximation anywhere.
std::int64_t sample_photon_number(double mu, Rng& rng);

// P(threshold detector fires) for a pulse of mean mu through efficiency
// eta: 1 - e^(-eta mu), the Poisson expectation of 1 - (1-eta)^k.
double detection_prob(double mu, double eta);

// One detection draw for a known photon number k: fires with probability
// 1 - (1-eta)^k (each photon survives independently with probability eta,
// a threshold detector needs at least one).
bool sample_threshold_detection(std::int64_t k, double eta, Rng& rng);

void validate_channel(const ChannelModel& channel);

}  // namespace qpv

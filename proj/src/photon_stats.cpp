#include "qpv/photon_stats.hpp"

#include <cmath>
#include <stdexcept>

namespace qpv {

namespace {

void require_intensity(double mu) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw std::domain_error("intensity mu must be finite and >= 0");
  }
}

void require_efficiency(double eta) {
  if (!std::isfinite(eta) || eta < 0.0 || eta > 1.0) {
    throw std::domain_error("efficiency eta must be in [0, 1]");
  }
}

// Inversion on the Poisson CDF; one uniform per draw. Only called with
// mean small enough that e^-mean stays normal.
std::int64_t sample_poisson_small(double mean, Rng& rng) {
  double u = rng.next_unit();
  double p = std::exp(-mean);
  double cdf = p;
  std::int64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    // Guard against u landing in the last ulp of the tail.
    if (p < 1e-300 && u >= cdf) return k;
  }
  return k;
}

constexpr double kChunkMean = 16.0;

}  // namespace

ClassProbs poisson_class_probs(double mu) {
  require_intensity(mu);
  double p0 = std::exp(-mu);
  double p1 = mu * p0;
  // expm1 keeps the multi-photon mass accurate when mu is tiny and the
  // three terms cancel to O(mu^2).
  double p2 = -std::expm1(-mu) - p1;
  if (p2 < 0.0) p2 = 0.0;
  return {p0, p1, p2};
}

std::int64_t sample_photon_number(double mu, Rng& rng) {
  require_intensity(mu);
  if (mu == 0.0) return 0;
  if (mu <= kChunkMean) return sample_poisson_small(mu, rng);
  // Poisson(a + b) = Poisson(a) + Poisson(b): split large means into
  // chunks the small sampler handles exactly.
  auto chunks = static_cast<std::int64_t>(std::ceil(mu / kChunkMean));
  double per = mu / static_cast<double>(chunks);
  std::int64_t total = 0;
  for (std::int64_t i = 0; i < chunks; ++i) {
    total += sample_poisson_small(per, rng);
  }
  return total;
}

double detection_prob(double mu, double eta) {
  require_intensity(mu);
  require_efficiency(eta);
  return -std::expm1(-eta * mu);
}

bool sample_threshold_detection(std::int64_t k, double eta, Rng& rng) {
  if (k < 0) throw std::domain_error("photon number k must be >= 0");
  require_efficiency(eta);
  double miss = std::pow(1.0 - eta, static_cast<double>(k));
  return rng.next_bernoulli(1.0 - miss);
}

void validate_channel(const ChannelModel& channel) {
  require_efficiency(channel.eta);
  if (!std::isfinite(channel.p_e) || channel.p_e < 0.0 || channel.p_e > 0.5) {
    throw std::domain_error("readout error p_e must be in [0, 0.5]");
  }
}

}  // namespace qpv

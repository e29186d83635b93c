#include "qpv/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace qpv {

namespace {

constexpr double kGridStep = 0.01;
constexpr double kMuDomainHi = 5.0;

double margin_at(double mu, const ProtocolParams& fixed,
                 const ScoreCoefficients& c) {
  ProtocolParams p = fixed;
  p.mu = mu;
  ThresholdReport t = threshold(p.rounds, mu, c, p.security);
  return honest_expected_score(p, c) - t.gamma0;
}

}  // namespace

void validate_params(const ProtocolParams& p) {
  if (p.rounds < 0) throw std::domain_error("rounds must be >= 0");
  if (p.input_bits < 2 || p.input_bits > 64 || p.input_bits % 2 != 0) {
    throw std::domain_error("input_bits must be even and in [2, 64]");
  }
  if (!std::isfinite(p.mu) || p.mu < 0.0) {
    throw std::domain_error("intensity mu must be finite and >= 0");
  }
  validate_channel(p.channel);
  validate_security(p.security);
  if (!std::isfinite(p.rep_rate_hz) || p.rep_rate_hz <= 0.0) {
    throw std::domain_error("rep_rate_hz must be finite and > 0");
  }
}

double honest_expected_score(const ProtocolParams& p,
                             const ScoreCoefficients& c) {
  validate_params(p);
  validate_coefficients(c);
  double d = detection_prob(p.mu, p.channel.eta);
  double n = static_cast<double>(p.rounds);
  return n * (c.gamma_c * d * (1.0 - p.channel.p_e) - c.gamma_perp * (1.0 - d) -
              c.gamma_i * d * p.channel.p_e);
}

ExpectedTally honest_expected_tally(const ProtocolParams& p) {
  validate_params(p);
  double d = detection_prob(p.mu, p.channel.eta);
  double n = static_cast<double>(p.rounds);
  return {n * d * (1.0 - p.channel.p_e), n * d * p.channel.p_e, n * (1.0 - d)};
}

double expected_tally_score(const ExpectedTally& t,
                            const ScoreCoefficients& c) {
  return c.gamma_c * t.correct - c.gamma_perp * t.no_response -
         c.gamma_i * t.incorrect;
}

PlanResult optimize_mu(const ProtocolParams& fixed, const ScoreCoefficients& c,
                       MuInterval interval, double mu_tol) {
  validate_coefficients(c);
  {
    ProtocolParams probe = fixed;
    probe.mu = 0.0;
    validate_params(probe);
  }
  if (!(interval.lo > 0.0) || !(interval.hi <= kMuDomainHi) ||
      !(interval.lo < interval.hi)) {
    throw std::domain_error("mu search interval must be non-empty and within (0, 5]");
  }
  if (!(mu_tol > 0.0) || !std::isfinite(mu_tol)) {
    throw std::domain_error("mu tolerance must be > 0");
  }

  // Coarse scan; strict improvement keeps the smallest mu on ties.
  double best_mu = interval.lo;
  double best = margin_at(best_mu, fixed, c);
  for (double mu = interval.lo + kGridStep; mu < interval.hi + kGridStep / 2;
       mu += kGridStep) {
    double m = std::min(mu, interval.hi);
    double v = margin_at(m, fixed, c);
    if (v > best) {
      best = v;
      best_mu = m;
    }
  }

  // Golden-section refinement inside the bracketing grid cell.
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = std::max(interval.lo, best_mu - kGridStep);
  double hi = std::min(interval.hi, best_mu + kGridStep);
  double a = hi - kInvPhi * (hi - lo);
  double b = lo + kInvPhi * (hi - lo);
  double fa = margin_at(a, fixed, c);
  double fb = margin_at(b, fixed, c);
  while (hi - lo > mu_tol) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kInvPhi * (hi - lo);
      fa = margin_at(a, fixed, c);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kInvPhi * (hi - lo);
      fb = margin_at(b, fixed, c);
    }
  }
  double mid = 0.5 * (lo + hi);
  double fm = margin_at(mid, fixed, c);
  if (best > fm) {
    // Keep the grid winner if refinement did not improve on it.
    mid = best_mu;
    fm = best;
  }

  ProtocolParams p = fixed;
  p.mu = mid;
  ThresholdReport t = threshold(p.rounds, mid, c, p.security);
  double honest = honest_expected_score(p, c);
  return {mid, honest, t.gamma0, honest - t.gamma0, honest - t.gamma0 >= 0.0};
}

AttackResource attack_resource_rate(int input_bits, double rep_rate_hz) {
  if (input_bits < 2) throw std::domain_error("input_bits must be >= 2");
  if (!std::isfinite(rep_rate_hz) || rep_rate_hz <= 0.0) {
    throw std::domain_error("rep_rate_hz must be finite and > 0");
  }
  double raw = rep_rate_hz * (static_cast<double>(input_bits) / 4.0 - 5.0);
  return {std::max(0.0, raw), raw > 0.0};
}

}  // namespace qpv

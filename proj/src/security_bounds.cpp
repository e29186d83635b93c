#include "qpv/security_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpv {

namespace {

double log_inv(double epsilon) { return std::log(1.0 / epsilon); }

void require_count(double n, const char* what) {
  if (!std::isfinite(n) || n < 0.0) {
    throw std::domain_error(std::string(what) + " must be finite and >= 0");
  }
}

// One-sided Chernoff upper tail for a Poisson-binomial class count with
// the given mean, inverted at failure probability epsilon.
double chernoff_upper(double mean, double l) {
  return mean + 0.5 * (l + std::sqrt(l * l + 8.0 * l * mean));
}

}  // namespace

void validate_coefficients(const ScoreCoefficients& c) {
  double m = std::max({std::fabs(c.gamma_c), std::fabs(c.gamma_perp),
                       std::fabs(c.gamma_i)});
  if (!std::isfinite(c.gamma_c) || !std::isfinite(c.gamma_perp) ||
      !std::isfinite(c.gamma_i) || m > 1.0) {
    throw std::domain_error(
        "score coefficients must be finite with max |gamma| <= 1");
  }
}

void validate_security(const SecurityParams& sec) {
  if (!(sec.epsilon > 0.0) || !(sec.epsilon < 1.0) || !std::isfinite(sec.epsilon)) {
    throw std::domain_error("epsilon must lie in (0, 1)");
  }
  if (!(sec.xi > 0.0) || !(sec.xi < 1.0) || !std::isfinite(sec.xi)) {
    throw std::domain_error("xi must lie in (0, 1)");
  }
}

double vacuum_score_upper_at(double x, double n0, const ScoreCoefficients& c,
                             double epsilon) {
  validate_coefficients(c);
  validate_security({epsilon, 0.5});
  require_count(n0, "vacuum count n0");
  if (!(x >= 0.0) || x > n0) {
    throw std::domain_error("response count x must lie in [0, n0]");
  }
  double l = log_inv(epsilon);
  return 0.5 * (c.gamma_c - c.gamma_i) * x +
         0.5 * (c.gamma_c + c.gamma_i) * (l + std::sqrt(l * l + 4.0 * l * x)) -
         (n0 - x) * c.gamma_perp;
}

VacuumBound vacuum_score_upper(double n0, const ScoreCoefficients& c,
                               double epsilon) {
  validate_coefficients(c);
  validate_security({epsilon, 0.5});
  require_count(n0, "vacuum count n0");
  double l = log_inv(epsilon);

  double best_x = 0.0;
  double best = vacuum_score_upper_at(0.0, n0, c, epsilon);
  auto consider = [&](double x) {
    double v = vacuum_score_upper_at(x, n0, c, epsilon);
    if (v > best) {
      best = v;
      best_x = x;
    }
  };
  consider(n0);

  // Interior stationary point of a x + b sqrt(l^2 + 4 l x), a < 0 < b:
  // x* = -l/4 + (gamma_c + gamma_i)^2 / (gamma_c - gamma_i + 2 gamma_perp)^2 * l.
  // Other sign combinations have their maximum at an endpoint.
  double denom = c.gamma_c - c.gamma_i + 2.0 * c.gamma_perp;
  if (denom < 0.0 && (c.gamma_c + c.gamma_i) > 0.0) {
    double num = c.gamma_c + c.gamma_i;
    double x_star = -0.25 * l + (num * num) / (denom * denom) * l;
    consider(std::clamp(x_star, 0.0, n0));
  }
  return {best, best_x};
}

std::int64_t mismatch_round_cap(double epsilon, double xi) {
  validate_security({epsilon, xi});
  return static_cast<std::int64_t>(
      std::ceil(std::log(epsilon) / std::log1p(-xi)));
}

double single_photon_score_upper(double n1, const ScoreCoefficients& c,
                                 double epsilon, double xi) {
  validate_coefficients(c);
  validate_security({epsilon, xi});
  require_count(n1, "single-photon count n1");
  double cap = std::min(static_cast<double>(mismatch_round_cap(epsilon, xi)), n1);
  return c.gamma_c * cap +
         std::sqrt(2.0 * log_inv(epsilon) * std::max(0.0, n1 - cap));
}

double multi_photon_score_upper(double n2plus, const ScoreCoefficients& c) {
  validate_coefficients(c);
  require_count(n2plus, "multi-photon count n2plus");
  return n2plus * c.gamma_c;
}

ClassBounds photon_class_bounds(double n_rounds, double mu, double epsilon) {
  require_count(n_rounds, "round count N");
  if (!std::isfinite(mu) || mu < 0.0) {
    throw std::domain_error("intensity mu must be finite and >= 0");
  }
  validate_security({epsilon, 0.5});
  double l = log_inv(epsilon);
  double p0 = std::exp(-mu);
  double p1 = mu * p0;
  double p2 = std::max(0.0, -std::expm1(-mu) - p1);
  double n1u = std::min(chernoff_upper(n_rounds * p1, l), n_rounds);
  double n2u = std::min(chernoff_upper(n_rounds * p2, l), n_rounds);
  double n0l = std::max(0.0, n_rounds - n1u - n2u);
  return {n0l, n1u, n2u};
}

ThresholdReport threshold(std::int64_t n_rounds, double mu,
                          const ScoreCoefficients& c,
                          const SecurityParams& sec) {
  if (n_rounds < 0) throw std::domain_error("round count N must be >= 0");
  validate_coefficients(c);
  validate_security(sec);

  ClassBounds cls =
      photon_class_bounds(static_cast<double>(n_rounds), mu, sec.epsilon);
  VacuumBound vac = vacuum_score_upper(cls.n0_lower, c, sec.epsilon);
  double s1 = single_photon_score_upper(cls.n1_upper, c, sec.epsilon, sec.xi);
  double s2 = multi_photon_score_upper(cls.n2plus_upper, c);

  ThresholdReport r;
  r.s0_upper = vac.value;
  r.s1_upper = s1;
  r.s2plus_upper = s2;
  r.gamma0 = vac.value + s1 + s2;
  r.x_star = vac.x_star;
  r.n_xi = mismatch_round_cap(sec.epsilon, sec.xi);
  // Five tail events, each budgeted epsilon: the two class-count bounds,
  // the vacuum response concentration, the mismatch cap, and the
  // single-photon martingale fluctuation.
  r.total_failure_prob = 5.0 * sec.epsilon;
  r.classes = cls;
  return r;
}

}  // namespace qpv

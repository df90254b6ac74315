#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "aud/distributions.hpp"
#include "aud/error.hpp"
#include "aud/system.hpp"

// Closed-form average age upon decisions (AuD) and update-missing
// probability for FCFS M/G/1 update-and-decide systems.
//
// Notation used in comments: lambda arrival rate, mu service rate, nu decision
// rate, rho = lambda/mu, S service time, T system time, X inter-arrival time,
// Y inter-departure time, G_S / G_T the MGFs of S / T, m0 = nu/mu.

namespace aud::analytic {

/// Utilization window accepted by every closed form.
inline constexpr double kMinRho = 1e-9;
inline constexpr double kMaxRho = 0.999;

/// Relative tolerance when deciding that nu/mu is an integer.
inline constexpr double kIntegerRatioTolerance = 1e-9;

struct AnalyticReport {
  std::string system;  // Kendall tag
  double avg_aud = 0.0;
  double p_mis = 0.0;
  std::map<std::string, double> intermediates;
};

/// Expected decision counts within one inter-departure interval Y_k under
/// periodic decisions. N1: Y_k when update k queued (X_k <= T_{k-1}).
/// N2 / N3: the idle part X_k - T_{k-1} and the service part S_k when it
/// did not (X_k > T_{k-1}).
struct NkMoments {
  double e_n1 = 0.0;
  double e_n1_sq = 0.0;
  double e_n2 = 0.0;
  double e_n2_sq = 0.0;
  double e_n3 = 0.0;
  double e_n3_sq = 0.0;
};

struct ConditionalSystemTime {
  double given_x_le_t = 0.0;  // E[T_{k-1} | X_k <= T_{k-1}]
  double given_x_gt_t = 0.0;  // E[T_{k-1} | X_k >  T_{k-1}]
};

struct InterDepartureMoments {
  double e_y = 0.0;   // E[Y_k]
  double e_y2 = 0.0;  // E[Y_k^2]
  double e_ty = 0.0;  // E[T_{k-1} Y_k]
};

// ---------------------------------------------------------------------------
// Preconditions
// ---------------------------------------------------------------------------

/// Poisson arrivals and rho inside [kMinRho, kMaxRho].
inline void require_analyzable(const SystemSpec& spec) {
  if (!spec.arrival().is_poisson()) {
    throw WrongOperationError("closed forms require Poisson arrivals, got " +
                              spec.kendall());
  }
  const double rho = spec.rho();
  if (rho < kMinRho || rho > kMaxRho) {
    throw ConfigError("rho = " + std::to_string(rho) +
                      " outside the analytic window [1e-9, 0.999] (lambda=" +
                      std::to_string(spec.lambda()) +
                      ", mu=" + std::to_string(spec.mu()) + ")");
  }
}

inline void require_poisson_decisions(const SystemSpec& spec) {
  if (spec.decision().is_periodic()) {
    throw WrongOperationError(spec.kendall() +
                              ": Poisson-decision formula applied to periodic decisions");
  }
}

/// m0 = nu/mu for a periodic-decision system; must be a positive integer.
inline int periodic_multiple(const SystemSpec& spec) {
  if (!spec.decision().is_periodic()) {
    throw WrongOperationError(spec.kendall() +
                              ": periodic-decision formula applied to Poisson decisions");
  }
  const double ratio = spec.nu() / spec.mu();
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > kIntegerRatioTolerance * ratio ||
      rounded > 2e9) {
    throw ConfigError("periodic-decision closed forms need nu/mu to be a positive integer, got " +
                      std::to_string(ratio));
  }
  return static_cast<int>(rounded);
}

// ---------------------------------------------------------------------------
// M/G/1 building blocks
// ---------------------------------------------------------------------------

/// G_T(s) = -s(1-rho)G_S(s) / (-s - lambda + lambda G_S(s)), with G_T(0) = 1.
/// Note that G_T(-lambda) = 1 - rho for every service law.
inline double system_time_mgf(const SystemSpec& spec, double s) {
  require_analyzable(spec);
  if (std::abs(s) <= 1e-12) return 1.0;
  const double lambda = spec.lambda();
  const double gs_minus_one = spec.service().mgf_minus_one(s);
  const double denominator = -s + lambda * gs_minus_one;
  if (std::abs(denominator) < 1e-12) {
    throw NumericalError("system-time MGF denominator vanishes at s = " + std::to_string(s));
  }
  return -s * (1.0 - spec.rho()) * (1.0 + gs_minus_one) / denominator;
}

/// omega = (1-rho)(G_S(-lambda) - 1) / (lambda G_S(-lambda)).
/// Negative on the whole stable range; equals -E[T e^{-lambda T}], i.e. minus
/// the slope of G_T at s = -lambda.
inline double omega(const SystemSpec& spec) {
  require_analyzable(spec);
  const double lambda = spec.lambda();
  const double gm1 = spec.service().mgf_minus_one(-lambda);
  return (1.0 - spec.rho()) * gm1 / (lambda * (1.0 + gm1));
}

/// Pollaczek-Khinchine mean system time.
inline double mean_system_time(const SystemSpec& spec) {
  require_analyzable(spec);
  return spec.service().mean() +
         spec.lambda() * spec.service().second_moment() / (2.0 * (1.0 - spec.rho()));
}

inline ConditionalSystemTime conditional_system_time(const SystemSpec& spec) {
  const double rho = spec.rho();
  const double w = omega(spec);
  return {(mean_system_time(spec) + w) / rho, -w / (1.0 - rho)};
}

/// E[Y], E[Y^2] and E[T_{k-1} Y_k] in closed form.
inline InterDepartureMoments interdeparture_moments(const SystemSpec& spec) {
  require_analyzable(spec);
  const double lambda = spec.lambda();
  const double mu = spec.mu();
  const double s2 = spec.service().second_moment();
  InterDepartureMoments m;
  m.e_y = 1.0 / lambda;
  m.e_y2 = s2 + 2.0 / (lambda * lambda) - 2.0 / (mu * mu);
  m.e_ty = 1.0 / (mu * mu) + lambda * s2 / (2.0 * (mu - lambda)) - omega(spec) / lambda;
  return m;
}

/// Average AuD of a G/G/1 system with Poisson decisions from inter-departure
/// moments: (E[Y^2] + 2E[T_{k-1}Y_k]) / (2E[Y]).
inline double aud_from_moments(double e_y, double e_y2, double e_ty) {
  if (!(e_y > 0.0)) {
    throw DomainError("mean inter-departure time must be positive, got " + std::to_string(e_y));
  }
  return (e_y2 + 2.0 * e_ty) / (2.0 * e_y);
}

// ---------------------------------------------------------------------------
// Poisson decisions (M/G/1/M)
// ---------------------------------------------------------------------------

/// p_mis = G_S(-nu)(rho nu + lambda)/(lambda + nu).
inline double pmis_mg1m(const SystemSpec& spec) {
  require_analyzable(spec);
  require_poisson_decisions(spec);
  const double lambda = spec.lambda();
  const double nu = spec.nu();
  return spec.service().mgf(-nu) * (spec.rho() * nu + lambda) / (lambda + nu);
}

/// General-service average AuD from G_S(-lambda) and E[S^2]; independent of nu.
inline AnalyticReport aud_mg1m(const SystemSpec& spec) {
  require_analyzable(spec);
  require_poisson_decisions(spec);
  const double lambda = spec.lambda();
  const double rho = spec.rho();
  const double s2 = spec.service().second_moment();
  const double w = omega(spec);

  AnalyticReport report;
  report.system = spec.kendall();
  report.avg_aud =
      (lambda * lambda * s2 + 2.0 * (1.0 - rho) * (1.0 - lambda * w)) / (2.0 * lambda * (1.0 - rho));
  report.p_mis = pmis_mg1m(spec);

  const auto moments = interdeparture_moments(spec);
  const auto cond = conditional_system_time(spec);
  auto& im = report.intermediates;
  im["gs_at_minus_lambda"] = spec.service().mgf(-lambda);
  im["gs_at_minus_nu"] = spec.service().mgf(-spec.nu());
  im["omega"] = w;
  im["mean_S2"] = s2;
  im["mean_T"] = mean_system_time(spec);
  im["mean_Y"] = moments.e_y;
  im["mean_Y2"] = moments.e_y2;
  im["mean_TY"] = moments.e_ty;
  im["mean_T_given_X_le_T"] = cond.given_x_le_t;
  im["mean_T_given_X_gt_T"] = cond.given_x_gt_t;
  return report;
}

/// Law-specific closed forms for M/U/1/M, M/M/1/M and M/D/1/M. Evaluated
/// independently of aud_mg1m; the two must agree.
inline double aud_mg1m_closed(const SystemSpec& spec) {
  require_analyzable(spec);
  require_poisson_decisions(spec);
  const double lambda = spec.lambda();
  const double r = spec.rho();
  switch (spec.service().kind()) {
    case LawKind::uniform: {
      const double e2 = std::exp(2.0 * r);
      return r * (6.0 * r * r * e2 - 13.0 * r * e2 + 9.0 * e2 + r - 3.0) /
             (3.0 * lambda * (1.0 - r) * std::expm1(2.0 * r));
    }
    case LawKind::exponential:
      return (r * r * r - r * r + 1.0) / (lambda * (1.0 - r));
    case LawKind::deterministic: {
      const double e1 = std::exp(r);
      return (r * r + 2.0 * (1.0 - r) * (r + e1 - r * e1)) / (2.0 * lambda * (1.0 - r));
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Periodic decisions (M/G/1/D)
// ---------------------------------------------------------------------------

/// Decision-count moments under the uniform-phase approximation.
///
/// The uniform-service values are the published ones. They do not form a
/// proper distribution and are reported for reference only; aud_mg1d_general
/// does not consume them.
inline NkMoments nk_moments(const SystemSpec& spec) {
  require_analyzable(spec);
  const int m0 = periodic_multiple(spec);
  const double m = m0;
  const double lambda = spec.lambda();
  const double mu = spec.mu();
  const double nu = m * mu;
  // 1 - e^{-x} without cancellation.
  const double one_minus_u0 = -std::expm1(-lambda / nu);
  const double u0 = 1.0 - one_minus_u0;

  NkMoments n;
  n.e_n2 = nu / lambda;
  n.e_n2_sq = nu * (1.0 + u0) / (lambda * one_minus_u0);
  switch (spec.service().kind()) {
    case LawKind::exponential: {
      const double one_minus_w0 = -std::expm1(-mu / nu);
      const double w0 = 1.0 - one_minus_w0;
      n.e_n1 = nu / mu;
      n.e_n1_sq = nu * (1.0 + w0) / (mu * one_minus_w0);
      break;
    }
    case LawKind::deterministic:
      n.e_n1 = m;
      n.e_n1_sq = m * m;
      break;
    case LawKind::uniform: {
      const double product = (2.0 * m + 1.0) * (2.0 * m + 2.0) * (4.0 * m + 3.0);
      n.e_n1 = (2.0 * m + 1.0) / 2.0;
      n.e_n1_sq = product / 6.0;
      n.e_n3 = n.e_n1;
      n.e_n3_sq = product / (12.0 * m);
      return n;
    }
  }
  n.e_n3 = n.e_n1;
  n.e_n3_sq = n.e_n1_sq;
  return n;
}

/// Law-specific closed forms for M/U/1/D, M/M/1/D and M/D/1/D.
inline double aud_mg1d_closed(const SystemSpec& spec) {
  require_analyzable(spec);
  const double m = periodic_multiple(spec);
  const double mu = spec.mu();
  const double r = spec.rho();
  const double nu = m * mu;
  const double one_minus_u0 = -std::expm1(-spec.lambda() / nu);
  const double u0 = 1.0 - one_minus_u0;
  // Shared periodic-decision penalty for the idle part of Y_k.
  const double idle_term = (1.0 - r) * (1.0 + u0) / (2.0 * mu * m * one_minus_u0);
  switch (spec.service().kind()) {
    case LawKind::uniform: {
      const double e2 = std::exp(2.0 * r);
      return 2.0 * e2 * (1.0 - r) / (mu * std::expm1(2.0 * r)) + idle_term -
             1.0 / (mu * r * (1.0 - r)) -
             ((2.0 * m * m + 1.0) * r * r + (16.0 * m * m - 1.0) * r - 36.0 * m * m - 6.0 * m) /
                 (12.0 * m * m * mu * (1.0 - r));
    }
    case LawKind::exponential: {
      const double one_minus_w0 = -std::expm1(-mu / nu);
      const double w0 = 1.0 - one_minus_w0;
      return (2.0 * r * r - 3.0 * r + 2.0) / (mu * (1.0 - r)) +
             r * (1.0 + w0) / (2.0 * mu * m * one_minus_w0) + idle_term;
    }
    case LawKind::deterministic:
      return std::exp(r) * (1.0 - r) / (mu * r) + idle_term +
             (-3.0 * r * r + 6.0 * r - 2.0) / (2.0 * mu * r * (1.0 - r));
  }
  return 0.0;
}

/// Missing probability with periodic decisions (uniform-phase approximation).
inline double pmis_mg1d(const SystemSpec& spec) {
  require_analyzable(spec);
  const double m = periodic_multiple(spec);
  const double r = spec.rho();
  const double one_minus_u0 = -std::expm1(-spec.lambda() / (m * spec.mu()));
  switch (spec.service().kind()) {
    case LawKind::uniform:
      return 1.0 / (8.0 * m) + (1.0 - r) * (m * one_minus_u0 - r) / (4.0 * r * r);
    case LawKind::exponential:
      return 0.5 - m * one_minus_u0 / (2.0 * r);
    case LawKind::deterministic:
      return 0.0;
  }
  return 0.0;
}

/// Average AuD with periodic decisions, assembled from the conditional system
/// times and the decision-count moments:
///
///   lambda rho/nu     * (E[T|X<=T] E[N1] + E[N1^2]/(2nu))
/// + lambda(1-rho)/nu  * (E[T|X>T](E[N2]+E[N3])
///                        + (E[N2^2] + E[N3^2] + 2E[N2]E[N3])/(2nu))
///
/// The last term is E[(N2+N3)^2]/(2nu) with N2, N3 independent. For uniform
/// service the assembly is not available (see nk_moments) and avg_aud is the
/// law-specific closed form.
inline AnalyticReport aud_mg1d_general(const SystemSpec& spec) {
  require_analyzable(spec);
  const int m0 = periodic_multiple(spec);
  const double lambda = spec.lambda();
  const double rho = spec.rho();
  const double nu = spec.nu();
  const auto cond = conditional_system_time(spec);
  const auto n = nk_moments(spec);

  AnalyticReport report;
  report.system = spec.kendall();
  if (spec.service().kind() == LawKind::uniform) {
    report.avg_aud = aud_mg1d_closed(spec);
  } else {
    const double queued = cond.given_x_le_t * n.e_n1 + n.e_n1_sq / (2.0 * nu);
    const double idle = cond.given_x_gt_t * (n.e_n2 + n.e_n3) +
                        (n.e_n2_sq + n.e_n3_sq + 2.0 * n.e_n2 * n.e_n3) / (2.0 * nu);
    report.avg_aud = lambda * rho / nu * queued + lambda * (1.0 - rho) / nu * idle;
  }
  report.p_mis = pmis_mg1d(spec);

  auto& im = report.intermediates;
  im["m0"] = m0;
  im["omega0"] = std::exp(-spec.mu() / nu);
  im["u0"] = std::exp(-lambda / nu);
  im["gs_at_minus_lambda"] = spec.service().mgf(-lambda);
  im["omega"] = omega(spec);
  im["mean_S2"] = spec.service().second_moment();
  im["mean_T"] = mean_system_time(spec);
  im["mean_T_given_X_le_T"] = cond.given_x_le_t;
  im["mean_T_given_X_gt_T"] = cond.given_x_gt_t;
  im["e_n1"] = n.e_n1;
  im["e_n1_sq"] = n.e_n1_sq;
  im["e_n2"] = n.e_n2;
  im["e_n2_sq"] = n.e_n2_sq;
  im["e_n3"] = n.e_n3;
  im["e_n3_sq"] = n.e_n3_sq;
  return report;
}

/// Smallest m0 in [1, m0_max] at which periodic decisions with uniform
/// service beat exponential service, or nullopt. The difference
/// M/M/1/D - M/U/1/D is increasing in m0, so the scan stops at the first hit.
inline std::optional<int> find_m0_star(double lambda, double mu, int m0_max = 1'000'000) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !(lambda < mu) || !std::isfinite(mu)) {
    throw ConfigError("find_m0_star needs 0 < lambda < mu, got lambda=" + std::to_string(lambda) +
                      ", mu=" + std::to_string(mu));
  }
  if (m0_max < 1) throw ConfigError("m0_max must be >= 1");
  for (int m0 = 1; m0 <= m0_max; ++m0) {
    const double nu = m0 * mu;
    const SystemSpec uniform(lambda, ServiceLaw::uniform(mu), DecisionLaw::periodic(nu));
    const SystemSpec expo(lambda, ServiceLaw::exponential(mu), DecisionLaw::periodic(nu));
    if (aud_mg1d_closed(uniform) < aud_mg1d_closed(expo)) return m0;
  }
  return std::nullopt;
}

/// Report for any analyzable system, dispatching on the decision law.
inline AnalyticReport evaluate(const SystemSpec& spec) {
  return spec.decision().is_periodic() ? aud_mg1d_general(spec) : aud_mg1m(spec);
}

}  // namespace aud::analytic

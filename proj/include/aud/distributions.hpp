#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "aud/error.hpp"
#include "aud/random.hpp"

namespace aud {

/// Shape of a mean-matched positive law. Every kind has mean 1/rate.
enum class LawKind { exponential, uniform, deterministic };

/// Decision process shape.
enum class DecisionKind { poisson, periodic };

namespace detail {

inline void require_rate(double rate, std::string_view what) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ConfigError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(rate));
  }
}

}  // namespace detail

/**
 * A positive law with mean exactly 1/rate:
 *   - exponential:   density rate*exp(-rate*x) on (0, inf)
 *   - uniform:       density rate/2 on (0, 2/rate)
 *   - deterministic: point mass at 1/rate
 *
 * Immutable value; safe to share between threads.
 */
class MeanMatchedLaw {
 public:
  MeanMatchedLaw(LawKind kind, double rate) : kind_(kind), rate_(rate) {
    detail::require_rate(rate, "rate");
  }

  LawKind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  double mean() const noexcept { return 1.0 / rate_; }

  double second_moment() const noexcept {
    const double m2 = 1.0 / (rate_ * rate_);
    switch (kind_) {
      case LawKind::exponential: return 2.0 * m2;
      case LawKind::uniform: return 4.0 * m2 / 3.0;
      case LawKind::deterministic: return m2;
    }
    return m2;
  }

  /// Supremum of the support.
  double upper_support() const noexcept {
    switch (kind_) {
      case LawKind::exponential: return std::numeric_limits<double>::infinity();
      case LawKind::uniform: return 2.0 / rate_;
      case LawKind::deterministic: return 1.0 / rate_;
    }
    return 0.0;
  }

  /// E[exp(sX)]. Throws DomainError for s >= rate on the exponential law.
  double mgf(double s) const {
    switch (kind_) {
      case LawKind::exponential:
        if (!(s < rate_)) return 1.0 + mgf_minus_one(s);  // throws
        return rate_ / (rate_ - s);
      case LawKind::uniform: {
        const double z = 2.0 * s / rate_;
        if (std::abs(z) < 1e-4) return 1.0 + mgf_minus_one(s);
        return std::expm1(z) / z;
      }
      case LawKind::deterministic:
        return std::exp(s / rate_);
    }
    return 1.0;
  }

  /// E[exp(sX)] - 1, evaluated without cancellation near s = 0.
  double mgf_minus_one(double s) const {
    switch (kind_) {
      case LawKind::exponential:
        if (!(s < rate_)) {
          throw DomainError("exponential MGF diverges for s >= rate (s=" +
                            std::to_string(s) + ", rate=" + std::to_string(rate_) +
                            ")");
        }
        return s / (rate_ - s);
      case LawKind::uniform: {
        // (e^z - 1)/z - 1 with z = 2s/rate; Taylor series near 0.
        const double z = 2.0 * s / rate_;
        if (std::abs(z) < 1e-4) {
          return z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
        }
        return (std::expm1(z) - z) / z;
      }
      case LawKind::deterministic:
        return std::expm1(s / rate_);
    }
    return 0.0;
  }

  double cdf(double x) const noexcept {
    if (x <= 0.0) return 0.0;
    switch (kind_) {
      case LawKind::exponential: return -std::expm1(-rate_ * x);
      case LawKind::uniform: return x >= 2.0 / rate_ ? 1.0 : 0.5 * rate_ * x;
      case LawKind::deterministic: return x >= 1.0 / rate_ ? 1.0 : 0.0;
    }
    return 0.0;
  }

  double sample(RandomStream& rng) const {
    switch (kind_) {
      case LawKind::exponential: return rng.exponential(rate_);
      case LawKind::uniform: return 2.0 * rng.uniform01() / rate_;
      case LawKind::deterministic: return 1.0 / rate_;
    }
    return 0.0;
  }

  /// Kendall symbol: M, U or D.
  char kendall_symbol() const noexcept {
    switch (kind_) {
      case LawKind::exponential: return 'M';
      case LawKind::uniform: return 'U';
      case LawKind::deterministic: return 'D';
    }
    return '?';
  }

  friend bool operator==(const MeanMatchedLaw&, const MeanMatchedLaw&) = default;

 private:
  LawKind kind_;
  double rate_;
};

/// Service-time law with rate mu.
class ServiceLaw : public MeanMatchedLaw {
 public:
  ServiceLaw(LawKind kind, double mu) : MeanMatchedLaw(kind, mu) {}
  static ServiceLaw exponential(double mu) { return {LawKind::exponential, mu}; }
  static ServiceLaw uniform(double mu) { return {LawKind::uniform, mu}; }
  static ServiceLaw deterministic(double mu) { return {LawKind::deterministic, mu}; }
};

/// Inter-arrival law with rate lambda. Exponential means Poisson arrivals.
class ArrivalLaw : public MeanMatchedLaw {
 public:
  ArrivalLaw(LawKind kind, double lambda) : MeanMatchedLaw(kind, lambda) {}
  static ArrivalLaw poisson(double lambda) { return {LawKind::exponential, lambda}; }
  static ArrivalLaw uniform(double lambda) { return {LawKind::uniform, lambda}; }
  static ArrivalLaw periodic(double lambda) { return {LawKind::deterministic, lambda}; }

  bool is_poisson() const noexcept { return kind() == LawKind::exponential; }
};

/// Decision-epoch process with rate nu: Poisson, or a grid of spacing 1/nu.
class DecisionLaw {
 public:
  DecisionLaw(DecisionKind kind, double nu) : kind_(kind), rate_(nu) {
    detail::require_rate(nu, "decision rate");
  }
  static DecisionLaw poisson(double nu) { return {DecisionKind::poisson, nu}; }
  static DecisionLaw periodic(double nu) { return {DecisionKind::periodic, nu}; }

  DecisionKind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  double period() const noexcept { return 1.0 / rate_; }
  bool is_periodic() const noexcept { return kind_ == DecisionKind::periodic; }

  /// One inter-decision time.
  double sample(RandomStream& rng) const {
    return kind_ == DecisionKind::poisson ? rng.exponential(rate_) : 1.0 / rate_;
  }

  char kendall_symbol() const noexcept { return is_periodic() ? 'D' : 'M'; }

  friend bool operator==(const DecisionLaw&, const DecisionLaw&) = default;

 private:
  DecisionKind kind_;
  double rate_;
};

// Names used in configuration files and on the command line.

inline std::string_view to_string(LawKind kind) noexcept {
  switch (kind) {
    case LawKind::exponential: return "exp";
    case LawKind::uniform: return "uniform";
    case LawKind::deterministic: return "det";
  }
  return "?";
}

inline std::string_view to_string(DecisionKind kind) noexcept {
  return kind == DecisionKind::poisson ? "poisson" : "periodic";
}

inline LawKind parse_law_kind(std::string_view name) {
  if (name == "exp" || name == "exponential") return LawKind::exponential;
  if (name == "uniform") return LawKind::uniform;
  if (name == "det" || name == "deterministic") return LawKind::deterministic;
  throw ConfigError("unknown law '" + std::string(name) +
                    "' (expected exp, uniform or det)");
}

inline DecisionKind parse_decision_kind(std::string_view name) {
  if (name == "poisson") return DecisionKind::poisson;
  if (name == "periodic") return DecisionKind::periodic;
  throw ConfigError("unknown decision law '" + std::string(name) +
                    "' (expected poisson or periodic)");
}

}  // namespace aud

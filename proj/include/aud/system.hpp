#pragma once

#include <cmath>
#include <string>

#include "aud/distributions.hpp"
#include "aud/error.hpp"

namespace aud {

/**
 * One update-and-decide system: a FCFS single-server queue fed by an
 * arrival process, plus a stream of decision epochs at the monitor.
 *
 * Construction enforces queue stability, rho = lambda/mu < 1. Closed-form
 * evaluation adds further requirements (Poisson arrivals, a rho window,
 * integer nu/mu for periodic decisions); see analytic.hpp.
 */
class SystemSpec {
 public:
  SystemSpec(ArrivalLaw arrival, ServiceLaw service, DecisionLaw decision)
      : arrival_(arrival), service_(service), decision_(decision) {
    if (!(rho() < 1.0)) {
      throw ConfigError("unstable queue: rho = lambda/mu = " +
                        std::to_string(lambda()) + "/" + std::to_string(mu()) +
                        " = " + std::to_string(rho()) + " must be < 1");
    }
  }

  /// Poisson arrivals of rate lambda.
  SystemSpec(double lambda, ServiceLaw service, DecisionLaw decision)
      : SystemSpec(ArrivalLaw::poisson(lambda), service, decision) {}

  const ArrivalLaw& arrival() const noexcept { return arrival_; }
  const ServiceLaw& service() const noexcept { return service_; }
  const DecisionLaw& decision() const noexcept { return decision_; }

  double lambda() const noexcept { return arrival_.rate(); }
  double mu() const noexcept { return service_.rate(); }
  double nu() const noexcept { return decision_.rate(); }
  double rho() const noexcept { return lambda() / mu(); }

  /// Kendall-style tag A/S/1/D, e.g. "M/U/1/D".
  std::string kendall() const {
    std::string tag;
    tag += arrival_.kendall_symbol();
    tag += '/';
    tag += service_.kendall_symbol();
    tag += "/1/";
    tag += decision_.kendall_symbol();
    return tag;
  }

  SystemSpec with_decision(DecisionLaw decision) const {
    return {arrival_, service_, decision};
  }
  SystemSpec with_service(ServiceLaw service) const {
    return {arrival_, service, decision_};
  }

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

 private:
  ArrivalLaw arrival_;
  ServiceLaw service_;
  DecisionLaw decision_;
};

}  // namespace aud

// Closed-form average AuD for the three service laws under Poisson and
// periodic decisions at lambda = 0.75, mu = 1.5, nu = 15.

#include <cstdio>

#include "aud/aud.hpp"

int main() {
  using namespace aud;
  const double lambda = 0.75, mu = 1.5, nu = 15.0;
  for (LawKind law : {LawKind::exponential, LawKind::uniform, LawKind::deterministic}) {
    const SystemSpec poisson(lambda, ServiceLaw(law, mu), DecisionLaw::poisson(nu));
    const SystemSpec periodic = poisson.with_decision(DecisionLaw::periodic(nu));
    const auto a = analytic::evaluate(poisson);
    const auto b = analytic::evaluate(periodic);
    std::printf("%s  AuD %.4f  p_mis %.5f    %s  AuD %.4f  p_mis %.5f\n", a.system.c_str(),
                a.avg_aud, a.p_mis, b.system.c_str(), b.avg_aud, b.p_mis);
  }
  std::printf("m0* (uniform beats exponential service) = %d\n", *analytic::find_m0_star(lambda, mu));
}

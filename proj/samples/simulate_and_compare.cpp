// Monte Carlo estimate next to the closed form for one system, with the
// replication confidence interval.

#include <cstdio>

#include "aud/aud.hpp"

int main() {
  using namespace aud;
  const SystemSpec system(0.75, ServiceLaw::uniform(1.5), DecisionLaw::poisson(15.0));
  sim::SimConfig config;
  config.n_updates = 100'000;
  config.replications = 10;

  const auto est = sim::estimate(system, config);
  const auto exact = analytic::evaluate(system);
  std::printf("%s\n", system.kendall().c_str());
  std::printf("  AuD    closed form %.4f   simulated %.4f  [%.4f, %.4f]\n", exact.avg_aud,
              est.aud.mean, est.aud.ci95_low, est.aud.ci95_high);
  std::printf("  p_mis  closed form %.5f  simulated %.5f\n", exact.p_mis, est.p_mis.mean);
  std::printf("  Pr{X <= T} %.4f (rho = %.4f)\n", est.prob_x_le_t, system.rho());
}

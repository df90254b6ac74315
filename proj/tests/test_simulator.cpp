#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "aud/simulator.hpp"

namespace {

using aud::DecisionLaw;
using aud::LawKind;
using aud::ServiceLaw;
using aud::SystemSpec;
namespace sim = aud::sim;

sim::SimConfig small(std::size_t n = 20'000, std::size_t reps = 4) {
  sim::SimConfig c;
  c.n_updates = n;
  c.replications = reps;
  return c;
}

TEST(Replay, SingleUpdateExample) {
  const std::vector<double> arrivals{1.0}, services{0.5}, decisions{2.0};
  const auto t = sim::replay(arrivals, services, decisions);
  ASSERT_EQ(t.decisions.size(), 1u);
  EXPECT_DOUBLE_EQ(t.updates[0].departure, 1.5);
  EXPECT_EQ(t.decisions[0].source, 1u);
  EXPECT_DOUBLE_EQ(t.decisions[0].aud, 1.0);
}

TEST(Replay, QueueingAndTies) {
  // Update 2 arrives while update 1 is in service and waits.
  const std::vector<double> arrivals{0.0, 1.0, 5.0}, services{2.0, 1.0, 1.0};
  // Epoch 3.0 coincides with the second departure and sees update 2.
  const std::vector<double> decisions{0.5, 2.5, 3.0, 5.5, 7.0};
  const auto t = sim::replay(arrivals, services, decisions);
  EXPECT_DOUBLE_EQ(t.updates[1].wait, 1.0);
  EXPECT_DOUBLE_EQ(t.updates[1].departure, 3.0);
  EXPECT_DOUBLE_EQ(t.updates[2].departure, 6.0);
  EXPECT_EQ(t.decisions[0].source, 0u);
  EXPECT_TRUE(std::isnan(t.decisions[0].aud));
  EXPECT_DOUBLE_EQ(t.decisions[1].aud, 2.5);
  EXPECT_EQ(t.decisions[2].source, 2u);
  EXPECT_DOUBLE_EQ(t.decisions[2].aud, 2.0);
  EXPECT_DOUBLE_EQ(t.decisions[3].aud, 4.5);
  EXPECT_DOUBLE_EQ(t.decisions[4].aud, 2.0);
  EXPECT_THROW(sim::replay(arrivals, std::vector<double>{1.0}, decisions), aud::ConfigError);
}

// Recompute every decision's source and age from the raw update times by
// linear scan, independently of the streaming engine.
TEST(Engine, TraceMatchesBruteForceAttribution) {
  for (auto decision : {DecisionLaw::poisson(4.0), DecisionLaw::periodic(3.0)}) {
    const SystemSpec sys(0.75, ServiceLaw::uniform(1.5), decision);
    auto cfg = small(400, 1);
    cfg.warmup_fraction = 0.0;
    const auto t = sim::simulate_trace(sys, cfg);
    ASSERT_EQ(t.updates.size(), 400u);

    double prev_dep = 0.0;
    for (const auto& u : t.updates) {
      const double dep = std::max(u.arrival, prev_dep) + u.service;
      EXPECT_NEAR(u.departure, dep, 1e-12);
      EXPECT_GT(u.departure, prev_dep);
      prev_dep = u.departure;
    }
    ASSERT_GT(t.decisions.size(), 100u);
    for (const auto& d : t.decisions) {
      EXPECT_LT(d.epoch, t.updates.back().departure);
      std::size_t src = 0;
      for (const auto& u : t.updates) {
        if (u.departure <= d.epoch) src = u.k;
      }
      ASSERT_EQ(d.source, src) << d.epoch;
      if (src > 0) EXPECT_NEAR(d.aud, d.epoch - t.updates[src - 1].arrival, 1e-12);
    }
    // Per-update decision counts partition the epochs.
    std::size_t total = 0;
    for (const auto& u : t.updates) total += u.decisions;
    EXPECT_EQ(total, t.decisions.size());
  }
}

TEST(Engine, TraceAgreesWithReplay) {
  const SystemSpec sys(0.6, ServiceLaw::exponential(1.0), DecisionLaw::poisson(2.0));
  auto cfg = small(300, 1);
  const auto t = sim::simulate_trace(sys, cfg);
  std::vector<double> arrivals, services, epochs;
  for (const auto& u : t.updates) {
    arrivals.push_back(u.arrival);
    services.push_back(u.service);
  }
  for (const auto& d : t.decisions) epochs.push_back(d.epoch);
  const auto r = sim::replay(arrivals, services, epochs);
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    EXPECT_EQ(r.decisions[i].source, t.decisions[i].source);
  }
}

TEST(Engine, PeriodicGridStartsAtOnePeriod) {
  const SystemSpec sys(0.75, ServiceLaw::exponential(1.5), DecisionLaw::periodic(15.0));
  const auto t = sim::simulate_trace(sys, small(200, 1));
  for (std::size_t j = 0; j < t.decisions.size(); ++j) {
    EXPECT_NEAR(t.decisions[j].epoch, (j + 1) / 15.0, 1e-9);
  }
  auto cfg = small(200, 1);
  cfg.random_phase = true;
  const auto r = sim::simulate_trace(sys, cfg);
  EXPECT_GT(r.decisions[0].epoch, 0.0);
  EXPECT_LE(r.decisions[0].epoch, 1.0 / 15.0);
}

TEST(Engine, DeterministicInSeed) {
  const SystemSpec sys(0.75, ServiceLaw::exponential(1.5), DecisionLaw::poisson(15.0));
  auto cfg = small();
  const auto a = sim::estimate(sys, cfg);
  const auto b = sim::estimate(sys, cfg);
  EXPECT_EQ(a.replication_means, b.replication_means);
  EXPECT_EQ(a.aud.mean, b.aud.mean);
  cfg.threads = 1;
  EXPECT_EQ(sim::estimate(sys, cfg).replication_means, a.replication_means);
  cfg.threads = 3;
  EXPECT_EQ(sim::estimate(sys, cfg).replication_means, a.replication_means);
  cfg.seed += 1;
  EXPECT_NE(sim::estimate(sys, cfg).aud.mean, a.aud.mean);
}

TEST(Engine, ReplicationZeroMatchesFirstReplicationOfEstimate) {
  const SystemSpec sys(0.5, ServiceLaw::uniform(1.0), DecisionLaw::poisson(5.0));
  const auto cfg = small();
  EXPECT_EQ(sim::run_replication(sys, cfg, 0).aud.mean, sim::estimate(sys, cfg).replication_means[0]);
}

TEST(Engine, DeterministicServiceWithPeriodicDecisionsNeverMisses) {
  for (int m0 : {1, 2, 10}) {
    const SystemSpec sys(0.75, ServiceLaw::deterministic(1.5), DecisionLaw::periodic(m0 * 1.5));
    EXPECT_EQ(sim::estimate(sys, small()).p_mis.mean, 0.0) << m0;
  }
}

TEST(Engine, TransformAtMinusLambdaMatchesOneMinusRho) {
  for (auto law : {LawKind::exponential, LawKind::uniform, LawKind::deterministic}) {
    const SystemSpec sys(0.75, ServiceLaw(law, 1.5), DecisionLaw::poisson(1.0));
    EXPECT_NEAR(sim::estimate(sys, small(50'000, 4)).mean_exp_neg_lambda_t, 0.5, 0.01);
  }
}

TEST(Engine, PoissonDecisionRateDoesNotMoveTheMean) {
  const SystemSpec slow(0.75, ServiceLaw::exponential(1.5), DecisionLaw::poisson(3.0));
  const SystemSpec fast = slow.with_decision(DecisionLaw::poisson(30.0));
  const auto a = sim::estimate(slow, small(50'000, 8));
  const auto b = sim::estimate(fast, small(50'000, 8));
  const double se = std::hypot(a.aud.std_error, b.aud.std_error);
  EXPECT_LT(std::abs(a.aud.mean - b.aud.mean), 4 * se);
}

TEST(Engine, MM1MeanAgeNearClosedForm) {
  const SystemSpec sys(0.75, ServiceLaw::exponential(1.5), DecisionLaw::poisson(15.0));
  const auto e = sim::estimate(sys, small(100'000, 8));
  EXPECT_NEAR(e.aud.mean, 7.0 / 3.0, 0.03);
  EXPECT_LT(e.aud.ci95_low, e.aud.mean);
  EXPECT_GT(e.aud.ci95_high, e.aud.mean);
  EXPECT_EQ(e.system, "M/M/1/M");
  EXPECT_EQ(e.replications, 8u);
}

TEST(Engine, WarmupDiscardsEarlyDecisions) {
  const SystemSpec sys(0.75, ServiceLaw::exponential(1.5), DecisionLaw::poisson(15.0));
  auto cfg = small(10'000, 1);
  const auto with = sim::estimate(sys, cfg);
  cfg.warmup_fraction = 0.0;
  const auto without = sim::estimate(sys, cfg);
  EXPECT_GT(with.n_decisions_discarded, without.n_decisions_discarded);
  EXPECT_EQ(with.n_updates_counted, 9'000u);
  EXPECT_EQ(without.n_updates_counted, 10'000u);
}

TEST(Engine, RejectsBadConfiguration) {
  const SystemSpec sys(0.75, ServiceLaw::exponential(1.5), DecisionLaw::poisson(15.0));
  auto cfg = small();
  cfg.n_updates = 10;
  EXPECT_THROW(sim::estimate(sys, cfg), aud::ConfigError);
  cfg = small();
  cfg.replications = 0;
  EXPECT_THROW(sim::estimate(sys, cfg), aud::ConfigError);
  cfg = small();
  cfg.warmup_fraction = 1.0;
  EXPECT_THROW(sim::estimate(sys, cfg), aud::ConfigError);
}

TEST(Engine, NonPoissonArrivalsSimulate) {
  const SystemSpec sys(aud::ArrivalLaw::periodic(0.75), ServiceLaw::exponential(1.5),
                       DecisionLaw::poisson(15.0));
  const auto e = sim::estimate(sys, small(50'000, 4));
  EXPECT_EQ(e.system, "D/M/1/M");
  EXPECT_NEAR(e.mean_y, 1 / 0.75, 0.01);
  EXPECT_GT(e.aud.mean, 1.4);
  EXPECT_LT(e.aud.mean, 1.6);
}

}  // namespace

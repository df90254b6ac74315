#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "aud/distributions.hpp"
#include "aud/error.hpp"
#include "aud/random.hpp"
#include "aud/statistics.hpp"
#include "aud/system.hpp"

// Monte Carlo estimator for update-and-decide systems. A replication pushes
// n_updates arrivals through a FCFS single server with the Lindley recursion
// and superimposes the decision epochs; every decision samples the age of the
// freshest delivered update.

namespace aud::sim {

inline constexpr std::uint64_t kDefaultSeed = 20211015;

struct SimConfig {
  std::size_t n_updates = 200'000;
  double warmup_fraction = 0.1;
  std::uint64_t seed = kDefaultSeed;
  std::size_t replications = 20;
  bool trace = false;
  /// Start the periodic decision grid at a uniform random offset in
  /// (0, 1/nu] instead of at 1/nu.
  bool random_phase = false;
  /// Worker threads for replications; 0 picks hardware concurrency.
  std::size_t threads = 0;

  void validate() const {
    if (n_updates < 100) throw ConfigError("n_updates must be >= 100");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
      throw ConfigError("warmup_fraction must lie in [0, 1)");
    }
  }

  /// Updates discarded at the start of each replication.
  std::size_t warmup_updates() const {
    return static_cast<std::size_t>(std::floor(warmup_fraction * static_cast<double>(n_updates)));
  }
};

struct UpdateRecord {
  std::size_t k = 0;             // 1-based index
  double arrival = 0.0;          // t_k
  double interarrival = 0.0;     // X_k
  double wait = 0.0;             // W_k
  double service = 0.0;          // S_k
  double system_time = 0.0;      // T_k = W_k + S_k
  double departure = 0.0;        // t'_k = t_k + T_k
  double interdeparture = 0.0;   // Y_k = t'_k - t'_{k-1}
  std::size_t decisions = 0;     // epochs in [t'_{k-1}, t'_k)
  bool retained = false;
};

struct DecisionRecord {
  double epoch = 0.0;
  double aud = std::numeric_limits<double>::quiet_NaN();  // epoch - t_source
  std::size_t source = 0;        // 0 when no update had been delivered
  bool retained = false;
};

struct Trace {
  std::vector<UpdateRecord> updates;
  std::vector<DecisionRecord> decisions;
};

/// Raw sums from one replication.
struct Tally {
  double sum_aud = 0.0;
  std::uint64_t n_decisions = 0;
  std::uint64_t n_decisions_discarded = 0;
  std::uint64_t n_intervals = 0;  // intervals entering p_mis
  std::uint64_t n_missed = 0;
  // Pairs (k-1, k) with both updates retained.
  std::uint64_t n_pairs = 0;
  std::uint64_t n_queued = 0;  // X_k <= T_{k-1}
  double sum_y = 0.0;
  double sum_y2 = 0.0;
  double sum_ty = 0.0;
  double sum_t_queued = 0.0;
  double sum_t_idle = 0.0;
  // Retained updates.
  std::uint64_t n_updates = 0;
  double sum_t = 0.0;
  double sum_exp_neg_lambda_t = 0.0;

  double mean_aud() const { return sum_aud / static_cast<double>(n_decisions); }
  double p_mis() const { return static_cast<double>(n_missed) / static_cast<double>(n_intervals); }
};

struct SimEstimate {
  Summary aud;     // average AuD over retained decisions
  Summary p_mis;   // fraction of retained intervals without a decision
  double mean_y = 0.0;
  double mean_y2 = 0.0;
  double mean_ty = 0.0;
  double prob_x_le_t = 0.0;
  double mean_t = 0.0;
  double mean_t_given_x_le_t = 0.0;
  double mean_t_given_x_gt_t = 0.0;
  double mean_exp_neg_lambda_t = 0.0;  // E[e^{-lambda T}]
  std::uint64_t n_decisions = 0;
  std::uint64_t n_decisions_discarded = 0;
  std::uint64_t n_updates_counted = 0;
  std::vector<double> replication_means;  // per-replication mean AuD
  std::uint64_t seed = 0;
  std::size_t n_updates = 0;
  std::size_t replications = 0;
  std::string system;
  std::string generator{RandomStream::generator_name};

  double mean_aud() const { return aud.mean; }
  double p_mis_hat() const { return p_mis.mean; }
};

struct ConditionalDiagnostics {
  double e_t_le = 0.0;  // E[T_{k-1} | X_k <= T_{k-1}]
  double e_t_gt = 0.0;  // E[T_{k-1} | X_k > T_{k-1}]
  double e_y = 0.0;
  double e_y2 = 0.0;
  double e_ty = 0.0;
};

namespace detail {

/// Substream indices: three per replication.
inline std::uint64_t stream_index(std::uint64_t rep, std::uint64_t role) { return 3 * rep + role; }

/// Decision epoch generator. Periodic epochs are computed as phase + j/nu
/// rather than accumulated, so the grid does not drift.
class DecisionClock {
 public:
  DecisionClock(const DecisionLaw& law, RandomStream& rng, bool random_phase)
      : law_(law), rng_(rng) {
    if (law_.is_periodic()) {
      phase_ = random_phase ? rng_.uniform01() * law_.period() : law_.period();
      next_ = phase_;
    } else {
      next_ = law_.sample(rng_);
    }
  }

  double next() const noexcept { return next_; }

  void advance() {
    if (law_.is_periodic()) {
      ++index_;
      next_ = phase_ + static_cast<double>(index_) * law_.period();
    } else {
      next_ += law_.sample(rng_);
    }
  }

 private:
  const DecisionLaw& law_;
  RandomStream& rng_;
  double phase_ = 0.0;
  double next_ = 0.0;
  std::uint64_t index_ = 0;
};

/// One replication. Update k is retained when k > warmup. Retained
/// decisions are those whose source update is retained, which drops every
/// decision before the first retained departure. An epoch tau belongs to the
/// interval [t'_{k-1}, t'_k), matching N_U(tau) = max{k : t'_k <= tau}.
/// p_mis counts those intervals for retained k >= 2; moments use pairs
/// (k-1, k) with both retained. Decisions after the last departure are never
/// generated.
inline Tally run_path(const SystemSpec& spec, const SimConfig& config, std::uint64_t rep,
                      Trace* trace) {
  RandomStream arrival_rng(config.seed, stream_index(rep, 0));
  RandomStream service_rng(config.seed, stream_index(rep, 1));
  RandomStream decision_rng(config.seed, stream_index(rep, 2));
  DecisionClock clock(spec.decision(), decision_rng, config.random_phase);

  const std::size_t n = config.n_updates;
  const std::size_t first_retained = config.warmup_updates() + 1;
  const double lambda = spec.lambda();

  Tally tally;
  double prev_arrival = 0.0;
  double prev_departure = 0.0;
  double prev_system_time = 0.0;

  for (std::size_t k = 1; k <= n; ++k) {
    const double x = spec.arrival().sample(arrival_rng);
    const double s = spec.service().sample(service_rng);
    const double arrival = prev_arrival + x;
    const double wait = std::max(0.0, prev_departure - arrival);
    const double system_time = wait + s;
    const double departure = arrival + system_time;
    const double y = departure - prev_departure;
    if (trace != nullptr && departure <= prev_departure) {
      throw NumericalError("departure times not strictly increasing at update " +
                           std::to_string(k));
    }

    const bool source_retained = k >= 2 && k - 1 >= first_retained;
    std::size_t decisions = 0;
    while (clock.next() < departure) {
      const double epoch = clock.next();
      if (source_retained) {
        tally.sum_aud += epoch - prev_arrival;
        ++tally.n_decisions;
      } else {
        ++tally.n_decisions_discarded;
      }
      if (trace != nullptr) {
        DecisionRecord d;
        d.epoch = epoch;
        d.retained = source_retained;
        if (k >= 2) {
          d.source = k - 1;
          d.aud = epoch - prev_arrival;
        }
        trace->decisions.push_back(d);
      }
      ++decisions;
      clock.advance();
    }

    if (k >= 2 && k >= first_retained) {
      ++tally.n_intervals;
      if (decisions == 0) ++tally.n_missed;
    }
    if (source_retained) {
      ++tally.n_pairs;
      tally.sum_y += y;
      tally.sum_y2 += y * y;
      tally.sum_ty += prev_system_time * y;
      if (arrival <= prev_departure) {
        ++tally.n_queued;
        tally.sum_t_queued += prev_system_time;
      } else {
        tally.sum_t_idle += prev_system_time;
      }
    }
    if (k >= first_retained) {
      ++tally.n_updates;
      tally.sum_t += system_time;
      tally.sum_exp_neg_lambda_t += std::exp(-lambda * system_time);
    }
    if (trace != nullptr) {
      trace->updates.push_back(
          {k, arrival, x, wait, s, system_time, departure, y, decisions, k >= first_retained});
    }

    prev_arrival = arrival;
    prev_departure = departure;
    prev_system_time = system_time;
  }
  return tally;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

inline SimEstimate aggregate(const SystemSpec& spec, const SimConfig& config,
                             std::span<const Tally> tallies) {
  Tally total;
  std::vector<double> aud_means;
  std::vector<double> pmis_values;
  for (const auto& t : tallies) {
    total.sum_aud += t.sum_aud;
    total.n_decisions += t.n_decisions;
    total.n_decisions_discarded += t.n_decisions_discarded;
    total.n_intervals += t.n_intervals;
    total.n_missed += t.n_missed;
    total.n_pairs += t.n_pairs;
    total.n_queued += t.n_queued;
    total.sum_y += t.sum_y;
    total.sum_y2 += t.sum_y2;
    total.sum_ty += t.sum_ty;
    total.sum_t_queued += t.sum_t_queued;
    total.sum_t_idle += t.sum_t_idle;
    total.n_updates += t.n_updates;
    total.sum_t += t.sum_t;
    total.sum_exp_neg_lambda_t += t.sum_exp_neg_lambda_t;
    aud_means.push_back(t.mean_aud());
    pmis_values.push_back(t.p_mis());
  }

  const auto pairs = static_cast<double>(total.n_pairs);
  const auto queued = static_cast<double>(total.n_queued);
  const auto updates = static_cast<double>(total.n_updates);

  SimEstimate e;
  e.aud = summarize(aud_means, total.mean_aud());
  e.p_mis = summarize(pmis_values, total.p_mis());
  e.mean_y = total.sum_y / pairs;
  e.mean_y2 = total.sum_y2 / pairs;
  e.mean_ty = total.sum_ty / pairs;
  e.prob_x_le_t = queued / pairs;
  e.mean_t_given_x_le_t = total.sum_t_queued / queued;
  e.mean_t_given_x_gt_t = total.sum_t_idle / (pairs - queued);
  e.mean_t = total.sum_t / updates;
  e.mean_exp_neg_lambda_t = total.sum_exp_neg_lambda_t / updates;
  e.n_decisions = total.n_decisions;
  e.n_decisions_discarded = total.n_decisions_discarded;
  e.n_updates_counted = total.n_updates;
  e.replication_means = std::move(aud_means);
  e.seed = config.seed;
  e.n_updates = config.n_updates;
  e.replications = tallies.size();
  e.system = spec.kendall();
  return e;
}

}  // namespace detail

/// Single replication `rep`; deterministic in (seed, rep). Error fields of
/// the summaries are NaN since there is only one replication.
inline SimEstimate run_replication(const SystemSpec& spec, const SimConfig& config,
                                   std::uint64_t rep) {
  config.validate();
  const Tally tally = detail::run_path(spec, config, rep, nullptr);
  return detail::aggregate(spec, config, std::span<const Tally>(&tally, 1));
}

/// Replications 0..R-1 on independent substreams, pooled.
inline SimEstimate estimate(const SystemSpec& spec, const SimConfig& config) {
  config.validate();
  std::vector<Tally> tallies(config.replications);
  detail::parallel_for(config.replications, config.threads, [&](std::size_t rep) {
    tallies[rep] = detail::run_path(spec, config, rep, nullptr);
  });
  return detail::aggregate(spec, config, tallies);
}

inline double estimate_pmis(const SystemSpec& spec, const SimConfig& config) {
  return estimate(spec, config).p_mis_hat();
}

inline ConditionalDiagnostics conditional_diagnostics(const SystemSpec& spec,
                                                      const SimConfig& config) {
  const auto e = estimate(spec, config);
  return {e.mean_t_given_x_le_t, e.mean_t_given_x_gt_t, e.mean_y, e.mean_y2, e.mean_ty};
}

/// Full record of replication `rep`. Departure monotonicity is checked on
/// every update.
inline Trace simulate_trace(const SystemSpec& spec, const SimConfig& config, std::uint64_t rep = 0) {
  config.validate();
  Trace trace;
  trace.updates.reserve(config.n_updates);
  detail::run_path(spec, config, rep, &trace);
  return trace;
}

/**
 * Replay an explicit timeline. Departures follow the FCFS recursion
 * t'_k = max(t_k, t'_{k-1}) + S_k. Each decision epoch tau is attributed to
 * N_U(tau) = max{k : t'_k <= tau} and gets AuD tau - t_{N_U(tau)}; epochs
 * before the first departure get source 0 and a NaN age. Unlike the
 * streaming simulator, epochs after the last departure are kept.
 */
inline Trace replay(std::span<const double> arrival_times, std::span<const double> service_times,
                    std::span<const double> decision_epochs) {
  if (arrival_times.size() != service_times.size()) {
    throw ConfigError("replay needs one service time per arrival");
  }
  Trace trace;
  double prev_arrival = 0.0;
  double prev_departure = 0.0;
  std::vector<double> departures;
  for (std::size_t i = 0; i < arrival_times.size(); ++i) {
    const double t = arrival_times[i];
    const double s = service_times[i];
    if (t < prev_arrival || s < 0.0) throw ConfigError("replay arrivals must be sorted, services >= 0");
    UpdateRecord u;
    u.k = i + 1;
    u.arrival = t;
    u.interarrival = t - prev_arrival;
    u.wait = std::max(0.0, prev_departure - t);
    u.service = s;
    u.system_time = u.wait + s;
    u.departure = t + u.system_time;
    u.interdeparture = u.departure - prev_departure;
    u.retained = true;
    departures.push_back(u.departure);
    trace.updates.push_back(u);
    prev_arrival = t;
    prev_departure = u.departure;
  }
  for (double tau : decision_epochs) {
    DecisionRecord d;
    d.epoch = tau;
    const auto it = std::upper_bound(departures.begin(), departures.end(), tau);
    const auto idx = static_cast<std::size_t>(it - departures.begin());
    if (idx > 0) {
      d.source = idx;
      d.aud = tau - trace.updates[idx - 1].arrival;
      d.retained = true;
      // Decision lies in [t'_{idx}, t'_{idx+1}).
      if (idx < trace.updates.size()) ++trace.updates[idx].decisions;
    }
    trace.decisions.push_back(d);
  }
  return trace;
}

}  // namespace aud::sim

#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "aud/analytic.hpp"
#include "aud/simulator.hpp"
#include "aud/statistics.hpp"
#include "aud/version.hpp"

namespace aud {

using Json = nlohmann::json;

/// Shortest round-trip decimal form; empty for NaN.
inline std::string format_number(double x) {
  if (std::isnan(x)) return {};
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

inline std::string format_number(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string{};
}

/// JSON number, or null for NaN / infinity.
inline Json json_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json to_json(const Summary& s) {
  return {{"mean", json_number(s.mean)},
          {"std_error", json_number(s.std_error)},
          {"ci95_low", json_number(s.ci95_low)},
          {"ci95_high", json_number(s.ci95_high)},
          {"replications", s.replications}};
}

inline Json to_json(const analytic::AnalyticReport& r) {
  Json j;
  j["system"] = r.system;
  j["avg_aud"] = json_number(r.avg_aud);
  j["p_mis"] = json_number(r.p_mis);
  Json im = Json::object();
  for (const auto& [k, v] : r.intermediates) im[k] = json_number(v);
  j["intermediates"] = im;
  return j;
}

inline Json to_json(const analytic::NkMoments& n) {
  return {{"e_n1", n.e_n1}, {"e_n1_sq", n.e_n1_sq}, {"e_n2", n.e_n2},
          {"e_n2_sq", n.e_n2_sq}, {"e_n3", n.e_n3}, {"e_n3_sq", n.e_n3_sq}};
}

inline Json to_json(const sim::SimEstimate& e) {
  Json j;
  j["system"] = e.system;
  j["mean_aud"] = json_number(e.aud.mean);
  j["aud_stderr"] = json_number(e.aud.std_error);
  j["aud_ci95_low"] = json_number(e.aud.ci95_low);
  j["aud_ci95_high"] = json_number(e.aud.ci95_high);
  j["p_mis_hat"] = json_number(e.p_mis.mean);
  j["p_mis_ci95_low"] = json_number(e.p_mis.ci95_low);
  j["p_mis_ci95_high"] = json_number(e.p_mis.ci95_high);
  j["mean_Y"] = json_number(e.mean_y);
  j["mean_Y2"] = json_number(e.mean_y2);
  j["mean_TY"] = json_number(e.mean_ty);
  j["prob_X_le_T"] = json_number(e.prob_x_le_t);
  j["mean_T"] = json_number(e.mean_t);
  j["mean_T_given_X_le_T"] = json_number(e.mean_t_given_x_le_t);
  j["mean_T_given_X_gt_T"] = json_number(e.mean_t_given_x_gt_t);
  j["mean_exp_neg_lambda_T"] = json_number(e.mean_exp_neg_lambda_t);
  j["n_decisions"] = e.n_decisions;
  j["n_decisions_discarded"] = e.n_decisions_discarded;
  j["n_updates_counted"] = e.n_updates_counted;
  Json reps = Json::array();
  for (double m : e.replication_means) reps.push_back(json_number(m));
  j["replication_means"] = reps;
  j["seed"] = e.seed;
  j["n_updates"] = e.n_updates;
  j["replications"] = e.replications;
  j["generator"] = e.generator;
  return j;
}

/// Trace CSV. One row per update (record=update) and per decision
/// (record=decision); columns that do not apply to a row are empty.
inline void write_trace_csv(std::ostream& out, const sim::Trace& trace) {
  out << "record,k,arrival,interarrival,wait,service,system_time,departure,"
         "interdeparture,decisions,epoch,aud,source,retained\n";
  for (const auto& u : trace.updates) {
    out << "update," << u.k << ',' << format_number(u.arrival) << ','
        << format_number(u.interarrival) << ',' << format_number(u.wait) << ','
        << format_number(u.service) << ',' << format_number(u.system_time) << ','
        << format_number(u.departure) << ',' << format_number(u.interdeparture) << ','
        << u.decisions << ",,,," << (u.retained ? 1 : 0) << '\n';
  }
  for (const auto& d : trace.decisions) {
    out << "decision,,,,,,,,,," << format_number(d.epoch) << ',' << format_number(d.aud) << ','
        << d.source << ',' << (d.retained ? 1 : 0) << '\n';
  }
}

}  // namespace aud

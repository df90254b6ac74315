#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "aud/analytic.hpp"
#include "aud/distributions.hpp"
#include "aud/error.hpp"
#include "aud/io.hpp"
#include "aud/simulator.hpp"
#include "aud/system.hpp"

namespace aud::experiments {

enum class SweepParameter { lambda, mu, m0, nu };
enum class Quantity { aud, p_mis };
enum class Estimators { analytic, simulation, both };

/**
 * A one-parameter sweep. Every grid point is crossed with every
 * (arrival, decision, service) variant.
 *
 * The decision rate at a point is, in order of precedence: the grid value
 * when sweeping nu; m0 * mu when sweeping m0; the fixed `nu` when set;
 * otherwise m0 * mu with the point's mu.
 */
struct SweepSpec {
  std::string name = "custom";
  SweepParameter parameter = SweepParameter::lambda;
  std::vector<double> grid;
  double lambda = 0.75;
  double mu = 1.5;
  std::optional<double> nu;
  double m0 = 10.0;
  std::vector<LawKind> arrivals{LawKind::exponential};
  std::vector<DecisionKind> decisions{DecisionKind::poisson};
  std::vector<LawKind> services{LawKind::exponential, LawKind::uniform, LawKind::deterministic};
  Quantity quantity = Quantity::aud;
  Estimators estimators = Estimators::both;
  sim::SimConfig sim;

  bool wants_analytic() const { return estimators != Estimators::simulation; }
  bool wants_simulation() const { return estimators != Estimators::analytic; }

  void validate() const {
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
    }
    for (double g : grid) {
      if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("sweep grid values must be positive");
    }
    if (arrivals.empty() || decisions.empty() || services.empty()) {
      throw ConfigError("sweep needs at least one arrival, decision and service law");
    }
    if (!(m0 > 0.0)) throw ConfigError("m0 must be positive");
    if (wants_simulation()) sim.validate();
  }
};

struct SweepRow {
  double parameter = 0.0;
  std::string variant;
  std::optional<double> analytic;
  std::optional<Summary> sim;
  std::optional<double> abs_gap;
  std::optional<double> rel_gap;
  std::string note;
};

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

inline std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::lambda: return "lambda";
    case SweepParameter::mu: return "mu";
    case SweepParameter::m0: return "m0";
    case SweepParameter::nu: return "nu";
  }
  return "?";
}

inline SweepParameter parse_sweep_parameter(std::string_view s) {
  if (s == "lambda") return SweepParameter::lambda;
  if (s == "mu") return SweepParameter::mu;
  if (s == "m0") return SweepParameter::m0;
  if (s == "nu") return SweepParameter::nu;
  throw ConfigError("unknown sweep parameter '" + std::string(s) + "'");
}

inline std::string_view to_string(Quantity q) { return q == Quantity::aud ? "aud" : "p_mis"; }

inline Quantity parse_quantity(std::string_view s) {
  if (s == "aud") return Quantity::aud;
  if (s == "p_mis" || s == "pmis") return Quantity::p_mis;
  throw ConfigError("unknown quantity '" + std::string(s) + "'");
}

inline std::string_view to_string(Estimators e) {
  switch (e) {
    case Estimators::analytic: return "analytic";
    case Estimators::simulation: return "simulation";
    case Estimators::both: return "both";
  }
  return "?";
}

inline Estimators parse_estimators(std::string_view s) {
  if (s == "analytic") return Estimators::analytic;
  if (s == "simulation" || s == "sim") return Estimators::simulation;
  if (s == "both") return Estimators::both;
  throw ConfigError("unknown estimator set '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

namespace detail {

struct PointRates {
  double lambda;
  double mu;
  double nu;
};

inline PointRates rates_at(const SweepSpec& spec, double value) {
  PointRates r{spec.lambda, spec.mu, 0.0};
  switch (spec.parameter) {
    case SweepParameter::lambda: r.lambda = value; break;
    case SweepParameter::mu: r.mu = value; break;
    case SweepParameter::m0: r.nu = value * r.mu; return r;
    case SweepParameter::nu: r.nu = value; return r;
  }
  r.nu = spec.nu ? *spec.nu : spec.m0 * r.mu;
  return r;
}

inline std::optional<double> analytic_value(const SystemSpec& system, Quantity q, std::string& note) {
  try {
    const auto report = analytic::evaluate(system);
    return q == Quantity::aud ? report.avg_aud : report.p_mis;
  } catch (const std::exception& e) {
    note = std::string("analytic skipped: ") + e.what();
    return std::nullopt;
  }
}

}  // namespace detail

/// Rows in grid order, then arrival, decision and service order.
/// Unstable points yield rows with a note and no values.
inline std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  for (double value : spec.grid) {
    const auto rates = detail::rates_at(spec, value);
    for (LawKind arrival : spec.arrivals) {
      for (DecisionKind decision : spec.decisions) {
        for (LawKind service : spec.services) {
          SweepRow row;
          row.parameter = value;
          std::string tag;
          tag += ArrivalLaw(arrival, 1.0).kendall_symbol();
          tag += '/';
          tag += ServiceLaw(service, 1.0).kendall_symbol();
          tag += "/1/";
          tag += DecisionLaw(decision, 1.0).kendall_symbol();
          row.variant = tag;
          if (!(rates.lambda < rates.mu)) {
            row.note = "skipped: unstable (rho >= 1)";
            rows.push_back(std::move(row));
            continue;
          }
          const SystemSpec system(ArrivalLaw(arrival, rates.lambda), ServiceLaw(service, rates.mu),
                                  DecisionLaw(decision, rates.nu));
          if (spec.wants_analytic()) {
            row.analytic = detail::analytic_value(system, spec.quantity, row.note);
          }
          if (spec.wants_simulation()) {
            const auto est = sim::estimate(system, spec.sim);
            row.sim = spec.quantity == Quantity::aud ? est.aud : est.p_mis;
          }
          if (row.analytic && row.sim) {
            row.abs_gap = std::abs(*row.analytic - row.sim->mean);
            row.rel_gap = row.sim->mean != 0.0 ? *row.abs_gap / std::abs(row.sim->mean)
                                               : std::numeric_limits<double>::quiet_NaN();
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "parameter,variant,analytic,sim_mean,sim_ci_low,sim_ci_high,abs_gap,rel_gap,note\n";
  for (const auto& r : rows) {
    out << format_number(r.parameter) << ',' << r.variant << ',' << format_number(r.analytic) << ',';
    if (r.sim) {
      out << format_number(r.sim->mean) << ',' << format_number(r.sim->ci95_low) << ','
          << format_number(r.sim->ci95_high);
    } else {
      out << ",,";
    }
    out << ',' << format_number(r.abs_gap) << ',' << format_number(r.rel_gap) << ',';
    // Notes never contain double quotes; quote when they contain commas.
    if (r.note.find(',') != std::string::npos) {
      out << '"' << r.note << '"';
    } else {
      out << r.note;
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline Json to_json(const sim::SimConfig& c) {
  return {{"n_updates", c.n_updates},         {"replications", c.replications},
          {"warmup_fraction", c.warmup_fraction}, {"seed", c.seed},
          {"random_phase", c.random_phase}};
}

inline Json to_json(const SweepSpec& s) {
  Json j;
  j["name"] = s.name;
  j["parameter"] = to_string(s.parameter);
  j["grid"] = s.grid;
  j["lambda"] = s.lambda;
  j["mu"] = s.mu;
  j["nu"] = s.nu ? Json(*s.nu) : Json(nullptr);
  j["m0"] = s.m0;
  Json arrivals = Json::array();
  for (auto a : s.arrivals) arrivals.push_back(aud::to_string(a));
  Json decisions = Json::array();
  for (auto d : s.decisions) decisions.push_back(aud::to_string(d));
  Json services = Json::array();
  for (auto v : s.services) services.push_back(aud::to_string(v));
  j["arrivals"] = arrivals;
  j["decisions"] = decisions;
  j["services"] = services;
  j["quantity"] = to_string(s.quantity);
  j["estimators"] = to_string(s.estimators);
  j["sim"] = to_json(s.sim);
  return j;
}

/// Parse a sweep description. Missing keys keep their defaults.
inline SweepSpec sweep_spec_from_json(const Json& j) {
  SweepSpec s;
  try {
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    if (j.contains("parameter")) s.parameter = parse_sweep_parameter(j.at("parameter").get<std::string>());
    if (j.contains("grid")) s.grid = j.at("grid").get<std::vector<double>>();
    if (j.contains("lambda")) s.lambda = j.at("lambda").get<double>();
    if (j.contains("mu")) s.mu = j.at("mu").get<double>();
    if (j.contains("nu") && !j.at("nu").is_null()) s.nu = j.at("nu").get<double>();
    if (j.contains("m0")) s.m0 = j.at("m0").get<double>();
    if (j.contains("arrivals")) {
      s.arrivals.clear();
      for (const auto& a : j.at("arrivals")) s.arrivals.push_back(parse_law_kind(a.get<std::string>()));
    }
    if (j.contains("decisions")) {
      s.decisions.clear();
      for (const auto& d : j.at("decisions")) s.decisions.push_back(parse_decision_kind(d.get<std::string>()));
    }
    if (j.contains("services")) {
      s.services.clear();
      for (const auto& v : j.at("services")) s.services.push_back(parse_law_kind(v.get<std::string>()));
    }
    if (j.contains("quantity")) s.quantity = parse_quantity(j.at("quantity").get<std::string>());
    if (j.contains("estimators")) s.estimators = parse_estimators(j.at("estimators").get<std::string>());
    if (j.contains("sim")) {
      const auto& c = j.at("sim");
      if (c.contains("n_updates")) s.sim.n_updates = c.at("n_updates").get<std::size_t>();
      if (c.contains("replications")) s.sim.replications = c.at("replications").get<std::size_t>();
      if (c.contains("warmup_fraction")) s.sim.warmup_fraction = c.at("warmup_fraction").get<double>();
      if (c.contains("seed")) s.sim.seed = c.at("seed").get<std::uint64_t>();
      if (c.contains("random_phase")) s.sim.random_phase = c.at("random_phase").get<bool>();
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed sweep description: ") + e.what());
  }
  s.validate();
  return s;
}

inline Json to_json(const SweepRow& r) {
  Json j;
  j["parameter"] = r.parameter;
  j["variant"] = r.variant;
  j["analytic"] = r.analytic ? json_number(*r.analytic) : Json(nullptr);
  j["sim"] = r.sim ? to_json(*r.sim) : Json(nullptr);
  j["abs_gap"] = r.abs_gap ? json_number(*r.abs_gap) : Json(nullptr);
  j["rel_gap"] = r.rel_gap ? json_number(*r.rel_gap) : Json(nullptr);
  j["note"] = r.note;
  return j;
}

inline Json to_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  Json j;
  j["sweep"] = to_json(spec);
  j["generator"] = RandomStream::generator_name;
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  j["rows"] = arr;
  return j;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Evenly spaced grid from `first` to `last` inclusive, rounded to 1e-9.
inline std::vector<double> linear_grid(double first, double last, double step) {
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    g.push_back(std::round((first + static_cast<double>(i) * step) * 1e9) / 1e9);
  }
  return g;
}

inline std::vector<std::string_view> preset_names() {
  return {"fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6", "fig7"};
}

/// Built-in figure presets. Grid densities and simulation budgets are
/// choices of this project; the fixed rates follow the figures.
inline SweepSpec preset(std::string_view name) {
  SweepSpec s;
  s.name = std::string(name);
  s.sim.n_updates = 100'000;
  s.sim.replications = 10;
  const std::vector<double> mu_grid{0.6, 0.7, 0.8, 0.9, 1.0, 1.25, 1.5, 2.0,
                                    2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0};
  const std::vector<double> m0_grid{1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 40, 50};
  if (name == "fig3a") {  // AuD vs lambda, mu = 1.5, Poisson decisions
    s.parameter = SweepParameter::lambda;
    s.grid = linear_grid(0.1, 1.4, 0.1);
    s.mu = 1.5;
    s.nu = 15.0;
  } else if (name == "fig3b") {  // AuD vs mu, lambda = 0.5, Poisson decisions
    s.parameter = SweepParameter::mu;
    s.grid = mu_grid;
    s.lambda = 0.5;
    s.nu = 15.0;
  } else if (name == "fig4") {  // p_mis vs nu, Poisson decisions
    s.parameter = SweepParameter::nu;
    s.grid = {0.5, 1, 2, 3, 5, 7.5, 10, 15, 20, 30, 50};
    s.quantity = Quantity::p_mis;
  } else if (name == "fig5a") {  // AuD vs lambda, mu = 1.5, periodic m0 = 20
    s.parameter = SweepParameter::lambda;
    s.grid = linear_grid(0.1, 1.4, 0.1);
    s.mu = 1.5;
    s.m0 = 20;
    s.decisions = {DecisionKind::periodic};
  } else if (name == "fig5b") {  // AuD vs mu, lambda = 0.5, periodic m0 = 20
    s.parameter = SweepParameter::mu;
    s.grid = mu_grid;
    s.lambda = 0.5;
    s.m0 = 20;
    s.decisions = {DecisionKind::periodic};
  } else if (name == "fig6") {  // AuD vs m0, periodic and Poisson decisions
    s.parameter = SweepParameter::m0;
    s.grid = m0_grid;
    s.decisions = {DecisionKind::periodic, DecisionKind::poisson};
    s.sim.n_updates = 50'000;
  } else if (name == "fig7") {  // p_mis vs m0, periodic and Poisson decisions
    s.parameter = SweepParameter::m0;
    s.grid = m0_grid;
    s.decisions = {DecisionKind::periodic, DecisionKind::poisson};
    s.quantity = Quantity::p_mis;
    s.sim.n_updates = 50'000;
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Table of average AuDs at lambda = 0.75, mu = 1.5, nu = 15
// ---------------------------------------------------------------------------

struct Table1Cell {
  std::string row;
  std::string column;
  std::string system;
  std::optional<double> analytic;
  double reference = 0.0;  // published four-decimal value
  Summary sim;
};

struct Table1 {
  double lambda = 0.75;
  double mu = 1.5;
  double nu = 15.0;
  std::vector<Table1Cell> cells;  // row-major, 4 x 3
};

/// Rows: Poisson arrivals with Poisson / periodic decisions (columns are the
/// service law), then Poisson service with Poisson / periodic decisions
/// (columns are the arrival law). Non-Poisson arrivals are simulated only.
inline Table1 table1(const sim::SimConfig& config) {
  Table1 t;
  static constexpr double kReference[4][3] = {{2.3333, 2.1658, 2.0091},
                                              {2.3337, 2.2640, 2.0993},
                                              {2.3333, 1.7870, 1.5028},
                                              {2.3336, 1.7892, 1.5037}};
  static constexpr LawKind kLaws[3] = {LawKind::exponential, LawKind::uniform,
                                       LawKind::deterministic};
  static constexpr const char* kColumns[3] = {"poisson", "uniform", "periodic"};
  for (int r = 0; r < 4; ++r) {
    const bool periodic = r % 2 == 1;
    const bool vary_service = r < 2;
    const DecisionLaw decision(periodic ? DecisionKind::periodic : DecisionKind::poisson, t.nu);
    for (int c = 0; c < 3; ++c) {
      const ArrivalLaw arrival(vary_service ? LawKind::exponential : kLaws[c], t.lambda);
      const ServiceLaw service(vary_service ? kLaws[c] : LawKind::exponential, t.mu);
      const SystemSpec system(arrival, service, decision);
      Table1Cell cell;
      cell.row = std::string(vary_service ? "poisson_arrivals" : "poisson_services") + "/" +
                 (periodic ? "periodic_decisions" : "poisson_decisions");
      cell.column = kColumns[c];
      cell.system = system.kendall();
      cell.reference = kReference[r][c];
      if (arrival.is_poisson()) cell.analytic = analytic::evaluate(system).avg_aud;
      cell.sim = sim::estimate(system, config).aud;
      t.cells.push_back(std::move(cell));
    }
  }
  return t;
}

inline Json to_json(const Table1& t) {
  Json j;
  j["lambda"] = t.lambda;
  j["mu"] = t.mu;
  j["nu"] = t.nu;
  Json cells = Json::array();
  for (const auto& c : t.cells) {
    cells.push_back({{"row", c.row},
                     {"column", c.column},
                     {"system", c.system},
                     {"analytic", c.analytic ? json_number(*c.analytic) : Json(nullptr)},
                     {"reference", c.reference},
                     {"sim", to_json(c.sim)}});
  }
  j["cells"] = cells;
  return j;
}

inline void write_csv(std::ostream& out, const Table1& t) {
  out << "row,column,system,reference,analytic,sim_mean,sim_ci_low,sim_ci_high\n";
  for (const auto& c : t.cells) {
    out << c.row << ',' << c.column << ',' << c.system << ',' << format_number(c.reference) << ','
        << format_number(c.analytic) << ',' << format_number(c.sim.mean) << ','
        << format_number(c.sim.ci95_low) << ',' << format_number(c.sim.ci95_high) << '\n';
  }
}

}  // namespace aud::experiments

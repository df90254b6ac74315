// Command-line front end: analytic evaluation, simulation, sweeps, the
// reference table at lambda=0.75, mu=1.5, nu=15 and the validation suite.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aud/aud.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitConfig = 2;

struct Options {
  double lambda = 0.75;
  double mu = 1.5;
  std::optional<double> nu;
  std::optional<std::string> m0;  // parsed by hand to reject non-integers
  std::string service = "exp";
  std::string arrival = "exp";
  std::string decision = "poisson";

  std::size_t updates = 200'000;
  double warmup = 0.1;
  std::optional<std::uint64_t> seed;  // from --seed or AUD_SEED
  std::size_t reps = 20;
  std::size_t threads = 0;
  bool random_phase = false;
  std::string trace_path;

  std::string format;  // subcommand-specific default when empty
  std::string out;
  bool quiet = false;
  bool no_timestamp = false;

  // sweep
  std::string preset;
  std::string config_path;
  std::string parameter;
  std::vector<double> grid;
  std::optional<double> from;
  std::optional<double> to;
  std::optional<double> step;
  std::string mode;
  std::string quantity;
  std::vector<std::string> services;
  std::vector<std::string> decisions;
  std::vector<std::string> arrivals;

  // validate
  std::vector<int> criteria;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw aud::ConfigError("cannot open output file '" + o.out + "'");
  f << content;
}

void notice(const Options& o, const std::string& msg) {
  if (!o.quiet) std::cerr << "note: " << msg << '\n';
}

void stamp(const Options& o, aud::Json& j) {
  if (!o.no_timestamp) j["timestamp"] = utc_timestamp();
}

// "key: value" lines, nested keys joined with dots.
void flatten(const aud::Json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
    return;
  }
  os << prefix << ": ";
  if (j.is_array()) {
    bool first = true;
    for (const auto& v : j) {
      os << (first ? "" : ",") << (v.is_string() ? v.get<std::string>() : v.dump());
      first = false;
    }
  } else if (j.is_string()) {
    os << j.get<std::string>();
  } else {
    os << j.dump();
  }
  os << '\n';
}

std::string render(const Options& o, const aud::Json& j) {
  if (o.format == "json") return j.dump(2) + "\n";
  std::ostringstream os;
  flatten(j, "", os);
  return os.str();
}

void require_format(Options& o, std::initializer_list<const char*> allowed, const char* fallback) {
  if (o.format.empty()) o.format = fallback;
  for (const char* a : allowed) {
    if (o.format == a) return;
  }
  throw aud::ConfigError("format '" + o.format + "' not supported by this subcommand");
}

int parse_m0(const std::string& text) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value < 1 || value > 2'000'000'000L) {
    throw aud::ConfigError("--m0 must be a positive integer, got '" + text + "'");
  }
  return static_cast<int>(value);
}

aud::sim::SimConfig sim_config(const Options& o) {
  aud::sim::SimConfig c;
  c.n_updates = o.updates;
  c.warmup_fraction = o.warmup;
  c.seed = o.seed.value_or(aud::sim::kDefaultSeed);
  c.replications = o.reps;
  c.threads = o.threads;
  c.random_phase = o.random_phase;
  c.validate();
  return c;
}

aud::SystemSpec build_system(const Options& o) {
  if (!(o.lambda > 0.0) || !(o.mu > 0.0)) throw aud::ConfigError("--lambda and --mu must be positive");
  const auto decision = aud::parse_decision_kind(o.decision);
  double nu = 0.0;
  if (o.nu) {
    if (!(*o.nu > 0.0)) throw aud::ConfigError("--nu must be positive");
    nu = *o.nu;
  } else if (o.m0) {
    nu = parse_m0(*o.m0) * o.mu;
  } else {
    nu = 10.0 * o.mu;
  }
  return {aud::ArrivalLaw(aud::parse_law_kind(o.arrival), o.lambda),
          aud::ServiceLaw(aud::parse_law_kind(o.service), o.mu), aud::DecisionLaw(decision, nu)};
}

aud::Json system_fields(const aud::SystemSpec& s) {
  return {{"lambda", s.lambda()}, {"mu", s.mu()}, {"nu", s.nu()}, {"rho", s.rho()},
          {"m0", s.nu() / s.mu()}};
}

int run_simulate(Options& o, const aud::SystemSpec& system) {
  require_format(o, {"text", "json"}, "text");
  const auto config = sim_config(o);
  const auto est = aud::sim::estimate(system, config);
  if (!o.trace_path.empty()) {
    std::ofstream f(o.trace_path, std::ios::binary);
    if (!f) throw aud::ConfigError("cannot open trace file '" + o.trace_path + "'");
    aud::write_trace_csv(f, aud::sim::simulate_trace(system, config, 0));
  }
  aud::Json j = aud::to_json(est);
  j["parameters"] = system_fields(system);
  j["warmup_fraction"] = config.warmup_fraction;
  j["random_phase"] = config.random_phase;
  stamp(o, j);
  emit(o, render(o, j));
  return kExitOk;
}

int run_analytic(Options& o) {
  const auto system = build_system(o);
  if (system.decision().is_periodic() && o.nu) {
    notice(o, "--nu with periodic decisions has no closed form; running the simulator");
    return run_simulate(o, system);
  }
  require_format(o, {"text", "json"}, "text");
  if (!system.arrival().is_poisson()) {
    throw aud::ConfigError("closed forms need Poisson arrivals (--arrival exp); use 'simulate' for " +
                           system.kendall());
  }
  aud::Json j = aud::to_json(aud::analytic::evaluate(system));
  j["parameters"] = system_fields(system);
  stamp(o, j);
  emit(o, render(o, j));
  return kExitOk;
}

int run_sweep(Options& o) {
  require_format(o, {"csv", "json"}, "csv");
  const int sources = !o.preset.empty() + !o.config_path.empty() + !o.parameter.empty();
  if (sources != 1) {
    throw aud::ConfigError("sweep needs exactly one of --preset, --config or --parameter");
  }
  aud::experiments::SweepSpec spec;
  if (!o.preset.empty()) {
    spec = aud::experiments::preset(o.preset);
  } else if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) throw aud::ConfigError("cannot read sweep file '" + o.config_path + "'");
    aud::Json j;
    try {
      f >> j;
    } catch (const aud::Json::exception& e) {
      throw aud::ConfigError("sweep file '" + o.config_path + "' is not valid JSON: " + e.what());
    }
    spec = aud::experiments::sweep_spec_from_json(j);
  } else {
    spec.parameter = aud::experiments::parse_sweep_parameter(o.parameter);
    spec.lambda = o.lambda;
    spec.mu = o.mu;
    spec.nu = o.nu;
    if (o.m0) spec.m0 = parse_m0(*o.m0);
    if (!o.grid.empty()) {
      spec.grid = o.grid;
    } else if (o.from && o.to && o.step && *o.step > 0.0) {
      spec.grid = aud::experiments::linear_grid(*o.from, *o.to, *o.step);
    } else {
      throw aud::ConfigError("explicit sweeps need --grid or --from/--to/--step");
    }
    spec.sim = aud::sim::SimConfig{};
    spec.sim.n_updates = o.updates;
    spec.sim.replications = o.reps;
    spec.sim.warmup_fraction = o.warmup;
    spec.sim.random_phase = o.random_phase;
  }
  // Flags given on the command line override the preset or file.
  if (!o.mode.empty()) spec.estimators = aud::experiments::parse_estimators(o.mode);
  if (!o.quantity.empty()) spec.quantity = aud::experiments::parse_quantity(o.quantity);
  if (!o.services.empty()) {
    spec.services.clear();
    for (const auto& s : o.services) spec.services.push_back(aud::parse_law_kind(s));
  }
  if (!o.decisions.empty()) {
    spec.decisions.clear();
    for (const auto& s : o.decisions) spec.decisions.push_back(aud::parse_decision_kind(s));
  }
  if (!o.arrivals.empty()) {
    spec.arrivals.clear();
    for (const auto& s : o.arrivals) spec.arrivals.push_back(aud::parse_law_kind(s));
  }
  if (o.seed) spec.sim.seed = *o.seed;
  spec.sim.threads = o.threads;
  spec.validate();

  const auto rows = aud::experiments::sweep(spec);
  if (o.format == "csv") {
    std::ostringstream os;
    aud::experiments::write_csv(os, rows);
    emit(o, os.str());
  } else {
    aud::Json j = aud::experiments::to_json(spec, rows);
    stamp(o, j);
    emit(o, j.dump(2) + "\n");
  }
  return kExitOk;
}

int run_table1(Options& o) {
  require_format(o, {"text", "csv", "json"}, "text");
  const auto table = aud::experiments::table1(sim_config(o));
  std::ostringstream os;
  if (o.format == "csv") {
    aud::experiments::write_csv(os, table);
  } else if (o.format == "json") {
    aud::Json j = aud::experiments::to_json(table);
    stamp(o, j);
    os << j.dump(2) << '\n';
  } else {
    os << "lambda=0.75 mu=1.5 nu=15\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-38s %-9s %-8s %9s %9s %9s  %s\n", "row", "column", "system",
                  "reference", "analytic", "sim", "sim 95% CI");
    os << line;
    for (const auto& c : table.cells) {
      const std::string a = c.analytic ? aud::validation::detail::fixed(*c.analytic, 4) : "-";
      std::snprintf(line, sizeof line, "%-38s %-9s %-8s %9.4f %9s %9.4f  [%.4f, %.4f]\n",
                    c.row.c_str(), c.column.c_str(), c.system.c_str(), c.reference, a.c_str(),
                    c.sim.mean, c.sim.ci95_low, c.sim.ci95_high);
      os << line;
    }
  }
  emit(o, os.str());
  return kExitOk;
}

int run_validate(Options& o) {
  require_format(o, {"text", "json"}, "text");
  aud::validation::ValidationOptions vo;
  vo.seed = o.seed.value_or(aud::sim::kDefaultSeed);
  vo.threads = o.threads;
  std::vector<int> ids = o.criteria.empty() ? aud::validation::all_criteria() : o.criteria;
  for (int id : ids) {
    if (id < 1 || id > aud::validation::kCriterionCount) {
      throw aud::ConfigError("unknown criterion " + std::to_string(id));
    }
  }
  const auto start = std::chrono::steady_clock::now();
  const auto report = aud::validation::run_validation(vo, ids);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  if (o.format == "json") {
    os << aud::validation::to_json(report).dump(2) << '\n';
  } else {
    aud::validation::write_text(os, report);
  }
  emit(o, os.str());
  if (!o.quiet) std::cerr << "validation finished in " << std::lround(seconds) << " s\n";
  return report.passed() ? kExitOk : kExitValidationFailed;
}

void add_system_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--lambda", o.lambda, "update arrival rate");
  cmd->add_option("--mu", o.mu, "service rate");
  auto* nu = cmd->add_option("--nu", o.nu, "decision rate");
  auto* m0 = cmd->add_option("--m0", o.m0, "decision rate as an integer multiple of mu");
  nu->excludes(m0);
  cmd->add_option("--service", o.service, "service law: exp|uniform|det");
  cmd->add_option("--arrival", o.arrival, "inter-arrival law: exp|uniform|det");
  cmd->add_option("--decision", o.decision, "decision process: poisson|periodic");
}

void add_sim_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--updates", o.updates, "updates per replication");
  cmd->add_option("--warmup", o.warmup, "fraction of updates discarded as warm-up");
  cmd->add_option("--reps", o.reps, "independent replications");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--random-phase", o.random_phase, "random offset for the periodic decision grid");
}

void add_common_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "master seed")->envname("AUD_SEED");
  cmd->add_option("--format", o.format, "output format: text|json|csv");
  cmd->add_option("--out", o.out, "write output to this file instead of stdout");
  cmd->add_flag("--quiet", o.quiet, "suppress notices on stderr");
  cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp field");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-upon-Decisions for FCFS M/G/1 update-and-decide queues"};
  app.set_version_flag("--version", std::string(aud::kVersion));
  app.require_subcommand(1);
  Options o;

  auto* analytic = app.add_subcommand("analytic", "closed-form average AuD and missing probability");
  add_system_flags(analytic, o);
  add_sim_flags(analytic, o);
  add_common_flags(analytic, o);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the same quantities");
  add_system_flags(simulate, o);
  add_sim_flags(simulate, o);
  add_common_flags(simulate, o);
  simulate->add_option("--trace", o.trace_path, "write replication 0 as a trace CSV");

  auto* sweep = app.add_subcommand("sweep", "one-parameter sweep from a preset, a file or flags");
  add_system_flags(sweep, o);
  add_sim_flags(sweep, o);
  add_common_flags(sweep, o);
  sweep->add_option("--preset", o.preset, "fig3a|fig3b|fig4|fig5a|fig5b|fig6|fig7");
  sweep->add_option("--config", o.config_path, "sweep description (JSON)");
  sweep->add_option("--parameter", o.parameter, "swept parameter: lambda|mu|m0|nu");
  sweep->add_option("--grid", o.grid, "explicit grid values")->delimiter(',');
  sweep->add_option("--from", o.from, "first grid value");
  sweep->add_option("--to", o.to, "last grid value");
  sweep->add_option("--step", o.step, "grid spacing");
  sweep->add_option("--mode", o.mode, "analytic|simulation|both");
  sweep->add_option("--quantity", o.quantity, "aud|p_mis");
  sweep->add_option("--services", o.services, "service laws")->delimiter(',');
  sweep->add_option("--decisions", o.decisions, "decision processes")->delimiter(',');
  sweep->add_option("--arrivals", o.arrivals, "arrival laws")->delimiter(',');

  auto* table1 = app.add_subcommand("table1", "the 4 x 3 table at lambda=0.75, mu=1.5, nu=15");
  add_sim_flags(table1, o);
  add_common_flags(table1, o);

  auto* validate = app.add_subcommand("validate", "run the acceptance criteria");
  add_common_flags(validate, o);
  validate->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  validate->add_option("--criterion", o.criteria, "run only these criteria (1-10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*analytic) return run_analytic(o);
    if (*simulate) return run_simulate(o, build_system(o));
    if (*sweep) return run_sweep(o);
    if (*table1) return run_table1(o);
    if (*validate) return run_validate(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

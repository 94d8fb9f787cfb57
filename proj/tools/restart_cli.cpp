// restart: classify lifetime laws and compute their restart transforms.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "restart/classify.hpp"
#include "restart/conjecture.hpp"
#include "restart/error.hpp"
#include "restart/io.hpp"
#include "restart/numeric.hpp"
#include "restart/optimize.hpp"
#include "restart/reset.hpp"
#include "restart/simulate.hpp"

#ifndef RESTART_VERSION
#define RESTART_VERSION "0.0.0"
#endif

using namespace restart;

namespace {

constexpr int kExitInconclusive = 2;
constexpr int kExitCensored = 3;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitSoftware = 70;
constexpr int kExitIo = 74;

struct Options {
  std::string format = "json";
  std::string output;
  std::string spec_path;
  std::optional<double> shape, rate, offset, level;
  std::string reset;
  int branching = 1;
  bool single = false;

  // classify
  double epsilon = 0.0;
  std::vector<int> lfold = {2, 3};
  std::vector<double> mu;
  bool strict = false;
  std::size_t pair_points = 140, t_points = 160, r_points = 240;

  // grids
  std::vector<double> grid;
  double t_max = 0.0;
  std::size_t points = 201;

  // simulate / transform by Monte Carlo
  std::uint64_t seed = 42;
  std::size_t replicates = 100000;
  std::size_t max_cycles = 0;
  std::size_t chunks = 1;
  bool direct = false;

  // optimize
  double mu_lo = 0.0, mu_hi = 0.0;
  std::size_t curve_points = 400;
};

Json load_spec_doc(const Options& o) {
  Json doc = read_json_file(o.spec_path);
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "spec must be a JSON object");
  const std::pair<const char*, const std::optional<double>*> overrides[] = {
      {"shape", &o.shape}, {"rate", &o.rate}, {"offset", &o.offset}, {"level", &o.level}};
  for (auto [key, value] : overrides) {
    if (*value) doc["params"][key] = **value;
  }
  return doc;
}

Json config_echo(const std::string& command, const Options& o, const Json& spec) {
  Json c = {{"command", command}, {"spec", spec}, {"format", o.format}};
  if (!o.reset.empty()) c["reset"] = o.reset;
  if (command == "classify") {
    c["epsilon"] = o.epsilon;
    c["lfold"] = o.lfold;
    c["mu"] = o.mu;
    c["strict"] = o.strict;
    c["points"] = {{"pair", o.pair_points}, {"t", o.t_points}, {"r", o.r_points}};
  }
  if (command == "transform" || command == "simulate") {
    c["branching"] = o.branching;
    c["single"] = o.single;
  }
  if (command == "transform" || command == "probe") {
    c["grid"] = o.grid;
    c["t_max"] = o.t_max;
    c["points"] = o.points;
  }
  if (command == "simulate" || command == "transform") {
    c["seed"] = o.seed;
    c["replicates"] = o.replicates;
    c["max_cycles"] = o.max_cycles;
    c["direct"] = o.direct;
  }
  if (command == "simulate") c["probes"] = o.grid;
  if (command == "optimize") {
    c["mu_lo"] = o.mu_lo;
    c["mu_hi"] = o.mu_hi;
    c["points"] = o.curve_points;
  }
  if (command == "probe") c["l"] = o.branching;
  return c;
}

Json envelope(const Json& config, Json result) {
  return {{"tool", "restart"}, {"version", RESTART_VERSION}, {"config", config}, {"result", std::move(result)}};
}

std::string csv_banner(const Json& config) {
  return "# restart " + std::string(RESTART_VERSION) + " " + config.dump() + "\n";
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void finish() {
    out().flush();
    if (!out()) throw Error(ErrorCode::Io, "write failed");
  }

 private:
  std::ofstream file_;
};

std::vector<double> t_grid_for(const Options& o, const Distribution& law) {
  if (!o.grid.empty()) return o.grid;
  const double top = o.t_max > 0.0 ? o.t_max : 10.0 * law.scale();
  return linear_grid(0.0, top, std::max<std::size_t>(o.points, 2));
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

// ---- classify ----

void human_classify(std::ostream& out, const ClassificationReport& r) {
  static const char* rows[] = {"reset", "deterministic_reset", "exp_reset", "mean", "deterministic_mean", "exp_mean"};
  out << "law: " << r.law << "\nepsilon: " << r.epsilon << "\nexponential: " << (r.exponential ? "yes" : "no")
      << "\n\n";
  out << std::left << std::setw(22) << "condition" << std::setw(14) << "no_bigger" << std::setw(14) << "no_smaller"
      << "invariant\n";
  for (const char* row : rows) {
    out << std::setw(22) << row;
    for (const char* col : {"no_bigger_", "no_smaller_", "invariant_"}) {
      out << std::setw(14) << to_string(r.at(std::string(col) + row).verdict);
    }
    out << "\n";
  }
  out << "\n";
  for (const auto& c : r.checks) {
    if (c.name.rfind("lfold_", 0) == 0 || c.name == "second_order") {
      out << std::setw(36) << c.name << to_string(c.verdict) << "\n";
    }
  }
  out << "\nworst margins:\n";
  for (const auto& c : r.checks) {
    out << "  " << std::setw(36) << c.name << fmt(c.margin);
    if (!c.witness.empty()) {
      out << " at (";
      for (std::size_t i = 0; i < c.witness.size(); ++i) out << (i ? ", " : "") << fmt(c.witness[i]);
      out << ")";
    }
    out << "\n";
  }
}

int cmd_classify(const Options& o) {
  const Json doc = load_spec_doc(o);
  const Distribution law(spec_from_json(doc));
  ClassifyConfig cfg;
  cfg.epsilon = o.epsilon;
  cfg.branching = o.lfold;
  cfg.mu_grid = o.mu;
  cfg.pair_points = o.pair_points;
  cfg.t_points = o.t_points;
  cfg.r_points = o.r_points;
  const auto report = classify(law, cfg);
  const Json config = config_echo("classify", o, spec_to_json(law.spec()));

  Sink sink(o.output);
  if (o.format == "human") {
    sink.out() << "restart " << RESTART_VERSION << "\nconfig: " << config.dump() << "\n";
    human_classify(sink.out(), report);
  } else if (o.format == "csv") {
    sink.out() << csv_banner(config) << "check,verdict,margin,error\n";
    for (const auto& c : report.checks) {
      sink.out() << c.name << "," << to_string(c.verdict) << "," << format_number(c.margin) << ","
                 << format_number(c.error) << "\n";
    }
  } else {
    sink.out() << envelope(config, to_json(report)).dump(2) << "\n";
  }
  sink.finish();
  return o.strict && report.any_inconclusive() ? kExitInconclusive : 0;
}

// ---- transform ----

int cmd_transform(const Options& o) {
  const Json doc = load_spec_doc(o);
  const Distribution law(spec_from_json(doc));
  const ResetLaw reset = parse_reset(o.reset);
  auto grid = t_grid_for(o, law);
  grid.push_back(0.0);
  sort_unique(grid, 0.0);
  std::erase_if(grid, [](double t) { return !(t >= 0.0) || !std::isfinite(t); });

  TailCurve curve;
  curve.mode = Interpolation::Linear;
  curve.grid = grid;
  std::vector<double> se;
  std::string method;
  if (o.single) {
    method = "single_reset";
    for (double t : grid) curve.values.push_back(single_reset_tail(law, reset, t));
  } else if (o.branching == 1) {
    method = reset.kind == ResetLaw::Kind::Deterministic ? "closed_form" : "renewal_solver";
    curve = reset_tail(law, reset, grid);
  } else if (reset.kind == ResetLaw::Kind::Deterministic) {
    method = "closed_form";
    for (double t : grid) curve.values.push_back(branching_deterministic_tail(law, reset.parameter, o.branching, t));
  } else {
    // No closed form for branching under random resets: estimate by simulation.
    method = "monte_carlo";
    SimulationConfig sc;
    sc.replicates = o.replicates;
    sc.seed = o.seed;
    sc.max_cycles = o.max_cycles;
    sc.parallel_chunks = o.chunks;
    sc.direct_branching = o.direct;
    sc.probe_times = grid;
    const auto sim = simulate_branching(law, reset, o.branching, sc);
    for (const auto& e : sim.tail) {
      curve.values.push_back(e.value);
      se.push_back(e.standard_error);
    }
    curve.values.front() = law.tail(0.0);
  }
  for (std::size_t i = 1; i < curve.values.size(); ++i) {
    curve.values[i] = std::min(curve.values[i], curve.values[i - 1]);
  }

  std::vector<double> original;
  for (double t : curve.grid) original.push_back(law.tail(t));
  Json config = config_echo("transform", o, spec_to_json(law.spec()));
  config["method"] = method;

  Sink sink(o.output);
  if (o.format == "csv") {
    sink.out() << csv_banner(config);
    std::vector<std::string> header = {"t", "tail_original", "tail_transformed"};
    std::vector<std::vector<double>> cols = {curve.grid, original, curve.values};
    if (!se.empty()) {
      header.push_back("standard_error");
      cols.push_back(se);
    }
    write_csv(sink.out(), header, cols);
  } else if (o.format == "human") {
    sink.out() << "restart " << RESTART_VERSION << "\nconfig: " << config.dump() << "\n";
    sink.out() << std::left << std::setw(16) << "t" << std::setw(20) << "original" << "transformed\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      sink.out() << std::setw(16) << fmt(curve.grid[i]) << std::setw(20) << fmt(original[i]) << fmt(curve.values[i])
                 << "\n";
    }
  } else {
    // The document is itself a tabulated spec, so it can be fed back in.
    Json out = spec_to_json(DistributionSpec{Tabulated{curve}, 0.0});
    out["tool"] = "restart";
    out["version"] = RESTART_VERSION;
    out["config"] = config;
    out["tail_original"] = original;
    if (!se.empty()) out["standard_error"] = se;
    sink.out() << out.dump(2) << "\n";
  }
  sink.finish();
  return 0;
}

// ---- simulate ----

void emit_simulation(const Options& o, const Json& config, const SimulationResult& r) {
  Sink sink(o.output);
  if (o.format == "csv") {
    sink.out() << csv_banner(config);
    std::vector<double> t, v, s;
    for (const auto& e : r.tail) {
      t.push_back(e.t);
      v.push_back(e.value);
      s.push_back(e.standard_error);
    }
    write_csv(sink.out(), {"t", "tail", "standard_error"}, {t, v, s});
  } else if (o.format == "human") {
    sink.out() << "restart " << RESTART_VERSION << "\nconfig: " << config.dump() << "\n";
    sink.out() << "mean: " << fmt(r.mean) << " +- " << fmt(r.mean_standard_error) << "\n";
    sink.out() << "replicates: " << r.replicates << "  censored: " << r.censored << " ("
               << fmt(r.censored_fraction) << ")  max_cycles: " << r.max_cycles << "\n";
    for (const auto& e : r.tail) {
      sink.out() << "  P(T > " << fmt(e.t) << ") = " << fmt(e.value) << " +- " << fmt(e.standard_error) << "\n";
    }
  } else {
    sink.out() << envelope(config, to_json(r)).dump(2) << "\n";
  }
  sink.finish();
}

int cmd_simulate(const Options& o) {
  const Json doc = load_spec_doc(o);
  const Distribution law(spec_from_json(doc));
  const ResetLaw reset = parse_reset(o.reset);
  SimulationConfig sc;
  sc.replicates = o.replicates;
  sc.seed = o.seed;
  sc.max_cycles = o.max_cycles;
  sc.parallel_chunks = o.chunks;
  sc.direct_branching = o.direct;
  sc.probe_times = o.grid;
  if (sc.probe_times.empty()) {
    for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) sc.probe_times.push_back(f * law.scale());
  }
  Options echo = o;
  echo.grid = sc.probe_times;
  const Json config = config_echo("simulate", echo, spec_to_json(law.spec()));
  try {
    const auto r = o.single ? simulate_single_reset(law, reset, sc) : simulate_branching(law, reset, o.branching, sc);
    emit_simulation(o, config, r);
  } catch (const CensoringError& e) {
    Json partial = config;
    partial["error"] = e.what();
    emit_simulation(o, partial, e.partial());
    std::cerr << "restart: " << e.what() << "\n";
    return kExitCensored;
  }
  return 0;
}

// ---- optimize ----

int cmd_optimize(const Options& o) {
  const Json doc = load_spec_doc(o);
  const Distribution law(spec_from_json(doc));
  ExtremalConfig ec;
  ec.mu_lo = o.mu_lo;
  ec.mu_hi = o.mu_hi;
  ec.points = o.curve_points;
  ec.r_grid = o.grid;
  const auto r = extremal_reset_mean(law, ec);
  const Json config = config_echo("optimize", o, spec_to_json(law.spec()));

  Sink sink(o.output);
  if (o.format == "csv") {
    sink.out() << csv_banner(config);
    write_csv(sink.out(), {"r", "mean"}, {r.r_grid, r.curve});
  } else if (o.format == "human") {
    sink.out() << "restart " << RESTART_VERSION << "\nconfig: " << config.dump() << "\n";
    sink.out() << "m0: " << fmt(r.m0) << "\n";
    sink.out() << "sup: " << fmt(r.sup) << " at r = " << fmt(r.sup_at) << (r.sup_diverges ? " (diverges)" : "")
               << "\n";
    sink.out() << "inf: " << fmt(r.inf) << " at r = " << fmt(r.inf_at) << "\n";
    sink.out() << "best deterministic: r = " << fmt(r.best_deterministic_r)
               << ", mean = " << fmt(r.best_deterministic_mean) << "\n";
    sink.out() << "best exponential: rate = " << fmt(r.best_exponential.rate)
               << ", mean = " << fmt(r.best_exponential.mean)
               << (r.best_exponential.improves ? "" : " (no improvement)") << "\n";
    if (r.restart_helps()) sink.out() << "restart helps: some reset lowers the mean\n";
    if (r.restart_harmful()) sink.out() << "restart harmful: some reset raises the mean\n";
  } else {
    sink.out() << envelope(config, to_json(r)).dump(2) << "\n";
  }
  sink.finish();
  return 0;
}

// ---- probe ----

int cmd_probe(const Options& o) {
  const Json doc = load_spec_doc(o);
  const Distribution law(spec_from_json(doc));
  auto grid = t_grid_for(o, law);
  const auto r = lfold_invariance_residual(law, o.branching, grid);
  const Json config = config_echo("probe", o, spec_to_json(law.spec()));

  Sink sink(o.output);
  if (o.format == "csv") {
    sink.out() << csv_banner(config);
    write_csv(sink.out(), {"t", "residual"}, {r.t, r.residual});
  } else if (o.format == "human") {
    sink.out() << "restart " << RESTART_VERSION << "\nconfig: " << config.dump() << "\n";
    sink.out() << "l = " << r.l << "  sup |residual| = " << fmt(r.sup_norm) << " at t = " << fmt(r.argsup)
               << (r.candidate ? "" : "  (law has atoms or F(0) > 0; not a candidate)") << "\n";
  } else {
    sink.out() << envelope(config, to_json(r)).dump(2) << "\n";
  }
  sink.finish();
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return kExitIo;
    case ErrorCode::Parse:
    case ErrorCode::ZeroAtOrigin:
    case ErrorCode::DegenerateAtZero:
    case ErrorCode::NonMonotone:
    case ErrorCode::InvalidParameter:
    case ErrorCode::InvalidResetLaw:
    case ErrorCode::InvalidPeriod:
    case ErrorCode::InvalidMrl: return kExitData;
    case ErrorCode::ExcessiveCensoring: return kExitCensored;
    default: return kExitSoftware;
  }
}

void add_spec(CLI::App* sub, Options& o) {
  sub->add_option("--spec", o.spec_path, "JSON spec file")->required();
  sub->add_option("--shape", o.shape, "override params.shape");
  sub->add_option("--rate", o.rate, "override params.rate");
  sub->add_option("--offset", o.offset, "override params.offset");
  sub->add_option("--level", o.level, "override params.level");
}

void add_grid(CLI::App* sub, Options& o) {
  sub->add_option("--grid", o.grid, "explicit t grid")->delimiter(',');
  sub->add_option("--t-max", o.t_max, "grid end (default 10 x law scale)");
  sub->add_option("--points", o.points, "grid size");
}

void add_simulation(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "base seed; replicate i uses a derived stream");
  sub->add_option("--replicates", o.replicates, "number of replicates")->check(CLI::PositiveNumber);
  sub->add_option("--max-cycles", o.max_cycles, "0 sizes the cap automatically");
  sub->add_option("--chunks", o.chunks, "worker threads; output does not depend on it");
  sub->add_flag("--direct", o.direct, "draw every branching copy");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifetime laws under restart: classification, transforms, simulation, extremal means"};
  app.set_version_flag("--version", RESTART_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "json, csv or human")->check(CLI::IsMember({"json", "csv", "human"}));
  app.add_option("-o,--output", o.output, "output file (default stdout)");

  auto* classify_cmd = app.add_subcommand("classify", "run every ordering check on a law");
  add_spec(classify_cmd, o);
  classify_cmd->add_option("--epsilon", o.epsilon, "0 picks the family default");
  classify_cmd->add_option("--lfold", o.lfold, "branching factors for the l-fold checks")->delimiter(',');
  classify_cmd->add_option("--mu", o.mu, "rates for the exponential mean condition")->delimiter(',');
  classify_cmd->add_option("--pair-points", o.pair_points, "points per axis of the (x, y) grid");
  classify_cmd->add_option("--t-points", o.t_points, "points of the t grid");
  classify_cmd->add_option("--r-points", o.r_points, "points of the r grid for mean checks");
  classify_cmd->add_flag("--strict", o.strict, "exit 2 when any check is inconclusive");

  auto* transform_cmd = app.add_subcommand("transform", "tail of the law under restart");
  add_spec(transform_cmd, o);
  transform_cmd->add_option("--reset", o.reset, "det:<r>, exp:<rate> or file:<spec>")->required();
  transform_cmd->add_option("--branching", o.branching, "l-fold branching")->check(CLI::PositiveNumber);
  transform_cmd->add_flag("--single", o.single, "one reset opportunity only");
  add_grid(transform_cmd, o);
  add_simulation(transform_cmd, o);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of the restarted law");
  add_spec(simulate_cmd, o);
  simulate_cmd->add_option("--reset", o.reset, "det:<r>, exp:<rate> or file:<spec>")->required();
  simulate_cmd->add_option("--branching", o.branching, "l-fold branching")->check(CLI::PositiveNumber);
  simulate_cmd->add_flag("--single", o.single, "one reset opportunity only");
  simulate_cmd->add_option("--probe", o.grid, "probe times for tail estimates")->delimiter(',');
  add_simulation(simulate_cmd, o);

  auto* optimize_cmd = app.add_subcommand("optimize", "sup and inf of the mean over reset laws");
  add_spec(optimize_cmd, o);
  optimize_cmd->add_option("--mu-lo", o.mu_lo, "lower end of the rate bracket");
  optimize_cmd->add_option("--mu-hi", o.mu_hi, "upper end of the rate bracket");
  optimize_cmd->add_option("--grid", o.grid, "explicit r grid")->delimiter(',');
  optimize_cmd->add_option("--points", o.curve_points, "r grid size");

  auto* probe_cmd = app.add_subcommand("probe", "residual of the l-fold exponential invariance equation");
  add_spec(probe_cmd, o);
  probe_cmd->add_option("-l,--branching", o.branching, "l")->check(CLI::PositiveNumber);
  add_grid(probe_cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(o);
    if (*transform_cmd) return cmd_transform(o);
    if (*simulate_cmd) return cmd_simulate(o);
    if (*optimize_cmd) return cmd_optimize(o);
    if (*probe_cmd) return cmd_probe(o);
  } catch (const Error& e) {
    std::cerr << "restart: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "restart: " << e.what() << "\n";
    return kExitSoftware;
  }
  return kExitUsage;
}

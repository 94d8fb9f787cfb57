#include "restart/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "restart/error.hpp"
#include "restart/numeric.hpp"

namespace restart {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Parse, what); }

double get_number(const Json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  bad(std::string("field '") + key + "' must be a number");
}

double get_number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

std::vector<double> get_vector(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) bad(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const Json& v : j.at(key)) {
    if (!v.is_number()) bad(std::string("field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Interpolation parse_interpolation(const std::string& s) {
  if (s == "step") return Interpolation::Step;
  if (s == "linear") return Interpolation::Linear;
  if (s == "log-linear" || s == "log_linear") return Interpolation::LogLinear;
  bad("unknown interpolation '" + s + "'");
}

// Tabulated fields may sit at the top level or under "params".
const Json& table_fields(const Json& doc) {
  return doc.contains("grid") || !doc.contains("params") ? doc : doc.at("params");
}

struct ToJson {
  Json operator()(const Exponential& f) const { return {{"family", "exponential"}, {"params", {{"rate", f.rate}}}}; }
  Json operator()(const Weibull& f) const { return {{"family", "weibull"}, {"params", {{"shape", f.shape}}}}; }
  Json operator()(const ShiftedParetoSquare& f) const {
    return {{"family", "shifted_pareto_square"}, {"params", {{"offset", f.offset}}}};
  }
  Json operator()(const PiecewiseConstantTail& f) const {
    return {{"family", "piecewise_constant"}, {"params", {{"breakpoints", f.breakpoints}, {"levels", f.levels}}}};
  }
  Json operator()(const PiecewiseExpTail& f) const {
    Json segs = Json::array();
    for (const auto& s : f.segments) segs.push_back({{"start", s.start}, {"intercept", s.intercept}, {"rate", s.rate}});
    return {{"family", "piecewise_exp"}, {"params", {{"segments", segs}}}};
  }
  Json operator()(const LevyFirstPassage& f) const {
    return {{"family", "levy_first_passage"}, {"params", {{"level", f.level}}}};
  }
  Json operator()(const Tabulated& f) const {
    Json j = {{"family", "tabulated"},
              {"grid", f.curve.grid},
              {"values", f.curve.values},
              {"interpolation", to_string(f.curve.mode)}};
    if (f.curve.terminal_rate != 0.0) j["terminal_rate"] = f.curve.terminal_rate;
    return j;
  }
  Json operator()(const FromMrl& f) const {
    Json j = {{"family", "mrl"},
              {"grid", f.curve.grid},
              {"values", f.curve.values},
              {"m0", number(f.curve.m0)},
              {"terminal", f.curve.terminal == MrlTerminal::Linear ? "linear" : "constant"}};
    if (!f.curve.slopes.empty()) j["slopes"] = f.curve.slopes;
    if (f.curve.terminal_slope != 0.0) j["terminal_slope"] = f.curve.terminal_slope;
    return j;
  }
};

}  // namespace

DistributionSpec spec_from_json(const Json& doc) {
  if (!doc.is_object()) bad("spec must be a JSON object");
  if (!doc.contains("family") || !doc.at("family").is_string()) bad("spec needs a string 'family'");
  const auto family = doc.at("family").get<std::string>();
  const Json params = doc.contains("params") ? doc.at("params") : Json::object();
  if (!params.is_object()) bad("'params' must be an object");

  DistributionSpec spec;
  spec.defect = get_number_or(doc, "defect", 0.0);
  if (family == "exponential") {
    spec.family = Exponential{get_number_or(params, "rate", 1.0)};
  } else if (family == "weibull") {
    spec.family = Weibull{get_number(params, "shape")};
  } else if (family == "shifted_pareto_square") {
    spec.family = ShiftedParetoSquare{get_number(params, "offset")};
  } else if (family == "piecewise_constant") {
    spec.family = PiecewiseConstantTail{get_vector(params, "breakpoints"), get_vector(params, "levels")};
  } else if (family == "piecewise_exp") {
    if (!params.contains("segments") || !params.at("segments").is_array()) bad("'segments' must be an array");
    PiecewiseExpTail f;
    for (const Json& s : params.at("segments")) {
      if (!s.is_object()) bad("each segment must be an object");
      f.segments.push_back({get_number(s, "start"), get_number(s, "intercept"), get_number(s, "rate")});
    }
    spec.family = std::move(f);
  } else if (family == "levy_first_passage" || family == "levy") {
    spec.family = LevyFirstPassage{get_number_or(params, "level", 1.0)};
  } else if (family == "tabulated") {
    const Json& t = table_fields(doc);
    TailCurve c;
    c.grid = get_vector(t, "grid");
    c.values = get_vector(t, "values");
    c.mode = parse_interpolation(t.value("interpolation", std::string("step")));
    c.terminal_rate = get_number_or(t, "terminal_rate", 0.0);
    spec.family = Tabulated{std::move(c)};
  } else if (family == "mrl") {
    const Json& t = table_fields(doc);
    MrlCurve c;
    c.grid = get_vector(t, "grid");
    c.values = get_vector(t, "values");
    if (t.contains("slopes")) c.slopes = get_vector(t, "slopes");
    c.m0 = get_number(t, "m0");
    const auto terminal = t.value("terminal", std::string("constant"));
    if (terminal == "linear") {
      c.terminal = MrlTerminal::Linear;
    } else if (terminal != "constant") {
      bad("unknown terminal '" + terminal + "'");
    }
    c.terminal_slope = get_number_or(t, "terminal_slope", 0.0);
    spec.family = FromMrl{std::move(c)};
  } else {
    bad("unknown family '" + family + "'");
  }
  return spec;
}

Json spec_to_json(const DistributionSpec& spec) {
  Json j = std::visit(ToJson{}, spec.family);
  if (spec.defect != 0.0) j["defect"] = spec.defect;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    bad("'" + path + "': " + e.what());
  }
}

DistributionSpec read_spec_file(const std::string& path) { return spec_from_json(read_json_file(path)); }

ResetLaw parse_reset(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos) bad("reset descriptor needs a kind, e.g. det:1");
  const auto kind = descriptor.substr(0, colon);
  const auto arg = std::string(descriptor.substr(colon + 1));
  if (kind == "file") return ResetLaw::general(read_spec_file(arg));
  double value = 0.0;
  const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (res.ec != std::errc() || res.ptr != arg.data() + arg.size()) bad("bad number in reset descriptor '" + arg + "'");
  if (kind == "det") return ResetLaw::deterministic(value);
  if (kind == "exp") return ResetLaw::exponential(value);
  bad("unknown reset kind '" + std::string(kind) + "'");
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

Json to_json(const Check& c) {
  Json j = {{"name", c.name},
            {"verdict", to_string(c.verdict)},
            {"margin", number(c.margin)},
            {"error", number(c.error)},
            {"witness", numbers(c.witness)},
            {"evaluated", c.evaluated}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const ClassificationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  Json by_mu = Json::array();
  for (std::size_t i = 0; i < r.grids.mu_grid.size(); ++i) {
    Json row = {{"mu", number(r.grids.mu_grid[i])}};
    if (i < r.exp_mean_no_bigger_by_mu.size()) row["no_bigger"] = to_json(r.exp_mean_no_bigger_by_mu[i]);
    if (i < r.exp_mean_no_smaller_by_mu.size()) row["no_smaller"] = to_json(r.exp_mean_no_smaller_by_mu[i]);
    by_mu.push_back(row);
  }
  return {{"law", r.law},
          {"epsilon", r.epsilon},
          {"exponential", r.exponential},
          {"horizon", number(r.grids.horizon)},
          {"grid_sizes",
           {{"pair_axis", r.grids.pair_axis.size()},
            {"t_grid", r.grids.t_grid.size()},
            {"r_grid", r.grids.r_grid.size()},
            {"mu_grid", r.grids.mu_grid.size()}}},
          {"checks", checks},
          {"exp_mean_by_mu", by_mu}};
}

Json to_json(const SimulationResult& s) {
  Json tail = Json::array();
  for (const auto& e : s.tail) {
    tail.push_back({{"t", number(e.t)}, {"value", e.value}, {"standard_error", e.standard_error}});
  }
  return {{"mean", number(s.mean)},
          {"mean_standard_error", number(s.mean_standard_error)},
          {"replicates", s.replicates},
          {"censored", s.censored},
          {"censored_fraction", s.censored_fraction},
          {"max_cycles", s.max_cycles},
          {"cycle_histogram", s.cycle_histogram},
          {"tail", tail}};
}

Json to_json(const ExtremalReport& r) {
  return {{"m0", number(r.m0)},
          {"sup", number(r.sup)},
          {"inf", number(r.inf)},
          {"sup_at", number(r.sup_at)},
          {"inf_at", number(r.inf_at)},
          {"sup_diverges", r.sup_diverges},
          {"limit_at_zero", number(r.limit_at_zero)},
          {"limit_at_infinity", number(r.limit_at_infinity)},
          {"restart_helps", r.restart_helps()},
          {"restart_harmful", r.restart_harmful()},
          {"best_deterministic", {{"r", number(r.best_deterministic_r)}, {"mean", number(r.best_deterministic_mean)}}},
          {"best_exponential",
           {{"rate", number(r.best_exponential.rate)},
            {"mean", number(r.best_exponential.mean)},
            {"improves", r.best_exponential.improves}}},
          {"curve", {{"r", numbers(r.r_grid)}, {"mean", numbers(r.curve)}}}};
}

Json to_json(const InvarianceResidual& r) {
  return {{"l", r.l},
          {"candidate", r.candidate},
          {"sup_norm", number(r.sup_norm)},
          {"argsup", number(r.argsup)},
          {"t", numbers(r.t)},
          {"residual", numbers(r.residual)}};
}

Json to_json(const MomentTransfer& m) {
  return {{"original", number(m.original)},
          {"transformed", number(m.transformed)},
          {"error", number(m.error)},
          {"finite_transfers", m.finite_transfers}};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ',';
      if (r < columns[c].size()) out << format_number(columns[c][r]);
    }
    out << '\n';
  }
}

}  // namespace restart

#include "restart/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

#include "restart/error.hpp"
#include "restart/mrl.hpp"
#include "restart/numeric.hpp"

namespace restart {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kRound = 1e-14;

struct Sample {
  double margin = -kInf;
  double error = 0.0;
  std::vector<double> at;
};

// Worst sample wins; ties keep the earliest index so results do not depend on threading.
Check reduce(std::string name, const std::vector<Sample>& samples, double epsilon) {
  Check c;
  c.name = std::move(name);
  c.evaluated = samples.size();
  c.margin = -kInf;
  bool nan_seen = false;
  for (const auto& s : samples) {
    if (std::isnan(s.margin)) {
      nan_seen = true;
      continue;
    }
    if (s.margin > c.margin) {
      c.margin = s.margin;
      c.error = s.error;
      c.witness = s.at;
    }
  }
  if (samples.empty()) {
    c.verdict = Verdict::Undefined;
    c.margin = kNaN;
    c.note = "empty grid";
    return c;
  }
  c.verdict = decide(c.margin, c.error, epsilon);
  if (nan_seen && c.verdict == Verdict::Holds) {
    c.verdict = Verdict::Inconclusive;
    c.note = "non-finite values on the grid";
  }
  return c;
}

Check undefined(std::string name, std::string note) {
  Check c;
  c.name = std::move(name);
  c.verdict = Verdict::Undefined;
  c.margin = kNaN;
  c.note = std::move(note);
  return c;
}

double hazard(const Distribution& law, double t) { return -law.log_tail(t); }

// log F̄(x) + log F̄(y) - log F̄(x + y) with the cancellation routed through hazard_increment.
// NaN never escapes: when F̄(x) or F̄(y) vanishes both sides are 0.
double pair_log_excess(const Distribution& law, double x, double y, double l) {
  const double hx = hazard(law, x);
  const double hy = hazard(law, y);
  if (std::isinf(hx) || std::isinf(hy)) return 0.0;
  const double inc = law.hazard_increment(x, y);
  if (std::isinf(inc)) return kInf;
  return inc - l * hy;
}

double log_margin(double delta) {
  if (std::isnan(delta)) return 0.0;
  return log_relative_margin(delta, 0.0);
}

bool has_unit_origin(const Distribution& law) { return law.tail(0.0) >= 1.0; }

void short_circuit_origin(const Distribution& law, Check& c) {
  if (has_unit_origin(law)) return;
  c.note = "F̄(0) < 1 rules out the no-smaller direction";
  if (c.verdict != Verdict::Fails) {
    c.verdict = Verdict::Fails;
    c.witness = {0.0};
    c.margin = std::max(c.margin, 1.0 - law.tail(0.0));
  }
}

Check pair_check(std::string name, const Distribution& law, std::span<const double> xs,
                 std::span<const double> ys, double epsilon, double l, int direction) {
  std::vector<Sample> out(xs.size() * ys.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double y = ys[j];
      const double d = pair_log_excess(law, x, y, l);
      Sample& s = out[i * ys.size() + j];
      s.at = {x, y};
      if (direction == 0) {
        s.margin = std::isnan(d) ? kNaN : std::abs(log_margin(d));
      } else {
        s.margin = log_margin(direction > 0 ? d : -d);
      }
      const double scale = std::abs(hazard(law, x)) + l * std::abs(hazard(law, y));
      s.error = kRound * (1.0 + (std::isfinite(scale) ? scale : 0.0));
    }
  });
  return reduce(std::move(name), out, epsilon);
}

std::vector<double> positive(std::span<const double> xs) {
  std::vector<double> out;
  for (double x : xs) {
    if (x > 0.0 && std::isfinite(x)) out.push_back(x);
  }
  return out;
}

// log ∫_0^1 F̄(tv) F̄(t(1-v))^l dv - log F̄(t), split at v = 1/2 so the short side is always exact.
Integral log_exp_reset_ratio(const Distribution& law, double t, double l) {
  const double ht = hazard(law, t);
  // g(a, b) = log F̄(a) + l log F̄(b) - log F̄(a + b), with b the long side in `first`.
  auto first = [&](double v) {  // u = t v short, rest long
    const double a = t * v;
    const double b = t - a;
    const double ha = hazard(law, a);
    const double hb = hazard(law, b);
    if (std::isinf(ha) || std::isinf(hb)) return -kInf;
    if (std::isinf(ht)) return kInf;
    return -ha + law.hazard_increment(b, a) - (l - 1.0) * hb;
  };
  auto second = [&](double w) {  // t - u = t w short
    const double b = t * w;
    const double a = t - b;
    const double ha = hazard(law, a);
    const double hb = hazard(law, b);
    if (std::isinf(ha) || std::isinf(hb)) return -kInf;
    if (std::isinf(ht)) return kInf;
    return law.hazard_increment(a, b) - l * hb;
  };

  std::vector<double> breaks;
  for (int j = 1; j <= 15; ++j) {
    const double p = std::pow(10.0, -j);
    breaks.push_back(p);
    breaks.push_back(2.0 * p);
    breaks.push_back(5.0 * p);
  }
  for (double b : law.breakpoints()) {
    if (b > 0.0 && b < t) breaks.push_back(b / t);
  }
  for (const auto& atom : law.atoms()) {
    if (atom.at > 0.0 && atom.at < t) breaks.push_back(atom.at / t);
  }
  breaks.push_back(0.5);
  sort_unique(breaks);

  // Each half gets geometric breaks around its own maximum, so narrow peaks
  // cannot fall between Kronrod nodes.
  std::vector<double> probes;
  for (double v : breaks) {
    if (v <= 0.5) probes.push_back(v);
  }
  for (int i = 0; i <= 64; ++i) probes.push_back(0.5 * i / 64.0);
  sort_unique(probes);
  struct Peak {
    double value = -kInf;
    std::vector<double> breaks;
  };
  auto localize = [&](const auto& g) {
    Peak p;
    double at = 0.0;
    for (double v : probes) {
      const double gv = g(v);
      if (gv > p.value) p.value = gv, at = v;
    }
    if (!std::isfinite(p.value)) return p;
    const auto it = std::lower_bound(probes.begin(), probes.end(), at);
    const double lo = it == probes.begin() ? 0.0 : *(it - 1);
    const double hi = it + 1 < probes.end() ? *(it + 1) : 0.5;
    const auto [x, fx] = boost::math::tools::brent_find_minima([&](double v) { return -g(v); }, lo, hi, 40);
    if (-fx > p.value) p.value = -fx, at = x;
    p.breaks = breaks;
    for (int j = 1; j <= 15; ++j) {
      const double q = std::pow(10.0, -j);
      for (double m : {1.0, 2.0, 5.0}) {
        p.breaks.push_back(at - m * q);
        p.breaks.push_back(at + m * q);
      }
    }
    p.breaks.push_back(at);
    std::erase_if(p.breaks, [](double v) { return !(v > 0.0 && v < 0.5); });
    sort_unique(p.breaks);
    return p;
  };
  const Peak p1 = localize(first);
  const Peak p2 = localize(second);
  const double peak = std::max(p1.value, p2.value);
  if (std::isinf(peak) && peak > 0.0) return {kInf, 0.0};
  if (!std::isfinite(peak)) return {-kInf, 0.0};
  const auto& breaks_first = p1.breaks.empty() ? breaks : p1.breaks;
  const auto& breaks_second = p2.breaks.empty() ? breaks : p2.breaks;

  const double abs_tol = 1e-14 * std::min(1.0, std::exp(-peak));
  const auto i1 = integrate_global([&](double v) { return std::exp(first(v) - peak); }, 0.0, 0.5, breaks_first, 1e-13,
                                   abs_tol);
  const auto i2 = integrate_global([&](double w) { return std::exp(second(w) - peak); }, 0.0, 0.5, breaks_second, 1e-13,
                                   abs_tol);
  const double j = i1.value + i2.value;
  if (!(j > 0.0)) return {-kInf, 0.0};
  const double rounding = kRound * (1.0 + std::abs(ht) * (1.0 + l));
  return {peak + std::log(j), (i1.error + i2.error) / j + rounding};
}

// Moment of an arbitrary tail: G(0) + ∫ G'(t) tail(t) dt, the last panel continued to `upper`.
Integral moment_of(const std::function<double(double)>& tail, const MomentFunction& g,
                   std::span<const double> breaks, double upper) {
  using Kind = MomentFunction::Kind;
  if (g.kind == Kind::IndicatorAbove) return {tail(g.parameter), 0.0};
  if (g.kind == Kind::Tabulated) {
    Integral total{g.values.front(), 0.0};
    for (std::size_t i = 0; i + 1 < g.grid.size(); ++i) {
      const double slope = (g.values[i + 1] - g.values[i]) / (g.grid[i + 1] - g.grid[i]);
      if (slope == 0.0) continue;
      const auto part = integrate(tail, g.grid[i], g.grid[i + 1], breaks);
      total.value += slope * part.value;
      total.error += slope * part.error;
    }
    return total;
  }
  const double p = g.kind == Kind::Power ? g.parameter : 1.0;
  if (p == 1.0) return integrate(tail, 0.0, upper, breaks);
  return integrate([&](double t) { return p * std::pow(t, p - 1.0) * tail(t); }, 0.0, upper, breaks);
}

}  // namespace

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Undefined: return "undefined";
  }
  return "?";
}

double default_epsilon(const Distribution& law) {
  const auto& family = law.spec().family;
  if (std::holds_alternative<Tabulated>(family) || std::holds_alternative<FromMrl>(family)) return 1e-6;
  return 1e-9;
}

Verdict decide(double margin, double error, double epsilon) {
  if (std::isnan(margin)) return Verdict::Inconclusive;
  if (margin <= epsilon) return Verdict::Holds;
  if (margin - error > epsilon) return Verdict::Fails;
  return Verdict::Inconclusive;
}

ClassifyGrids make_grids(const Distribution& law, const ClassifyConfig& config) {
  ClassifyGrids g;
  g.horizon = config.horizon > 0.0 ? config.horizon : law.horizon(1e-10);
  const auto& breaks = law.breakpoints();
  std::vector<double> marks(breaks.begin(), breaks.end());
  for (const auto& a : law.atoms()) marks.push_back(a.at);

  g.pair_axis = positive(hybrid_grid(g.horizon, config.pair_points, marks));
  g.r_grid = positive(hybrid_grid(g.horizon, config.r_points, marks));

  auto t = positive(hybrid_grid(g.horizon, config.t_points / 2, marks));
  const bool unbounded = !std::isfinite(law.support_sup()) && law.mass_at_infinity() == 0.0;
  const bool closed_form = default_epsilon(law) < 1e-6;
  if (unbounded && closed_form && config.horizon <= 0.0) {
    // Violations of the l-fold conditions can sit far out in the tail.
    // Past a cumulative hazard of 1e9 every parametric family here is decided.
    const double far_end = std::min(1e8 * law.scale(), law.hazard_quantile(1e9));
    const auto far = geometric_grid(1e-6 * law.scale(), far_end, config.t_points - config.t_points / 2);
    t.insert(t.end(), far.begin(), far.end());
  }
  sort_unique(t);
  g.t_grid = std::move(t);

  if (!config.mu_grid.empty()) {
    g.mu_grid = config.mu_grid;
  } else {
    g.mu_grid = geometric_grid(1e-2 / law.scale(), 1e2 / law.scale(), 9);
  }
  return g;
}

Check check_supermultiplicative(const Distribution& law, std::span<const double> axis, double epsilon) {
  return pair_check("supermultiplicative", law, axis, axis, epsilon, 1.0, +1);
}

Check check_supermultiplicative(const Distribution& law, std::span<const double> xs, std::span<const double> ys,
                                double epsilon) {
  return pair_check("supermultiplicative", law, xs, ys, epsilon, 1.0, +1);
}

Check check_submultiplicative(const Distribution& law, std::span<const double> axis, double epsilon) {
  auto c = pair_check("submultiplicative", law, axis, axis, epsilon, 1.0, -1);
  short_circuit_origin(law, c);
  return c;
}

Check check_lfold_supermultiplicative(const Distribution& law, int l, std::span<const double> axis,
                                      double epsilon) {
  if (l < 1) throw Error(ErrorCode::InvalidParameter, "branching factor must be >= 1");
  return pair_check("lfold_supermultiplicative_" + std::to_string(l), law, axis, axis, epsilon, l, +1);
}

Check check_lfold_invariance(const Distribution& law, int l, std::span<const double> axis, double epsilon) {
  if (l < 1) throw Error(ErrorCode::InvalidParameter, "branching factor must be >= 1");
  return pair_check("lfold_invariance_" + std::to_string(l), law, axis, axis, epsilon, l, 0);
}

namespace {

// t values for one r: the shared grid plus points just past r and 2r, where the
// l-fold violations concentrate.
std::vector<double> times_for(double r, std::span<const double> t_grid, std::span<const double> offsets) {
  std::vector<double> ts(t_grid.begin(), t_grid.end());
  for (double y : offsets) {
    if (y >= r) break;
    ts.push_back(r + y);
    ts.push_back(2.0 * r + y);
  }
  return ts;
}

// log of the branching closed form minus log F̄(t), using hazard increments.
double deterministic_log_ratio(const Distribution& law, double r, double t, double l) {
  const double k = std::floor(t / r);
  const double rem = t - k * r;
  const double hr = hazard(law, r);
  const double hrem = hazard(law, rem);
  const double lk = std::pow(l, k);
  const double exponent_r = l == 1.0 ? k : (lk - 1.0) / (l - 1.0);
  if (k == 0.0) return 0.0;
  const double ht = hazard(law, t);
  if (std::isinf(hr) || std::isinf(hrem)) return std::isinf(ht) ? 0.0 : -kInf;
  if (std::isinf(ht)) return kInf;
  // log F̄ᴿ - log F̄ = H(t) - H(rem) - exponent_r H(r) - (l^k - 1) H(rem)
  const double inc = law.hazard_increment(rem, t - rem);
  return inc - exponent_r * hr - (lk - 1.0) * hrem;
}

}  // namespace

Check check_deterministic_no_bigger(const Distribution& law, std::span<const double> r_grid,
                                    std::span<const double> t_grid, double epsilon, int l) {
  std::vector<double> offsets = geometric_grid(1e-9 * r_grid.back(), r_grid.back(), 60);
  std::vector<std::vector<Sample>> rows(r_grid.size());
  parallel_for(r_grid.size(), [&](std::size_t i) {
    const double r = r_grid[i];
    for (double t : times_for(r, t_grid, offsets)) {
      const double d = deterministic_log_ratio(law, r, t, l);
      const double scale = std::abs(hazard(law, t)) * (1.0 + std::pow(l, std::floor(t / r)));
      rows[i].push_back({log_margin(d), kRound * (1.0 + (std::isfinite(scale) ? scale : 0.0)), {r, t}});
    }
  });
  std::vector<Sample> all;
  for (auto& row : rows) all.insert(all.end(), row.begin(), row.end());
  return reduce(l == 1 ? "deterministic_no_bigger" : "lfold_deterministic_no_bigger_" + std::to_string(l), all,
                epsilon);
}

Check check_deterministic_no_smaller(const Distribution& law, std::span<const double> r_grid,
                                     std::span<const double> t_grid, double epsilon) {
  std::vector<double> offsets = geometric_grid(1e-9 * r_grid.back(), r_grid.back(), 60);
  std::vector<std::vector<Sample>> rows(r_grid.size());
  parallel_for(r_grid.size(), [&](std::size_t i) {
    const double r = r_grid[i];
    for (double t : times_for(r, t_grid, offsets)) {
      const double d = deterministic_log_ratio(law, r, t, 1.0);
      const double scale = 2.0 * std::abs(hazard(law, t));
      rows[i].push_back({log_margin(-d), kRound * (1.0 + (std::isfinite(scale) ? scale : 0.0)), {r, t}});
    }
  });
  std::vector<Sample> all;
  for (auto& row : rows) all.insert(all.end(), row.begin(), row.end());
  auto c = reduce("deterministic_no_smaller", all, epsilon);
  short_circuit_origin(law, c);
  return c;
}

Check check_exp_reset_condition(const Distribution& law, std::span<const double> t_grid, double epsilon, int l,
                                bool no_bigger) {
  if (l < 1) throw Error(ErrorCode::InvalidParameter, "branching factor must be >= 1");
  if (!no_bigger && l != 1) throw Error(ErrorCode::InvalidParameter, "no-smaller is only defined for l = 1");
  const auto ts = positive(t_grid);
  std::vector<Sample> out(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    const auto ratio = log_exp_reset_ratio(law, ts[i], l);
    out[i].at = {ts[i]};
    out[i].margin = log_margin(no_bigger ? ratio.value : -ratio.value);
    out[i].error = ratio.error;
  });
  std::string name = no_bigger ? (l == 1 ? "exp_reset_no_bigger" : "lfold_exp_no_bigger_" + std::to_string(l))
                               : "exp_reset_no_smaller";
  auto c = reduce(std::move(name), out, epsilon);
  if (!no_bigger) short_circuit_origin(law, c);
  return c;
}

Check check_mean_condition(const Distribution& law, std::span<const double> r_grid, double epsilon,
                           bool no_bigger) {
  const std::string name = no_bigger ? "mean_no_bigger" : "mean_no_smaller";
  const double m0 = law.mean();
  if (!std::isfinite(m0)) return undefined(name, "undefined (m0 = inf)");
  std::vector<double> rs;
  for (double r : r_grid) {
    if (r < law.support_sup() && law.tail(r) > 0.0) rs.push_back(r);
  }
  std::vector<Sample> out(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) {
    const double m = mrl_from_tail(law, rs[i]);
    out[i].at = {rs[i], m};
    out[i].margin = no_bigger ? relative_margin(m0, m) : relative_margin(m, m0);
    out[i].error = 1e-11;
  });
  auto c = reduce(name, out, epsilon);
  if (!no_bigger) short_circuit_origin(law, c);
  return c;
}

Check check_deterministic_mean(const Distribution& law, std::span<const double> r_grid, double epsilon,
                               bool no_bigger) {
  const std::string name = no_bigger ? "deterministic_mean_no_bigger" : "deterministic_mean_no_smaller";
  const double m0 = law.mean();
  if (!std::isfinite(m0)) return undefined(name, "undefined (m0 = inf)");
  std::vector<double> rs = positive(r_grid);
  sort_unique(rs);
  std::vector<Integral> panels(rs.size());
  const auto& breaks = law.breakpoints();
  parallel_for(rs.size(), [&](std::size_t i) {
    const double lo = i == 0 ? 0.0 : rs[i - 1];
    panels[i] = integrate([&](double t) { return law.tail(t); }, lo, rs[i], breaks);
  });
  std::vector<Sample> out(rs.size());
  Integral running;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    running.value += panels[i].value;
    running.error += panels[i].error;
    const double f = -std::expm1(law.log_tail(rs[i]));
    const double d = running.value / f;
    out[i].at = {rs[i], d};
    out[i].margin = no_bigger ? relative_margin(d, m0) : relative_margin(m0, d);
    out[i].error = 1e-11 + running.error / std::max(running.value, 1e-300);
  }
  auto c = reduce(name, out, epsilon);
  if (!no_bigger) short_circuit_origin(law, c);
  return c;
}

std::vector<Check> check_exp_mean_condition(const Distribution& law, std::span<const double> mu_grid,
                                            double epsilon, bool no_bigger) {
  std::vector<Check> out;
  const double m0 = law.mean();
  const std::string base = no_bigger ? "exp_mean_no_bigger" : "exp_mean_no_smaller";
  if (!std::isfinite(m0)) {
    for (double mu : mu_grid) {
      auto c = undefined(base, "undefined (m0 = inf)");
      c.witness = {mu};
      out.push_back(std::move(c));
    }
    return out;
  }
  // exp(-∫_0^t dv/m(v)) = F̄(t) m(t) / m0, with m from one backward sweep over
  // Gauss-Legendre nodes; the same sum on half the panels gives the error.
  const double t0 = law.support_sup();
  const double top = std::isfinite(t0) ? t0 : law.horizon(1e-12);
  std::vector<double> marks(law.breakpoints().begin(), law.breakpoints().end());
  for (const auto& a : law.atoms()) marks.push_back(a.at);
  struct Rule {
    std::vector<double> nodes, weights, survival;
  };
  auto build = [&](std::size_t panels) {
    Rule rule;
    const auto cuts = hybrid_grid(top, panels, marks, 1e-12);
    using GL = boost::math::quadrature::gauss<double, 10>;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double c = 0.5 * (cuts[i] + cuts[i + 1]);
      const double h = 0.5 * (cuts[i + 1] - cuts[i]);
      // Ten points: five symmetric pairs, no centre node.
      for (std::size_t j = GL::abscissa().size(); j-- > 0;) {
        rule.nodes.push_back(c - h * GL::abscissa()[j]);
        rule.weights.push_back(h * GL::weights()[j]);
      }
      for (std::size_t j = 0; j < GL::abscissa().size(); ++j) {
        rule.nodes.push_back(c + h * GL::abscissa()[j]);
        rule.weights.push_back(h * GL::weights()[j]);
      }
    }
    const auto m = mrl_on_grid(law, rule.nodes);
    rule.survival.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) rule.survival[i] = law.tail(rule.nodes[i]) * m[i] / m0;
    return rule;
  };
  const Rule fine = build(800);
  const Rule coarse = build(400);
  const double beyond = std::isfinite(t0) ? 0.0 : law.tail(top) * mrl_from_tail(law, top) / m0;
  auto apply = [](const Rule& rule, double mu) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::exp(-mu * rule.nodes[i]) * rule.survival[i];
    return sum;
  };

  out.resize(mu_grid.size());
  parallel_for(mu_grid.size(), [&](std::size_t i) {
    const double mu = mu_grid[i];
    const double lhs = apply(fine, mu);
    const double err = std::abs(lhs - apply(coarse, mu)) + beyond * std::exp(-mu * top) / mu;
    const double rhs = 1.0 / (1.0 / m0 + mu);
    Sample s;
    s.at = {mu, lhs, rhs};
    s.margin = no_bigger ? relative_margin(rhs, lhs) : relative_margin(lhs, rhs);
    s.error = 1e-12 + err / lhs;
    auto c = reduce(base, {s}, epsilon);
    if (!no_bigger) short_circuit_origin(law, c);
    out[i] = std::move(c);
  });
  return out;
}

Check check_second_order(const Distribution& law, double epsilon) {
  const double m1 = law.mean();
  if (!std::isfinite(m1)) return undefined("second_order", "undefined (m0 = inf)");
  const double m2 = law.second_moment();
  Check c;
  c.name = "second_order";
  c.evaluated = 1;
  c.witness = {m2, 2.0 * m1 * m1};
  if (std::isinf(m2)) {
    c.verdict = Verdict::Holds;
    c.margin = -1.0;
    c.note = "trivially met (second moment infinite)";
    return c;
  }
  c.margin = relative_margin(2.0 * m1 * m1, m2);
  c.error = 1e-11;
  c.verdict = decide(c.margin, c.error, epsilon);
  if (c.verdict == Verdict::Holds) c.note = c.margin < -epsilon ? "strict" : "equality";
  else c.note = "violated";
  return c;
}

Check combine_invariant(const Check& no_bigger, const Check& no_smaller, std::string name) {
  Check c;
  c.name = std::move(name);
  c.evaluated = no_bigger.evaluated + no_smaller.evaluated;
  const bool b_first = !(no_smaller.margin > no_bigger.margin);
  const Check& worst = b_first ? no_bigger : no_smaller;
  c.margin = worst.margin;
  c.error = worst.error;
  c.witness = worst.witness;
  if (no_bigger.verdict == Verdict::Undefined || no_smaller.verdict == Verdict::Undefined) {
    c.verdict = Verdict::Undefined;
    c.note = no_bigger.verdict == Verdict::Undefined ? no_bigger.note : no_smaller.note;
  } else if (no_bigger.fails() || no_smaller.fails()) {
    c.verdict = Verdict::Fails;
    const Check& failing = no_bigger.fails() ? no_bigger : no_smaller;
    c.margin = failing.margin;
    c.error = failing.error;
    c.witness = failing.witness;
    c.note = failing.name + " fails";
  } else if (no_bigger.holds() && no_smaller.holds()) {
    c.verdict = Verdict::Holds;
  } else {
    c.verdict = Verdict::Inconclusive;
  }
  return c;
}

Check aggregate(const std::vector<Check>& checks, std::string name) {
  Check c;
  c.name = std::move(name);
  if (checks.empty()) return undefined(c.name, "empty grid");
  bool any_fail = false, any_inconclusive = false, any_undefined = false;
  c.margin = -kInf;
  for (const auto& k : checks) {
    c.evaluated += k.evaluated;
    any_fail |= k.fails();
    any_inconclusive |= k.verdict == Verdict::Inconclusive;
    any_undefined |= k.verdict == Verdict::Undefined;
    if (k.margin > c.margin) {
      c.margin = k.margin;
      c.error = k.error;
      c.witness = k.witness;
    }
    if (!k.note.empty() && c.note.empty()) c.note = k.note;
  }
  if (any_undefined) c.verdict = Verdict::Undefined;
  else if (any_fail) c.verdict = Verdict::Fails;
  else if (any_inconclusive) c.verdict = Verdict::Inconclusive;
  else c.verdict = Verdict::Holds;
  if (any_undefined) c.margin = kNaN;
  return c;
}

const Check& ClassificationReport::at(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named " + std::string(name));
}

bool ClassificationReport::any_inconclusive() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.verdict == Verdict::Inconclusive; });
}

const std::vector<std::string>& six_conditions(bool no_bigger) {
  static const std::vector<std::string> bigger = {
      "no_bigger_reset", "no_bigger_deterministic_reset", "no_bigger_exp_reset",
      "no_bigger_mean",  "no_bigger_deterministic_mean",  "no_bigger_exp_mean"};
  static const std::vector<std::string> smaller = {
      "no_smaller_reset", "no_smaller_deterministic_reset", "no_smaller_exp_reset",
      "no_smaller_mean",  "no_smaller_deterministic_mean",  "no_smaller_exp_mean"};
  return no_bigger ? bigger : smaller;
}

ClassificationReport classify(const Distribution& law, const ClassifyConfig& config) {
  ClassificationReport report;
  report.law = law.describe();
  report.epsilon = config.epsilon > 0.0 ? config.epsilon : default_epsilon(law);
  report.grids = make_grids(law, config);
  const double eps = report.epsilon;
  const auto& g = report.grids;

  auto renamed = [](Check c, std::string name) {
    c.name = std::move(name);
    return c;
  };
  auto add_family = [&](const std::string& suffix, Check bigger, Check smaller) {
    auto inv = combine_invariant(bigger, smaller, "invariant_" + suffix);
    report.checks.push_back(renamed(std::move(bigger), "no_bigger_" + suffix));
    report.checks.push_back(renamed(std::move(smaller), "no_smaller_" + suffix));
    report.checks.push_back(std::move(inv));
  };

  add_family("reset", check_supermultiplicative(law, g.pair_axis, eps),
             check_submultiplicative(law, g.pair_axis, eps));
  add_family("deterministic_reset", check_deterministic_no_bigger(law, g.r_grid, g.pair_axis, eps),
             check_deterministic_no_smaller(law, g.r_grid, g.pair_axis, eps));
  add_family("exp_reset", check_exp_reset_condition(law, g.t_grid, eps, 1, true),
             check_exp_reset_condition(law, g.t_grid, eps, 1, false));
  add_family("mean", check_mean_condition(law, g.r_grid, eps, true), check_mean_condition(law, g.r_grid, eps, false));
  add_family("deterministic_mean", check_deterministic_mean(law, g.r_grid, eps, true),
             check_deterministic_mean(law, g.r_grid, eps, false));

  report.exp_mean_no_bigger_by_mu = check_exp_mean_condition(law, g.mu_grid, eps, true);
  report.exp_mean_no_smaller_by_mu = check_exp_mean_condition(law, g.mu_grid, eps, false);
  add_family("exp_mean", aggregate(report.exp_mean_no_bigger_by_mu, "exp_mean_no_bigger"),
             aggregate(report.exp_mean_no_smaller_by_mu, "exp_mean_no_smaller"));

  report.checks.push_back(check_second_order(law, eps));

  for (int l : config.branching) {
    const auto tag = std::to_string(l);
    report.checks.push_back(renamed(check_lfold_supermultiplicative(law, l, g.pair_axis, eps), "lfold_no_bigger_" + tag));
    report.checks.push_back(check_deterministic_no_bigger(law, g.r_grid, g.pair_axis, eps, l));
    report.checks.push_back(check_exp_reset_condition(law, g.t_grid, eps, l, true));
    report.checks.push_back(check_lfold_invariance(law, l, g.pair_axis, eps));
  }

  report.exponential = report.at("invariant_reset").holds();
  return report;
}

MomentTransfer moment_transfer_check(const Distribution& law, const ResetLaw& reset, const MomentFunction& g) {
  MomentTransfer out;
  out.original = law.g_moment(g);

  std::vector<double> breaks(law.breakpoints().begin(), law.breakpoints().end());
  for (double b : reset.breakpoints()) breaks.push_back(b);
  if (reset.kind == ResetLaw::Kind::Deterministic) {
    const double r = reset.parameter;
    for (int k = 1; k <= 64; ++k) breaks.push_back(k * r);
    const auto m = moment_of([&](double t) { return deterministic_reset_tail(law, r, t); }, g, breaks, kInf);
    out.transformed = m.value;
    out.error = m.error;
  } else {
    const auto sol = solve_renewal(law, reset);
    const double T = sol.horizon();
    const double gT = sol.right.back();
    auto tail = [&](double t) {
      if (t <= T) return sol(t);
      return gT * std::exp(-sol.terminal_rate * (t - T));
    };
    breaks.push_back(T);
    const auto m = moment_of(tail, g, breaks, kInf);
    out.transformed = m.value;
    out.error = m.error + sol.error * T;
  }
  if (std::isnan(out.transformed)) out.transformed = kInf;
  out.finite_transfers = !std::isfinite(out.original) || std::isfinite(out.transformed);
  return out;
}

}  // namespace restart

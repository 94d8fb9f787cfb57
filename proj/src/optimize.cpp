#include "restart/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "restart/error.hpp"
#include "restart/numeric.hpp"
#include "restart/reset.hpp"

namespace restart {

namespace {

double curve_at(const Distribution& law, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidPeriod, "reset period must be > 0");
  const double den = -std::expm1(law.log_tail(r));
  if (!(den > 0.0)) return kInf;
  const double upper = std::min(r, law.support_sup());
  const double num = integrate([&](double t) { return law.tail(t); }, 0.0, upper, law.breakpoints(), 1e-13).value;
  return num / den;
}

// Limit of the curve as r -> 0 from its power-law trend over r = scale * 1e-10 .. 1e-12.
double limit_at_zero(const Distribution& law) {
  if (law.tail(0.0) < 1.0) return 0.0;
  const double s = law.scale();
  const double r1 = s * 1e-10;
  const double r2 = s * 1e-12;
  const double c1 = curve_at(law, r1);
  const double c2 = curve_at(law, r2);
  if (std::isinf(c2)) return kInf;
  const double slope = (std::log(c2) - std::log(c1)) / (std::log(r2) - std::log(r1));
  if (slope < -0.02) return kInf;
  if (slope > 0.02) return 0.0;
  return c2;
}

ExponentialOptimum search_exponential(const Distribution& law, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo) || std::isinf(hi)) {
    throw Error(ErrorCode::InvalidParameter, "rate bracket must satisfy 0 < lo < hi < inf");
  }
  const auto f = [&](double x) { return exp_reset_mean(law, std::exp(x)); };
  const double a0 = std::log(lo);
  const double b0 = std::log(hi);
  constexpr int kScan = 25;
  std::vector<double> xs(kScan), fs(kScan);
  for (int i = 0; i < kScan; ++i) {
    xs[i] = a0 + (b0 - a0) * i / (kScan - 1);
    fs[i] = f(xs[i]);
  }
  const auto j = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  double a = xs[std::max(j - 1, 0)];
  double b = xs[std::min(j + 1, kScan - 1)];

  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-6) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  ExponentialOptimum best{std::exp(xs[j]), fs[j], false};
  for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (v < best.mean) best = {std::exp(x), v, false};
  }
  const double m0 = law.mean();
  best.improves = std::isinf(m0) ? std::isfinite(best.mean) : best.mean < m0 * (1.0 - 1e-9);
  return best;
}

}  // namespace

std::vector<double> deterministic_mean_curve(const Distribution& law, std::span<const double> r_grid) {
  std::vector<double> out(r_grid.size());
  parallel_for(r_grid.size(), [&](std::size_t i) { out[i] = curve_at(law, r_grid[i]); });
  return out;
}

ExponentialOptimum best_exponential_rate(const Distribution& law, double lo, double hi) {
  const auto best = search_exponential(law, lo, hi);
  if (!best.improves) {
    throw Error(ErrorCode::NoImprovement,
                "no exponential rate in the bracket lowers the mean below " + std::to_string(law.mean()));
  }
  return best;
}

ExtremalReport extremal_reset_mean(const Distribution& law, const ExtremalConfig& config) {
  ExtremalReport rep;
  rep.m0 = law.mean();
  const double s = law.scale();

  std::vector<double> grid = config.r_grid;
  if (grid.empty()) {
    const double top = std::isfinite(law.support_sup()) ? 1.25 * law.support_sup() : law.horizon(1e-10);
    grid = geometric_grid(1e-6 * s, top, config.points);
    for (double b : law.breakpoints()) {
      if (b > 0.0 && b < top) grid.push_back(b);
    }
    for (const Atom& a : law.atoms()) {
      if (a.at > 0.0) grid.insert(grid.end(), {a.at, a.at * (1.0 - 1e-9)});
    }
  }
  std::erase_if(grid, [](double r) { return !(r > 0.0) || std::isinf(r); });
  sort_unique(grid);
  std::vector<double> curve(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { curve[i] = curve_at(law, grid[i]); }, config.threads);

  // Three rounds of local refinement around the interior extremes.
  for (int round = 0; round < 3; ++round) {
    std::vector<double> extra;
    for (auto it : {std::max_element(curve.begin(), curve.end()), std::min_element(curve.begin(), curve.end())}) {
      const auto i = static_cast<std::size_t>(it - curve.begin());
      if (i == 0 || i + 1 >= grid.size() || std::isinf(*it)) continue;
      for (int k = 1; k < 16; ++k) {
        extra.push_back(grid[i - 1] + (grid[i + 1] - grid[i - 1]) * k / 16.0);
      }
    }
    if (extra.empty()) break;
    std::vector<double> values(extra.size());
    parallel_for(extra.size(), [&](std::size_t i) { values[i] = curve_at(law, extra[i]); }, config.threads);
    std::vector<std::pair<double, double>> merged;
    for (std::size_t i = 0; i < grid.size(); ++i) merged.emplace_back(grid[i], curve[i]);
    for (std::size_t i = 0; i < extra.size(); ++i) merged.emplace_back(extra[i], values[i]);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](const auto& x, const auto& y) { return x.first == y.first; }),
                 merged.end());
    grid.clear();
    curve.clear();
    for (auto [r, v] : merged) {
      grid.push_back(r);
      curve.push_back(v);
    }
  }
  rep.r_grid = grid;
  rep.curve = curve;

  rep.limit_at_zero = limit_at_zero(law);
  rep.limit_at_infinity = rep.m0;

  rep.sup = rep.limit_at_infinity;
  rep.sup_at = kInf;
  rep.inf = rep.limit_at_infinity;
  rep.inf_at = kInf;
  const auto consider = [&](double r, double v) {
    if (v > rep.sup) {
      rep.sup = v;
      rep.sup_at = r;
    }
    if (v < rep.inf) {
      rep.inf = v;
      rep.inf_at = r;
    }
  };
  consider(0.0, rep.limit_at_zero);
  for (std::size_t i = 0; i < grid.size(); ++i) consider(grid[i], curve[i]);
  rep.sup_diverges = std::isinf(rep.sup);
  rep.best_deterministic_r = rep.inf_at;
  rep.best_deterministic_mean = rep.inf;

  const double lo = config.mu_lo > 0.0 ? config.mu_lo : 1e-4 / s;
  const double hi = config.mu_hi > 0.0 ? config.mu_hi : 1e4 / s;
  rep.best_exponential = search_exponential(law, lo, hi);
  rep.exponential_searched = rep.best_exponential.improves;
  return rep;
}

}  // namespace restart

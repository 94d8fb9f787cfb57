#include "restart/mrl.hpp"

#include <cmath>
#include <vector>

#include "restart/error.hpp"
#include "restart/numeric.hpp"

namespace restart {

double mrl_from_tail(const Distribution& law, double r) {
  if (!std::isfinite(law.mean())) throw Error(ErrorCode::InfiniteMean, "m(r) needs a finite mean");
  if (r < 0.0) r = 0.0;
  if (r >= law.support_sup()) return 0.0;
  const double base = law.log_tail(r);
  if (std::isinf(base)) return 0.0;
  std::vector<double> shifted;
  for (double b : law.breakpoints()) {
    if (b > r) shifted.push_back(b - r);
  }
  const double span = law.support_sup() - r;
  return integrate([&](double s) { return std::exp(law.log_tail(r + s) - base); }, 0.0, span,
                   shifted)
      .value;
}

std::vector<double> mrl_on_grid(const Distribution& law, std::span<const double> sorted_grid) {
  if (!std::isfinite(law.mean())) throw Error(ErrorCode::InfiniteMean, "m(r) needs a finite mean");
  const std::size_t n = sorted_grid.size();
  std::vector<double> out(n, 0.0);
  const auto& breaks = law.breakpoints();
  auto tail = [&](double t) { return law.tail(t); };
  const double t0 = law.support_sup();
  std::size_t last = n;
  while (last > 0 && sorted_grid[last - 1] >= t0) --last;
  if (last == 0) return out;
  double above = integrate(tail, sorted_grid[last - 1], t0, breaks).value;  // ∫ F̄ from node i to t0
  for (std::size_t i = last; i-- > 0;) {
    if (i + 1 < last) above += integrate(tail, sorted_grid[i], sorted_grid[i + 1], breaks).value;
    const double f = law.tail(sorted_grid[i]);
    out[i] = f > 0.0 ? above / f : 0.0;
  }
  return out;
}

MrlCurve mrl_curve(const Distribution& law, std::span<const double> grid) {
  if (grid.empty() || grid.front() != 0.0) {
    throw Error(ErrorCode::InvalidParameter, "mrl grid must start at 0");
  }
  MrlCurve c;
  c.m0 = law.mean();
  if (!std::isfinite(c.m0)) throw Error(ErrorCode::InfiniteMean, "m(r) needs a finite mean");
  for (double r : grid) {
    if (r >= law.support_sup()) break;
    const double m = mrl_from_tail(law, r);
    if (!(m > 0.0)) break;
    const double hazard = law.density(r) / law.tail(r);
    c.grid.push_back(r);
    c.values.push_back(m);
    c.slopes.push_back(std::isfinite(hazard) ? m * hazard - 1.0 : kInf);
  }
  const std::size_t n = c.grid.size();
  if (n < 2) throw Error(ErrorCode::InvalidMrl, "grid leaves fewer than two nodes below t0");
  // an infinite hazard at a node (e.g. at 0 for Weibull shape < 1): fall back to the secant
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isfinite(c.slopes[i])) continue;
    const std::size_t j = i + 1 < n ? i + 1 : i - 1;
    c.slopes[i] = (c.values[j] - c.values[i]) / (c.grid[j] - c.grid[i]);
  }
  if (law.tail_class().kind == TailClass::Kind::Power) {
    c.terminal = MrlTerminal::Linear;
    c.terminal_slope = std::max(0.0, c.slopes.back());
  }
  return c;
}

MrlCurve mrl_curve(const Distribution& law, std::size_t points) {
  const double t0 = law.support_sup();
  const double top = std::isfinite(t0) ? t0 : law.horizon();
  std::vector<double> breaks = law.breakpoints();
  for (const Atom& a : law.atoms()) {
    if (a.at > 0.0) breaks.push_back(a.at * (1.0 - 1e-9));
  }
  auto grid = hybrid_grid(top, points, breaks, 1e-12);
  if (std::isfinite(t0)) std::erase_if(grid, [t0](double r) { return r >= t0 * (1.0 - 1e-12); });
  return mrl_curve(law, grid);
}

double tail_from_mrl(const MrlCurve& curve, double r) {
  validate_generator(curve);
  return MrlFunction(curve).tail(r);
}

DistributionSpec law_from_mrl(const MrlCurve& curve) {
  validate_generator(curve);
  DistributionSpec spec{FromMrl{curve}, 0.0};
  (void)Distribution(spec);
  return spec;
}

}  // namespace restart

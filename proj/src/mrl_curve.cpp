#include "restart/mrl_curve.hpp"

#include <algorithm>
#include <cmath>

#include "restart/error.hpp"
#include "restart/numeric.hpp"

namespace restart {

namespace {

constexpr double kSlopeSlack = 1e-6;

void check_shape(const MrlCurve& c) {
  if (c.grid.empty() || c.grid.size() != c.values.size()) {
    throw Error(ErrorCode::InvalidMrl, "mrl curve needs one value per grid node");
  }
  if (!c.slopes.empty() && c.slopes.size() != c.grid.size()) {
    throw Error(ErrorCode::InvalidMrl, "mrl slopes must match the grid");
  }
  if (c.grid.front() != 0.0) throw Error(ErrorCode::InvalidMrl, "mrl grid must start at 0");
  for (std::size_t i = 1; i < c.grid.size(); ++i) {
    if (!(c.grid[i] > c.grid[i - 1])) throw Error(ErrorCode::InvalidMrl, "mrl grid must increase");
  }
  for (double v : c.values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidMrl, "mrl values must be positive");
  }
  if (!(c.m0 > 0.0) || !std::isfinite(c.m0)) throw Error(ErrorCode::InvalidMrl, "m0 must be positive");
  if (c.terminal == MrlTerminal::Linear && !(c.terminal_slope >= 0.0)) {
    throw Error(ErrorCode::InvalidMrl, "terminal slope must be >= 0");
  }
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1);
  std::vector<double> s(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    s[i] = (y[i + 1] - y[i]) / h[i];
  }
  d.front() = s.front();
  d.back() = s.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i - 1] * s[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
  }
  return d;
}

}  // namespace

void validate_generator(const MrlCurve& c) {
  check_shape(c);
  const double floor = 1e-12 * *std::max_element(c.values.begin(), c.values.end());
  if (*std::min_element(c.values.begin(), c.values.end()) < floor) {
    throw Error(ErrorCode::InvalidMrl, "mrl values are not bounded away from zero");
  }
  for (std::size_t i = 0; i + 1 < c.grid.size(); ++i) {
    const double secant = (c.values[i + 1] - c.values[i]) / (c.grid[i + 1] - c.grid[i]);
    if (secant < -1.0 - kSlopeSlack) {
      throw Error(ErrorCode::InvalidMrl,
                  "mrl derivative below -1 near r=" + std::to_string(c.grid[i]));
    }
  }
  for (double s : c.slopes) {
    if (s < -1.0 - kSlopeSlack) throw Error(ErrorCode::InvalidMrl, "mrl slope below -1");
  }
  if (c.m0 > c.values.front() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidMrl, "m0 exceeds m(0)");
  }
}

MrlFunction::MrlFunction(MrlCurve curve) : curve_(std::move(curve)) {
  check_shape(curve_);
  slopes_ = curve_.slopes.empty() ? pchip_slopes(curve_.grid, curve_.values) : curve_.slopes;
  cumulative_.assign(curve_.grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < curve_.grid.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + integrate_smooth([this](double v) { return 1.0 / m(v); },
                                                           curve_.grid[i], curve_.grid[i + 1]);
  }
}

double MrlFunction::m(double r) const {
  const auto& g = curve_.grid;
  const auto& v = curve_.values;
  if (r <= 0.0) return v.front();
  if (r >= g.back()) {
    if (curve_.terminal == MrlTerminal::Linear) return v.back() + curve_.terminal_slope * (r - g.back());
    return v.back();
  }
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), r) - g.begin()) - 1;
  const double h = g[i + 1] - g[i];
  const double t = (r - g[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
         (-2 * t3 + 3 * t2) * v[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

double MrlFunction::dm(double r) const {
  const auto& g = curve_.grid;
  const auto& v = curve_.values;
  if (r >= g.back()) return curve_.terminal == MrlTerminal::Linear ? curve_.terminal_slope : 0.0;
  if (r < 0.0) r = 0.0;
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), r) - g.begin()) - 1;
  const double h = g[i + 1] - g[i];
  const double t = (r - g[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * v[i] + (6 * t - 6 * t2) * v[i + 1]) / h +
         (3 * t2 - 4 * t + 1) * slopes_[i] + (3 * t2 - 2 * t) * slopes_[i + 1];
}

double MrlFunction::inverse_integral(double r) const {
  const auto& g = curve_.grid;
  if (r <= 0.0) return 0.0;
  if (std::isinf(r)) return kInf;
  if (r >= g.back()) {
    const double base = cumulative_.back();
    const double last = curve_.values.back();
    const double dt = r - g.back();
    if (curve_.terminal == MrlTerminal::Linear && curve_.terminal_slope > 0.0) {
      return base + std::log1p(curve_.terminal_slope * dt / last) / curve_.terminal_slope;
    }
    return base + dt / last;
  }
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), r) - g.begin()) - 1;
  return cumulative_[i] + integrate_smooth([this](double v) { return 1.0 / m(v); }, g[i], r);
}

double MrlFunction::log_tail(double r) const {
  if (std::isinf(r)) return -kInf;
  return std::log(curve_.m0 / m(r)) - inverse_integral(r);
}

double MrlFunction::tail(double r) const { return std::exp(log_tail(r)); }

double MrlFunction::density(double r) const {
  if (r < 0.0 || std::isinf(r)) return 0.0;
  const double mr = m(r);
  return tail(r) * (1.0 + dm(r)) / mr;
}

}  // namespace restart

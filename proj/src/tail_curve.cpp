#include "restart/tail_curve.hpp"

#include <algorithm>
#include <cmath>

#include "restart/error.hpp"
#include "restart/numeric.hpp"

namespace restart {

const char* to_string(Interpolation mode) noexcept {
  switch (mode) {
    case Interpolation::Step: return "step";
    case Interpolation::Linear: return "linear";
    case Interpolation::LogLinear: return "log-linear";
  }
  return "step";
}

void TailCurve::check() const {
  if (grid.empty() || grid.size() != values.size()) {
    throw Error(ErrorCode::InvalidParameter, "tail curve needs one value per grid node");
  }
  if (grid.front() != 0.0) throw Error(ErrorCode::InvalidParameter, "tail curve grid must start at 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorCode::InvalidParameter, "tail curve grid must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw Error(ErrorCode::InvalidParameter, "tail values must lie in [0, 1]");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw Error(ErrorCode::NonMonotone,
                  "tail value increases at grid node " + std::to_string(grid[i]));
    }
  }
  if (!(terminal_rate >= 0.0) || !std::isfinite(terminal_rate)) {
    throw Error(ErrorCode::InvalidParameter, "terminal_rate must be finite and >= 0");
  }
}

namespace {

// Index i with grid[i] <= t < grid[i + 1]; caller guarantees grid[0] <= t < grid.back().
std::size_t cell_of(const std::vector<double>& grid, double t) {
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  return static_cast<std::size_t>(it - grid.begin()) - 1;
}

double interpolate(Interpolation mode, double x0, double x1, double v0, double v1, double t) {
  const double w = (t - x0) / (x1 - x0);
  switch (mode) {
    case Interpolation::Step: return v0;
    case Interpolation::Linear: return v0 + (v1 - v0) * w;
    case Interpolation::LogLinear:
      if (v0 <= 0.0 || v1 <= 0.0) return v0 + (v1 - v0) * w;
      return v0 * std::pow(v1 / v0, w);
  }
  return v0;
}

}  // namespace

double TailCurve::operator()(double t) const {
  if (t < 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  if (t >= grid.back()) {
    if (terminal_rate == 0.0) return values.back();
    return values.back() * std::exp(-terminal_rate * (t - grid.back()));
  }
  const std::size_t i = cell_of(grid, t);
  return interpolate(mode, grid[i], grid[i + 1], values[i], values[i + 1], t);
}

double TailCurve::left_limit(double t) const {
  if (t <= 0.0) return 1.0;
  if (mode != Interpolation::Step) return (*this)(t);
  const auto it = std::lower_bound(grid.begin(), grid.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  if (i + 1 >= grid.size()) return (*this)(t);
  return values[i];
}

double TailCurve::log_value(double t) const {
  if (t >= grid.back() && std::isfinite(t)) {
    return std::log(values.back()) - terminal_rate * (t - grid.back());
  }
  return std::log((*this)(t));
}

double TailCurve::density(double t) const {
  if (t < 0.0 || std::isinf(t)) return 0.0;
  if (t >= grid.back()) return terminal_rate * (*this)(t);
  const std::size_t i = cell_of(grid, t);
  const double v0 = values[i];
  const double v1 = values[i + 1];
  const double h = grid[i + 1] - grid[i];
  switch (mode) {
    case Interpolation::Step: return 0.0;
    case Interpolation::Linear: return (v0 - v1) / h;
    case Interpolation::LogLinear:
      if (v0 <= 0.0 || v1 <= 0.0) return (v0 - v1) / h;
      return -std::log(v1 / v0) / h * (*this)(t);
  }
  return 0.0;
}

std::vector<Atom> TailCurve::jumps() const {
  std::vector<Atom> out;
  if (mode != Interpolation::Step) return out;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double jump = values[i - 1] - values[i];
    if (jump > 0.0) out.push_back({grid[i], jump});
  }
  return out;
}

double TailCurve::limit_at_infinity() const { return terminal_rate > 0.0 ? 0.0 : values.back(); }

double TailCurve::hazard_quantile(double q) const {
  const double target = std::exp(-q);
  // first node whose value is already at or below the target
  std::size_t i = 0;
  while (i < values.size() && values[i] > target) ++i;
  if (i == 0) return 0.0;
  if (i == values.size()) {
    const double v = values.back();
    if (terminal_rate == 0.0 || v <= 0.0) return kInf;
    return grid.back() + (q + std::log(v)) / terminal_rate;
  }
  const double v0 = values[i - 1];
  const double v1 = values[i];
  const double x0 = grid[i - 1];
  const double x1 = grid[i];
  switch (mode) {
    case Interpolation::Step: return x1;
    case Interpolation::Linear: return x0 + (v0 - target) / (v0 - v1) * (x1 - x0);
    case Interpolation::LogLinear:
      if (v1 <= 0.0) return x0 + (v0 - target) / (v0 - v1) * (x1 - x0);
      return x0 + (std::log(v0) + q) / std::log(v0 / v1) * (x1 - x0);
  }
  return x1;
}

}  // namespace restart

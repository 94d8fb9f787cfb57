#pragma once

#include <vector>

namespace restart {

enum class Interpolation { Step, Linear, LogLinear };

const char* to_string(Interpolation mode) noexcept;

/// A jump of a tail function: P(T == at) == mass.
struct Atom {
  double at = 0.0;
  double mass = 0.0;
};

/**
 * Tabulated tail function on a finite grid.
 *
 * `values[i]` is F̄(grid[i]). Between nodes the curve is held constant
 * (Step, right-continuous), interpolated linearly, or interpolated linearly
 * in log space. Past the last node it continues as
 * values.back() * exp(-terminal_rate * (t - grid.back())); a zero rate
 * leaves values.back() as mass at infinity.
 */
struct TailCurve {
  std::vector<double> grid;
  std::vector<double> values;
  Interpolation mode = Interpolation::Step;
  double terminal_rate = 0.0;

  /// Throws restart::Error (NonMonotone / InvalidParameter) on malformed curves.
  void check() const;

  double operator()(double t) const;
  double left_limit(double t) const;
  double log_value(double t) const;
  /// Derivative of the continuous part, as a positive density.
  double density(double t) const;
  /// Jumps at grid nodes t > 0 (Step mode only has them).
  std::vector<Atom> jumps() const;
  double limit_at_infinity() const;
  /// Smallest t with -log F̄(t) >= q.
  double hazard_quantile(double q) const;
};

}  // namespace restart

#pragma once

#include <vector>

namespace restart {

enum class MrlTerminal { Constant, Linear };

/**
 * Mean-residual-life curve m(r) sampled on a grid starting at 0.
 *
 * Between nodes m is a cubic Hermite interpolant; node slopes are taken from
 * `slopes` when supplied and from a shape-preserving (Fritsch-Carlson)
 * estimate otherwise. Past the last node m stays constant or grows linearly
 * with `terminal_slope`. `m0` is the unconditional mean of the law.
 */
struct MrlCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> slopes;
  MrlTerminal terminal = MrlTerminal::Constant;
  double terminal_slope = 0.0;
  double m0 = 0.0;
};

/// Generator checks: m bounded away from zero, m' >= -1 (slack 1e-6), 0 < m0 <= m(0).
void validate_generator(const MrlCurve& curve);

/**
 * Evaluation helper with precomputed slopes and cumulative integrals of 1/m.
 * Immutable after construction.
 */
class MrlFunction {
 public:
  explicit MrlFunction(MrlCurve curve);

  const MrlCurve& curve() const { return curve_; }
  double m(double r) const;
  double dm(double r) const;
  /// ∫_0^r dv / m(v).
  double inverse_integral(double r) const;
  /// (m0 / m(r)) exp(-∫_0^r dv/m), the tail this curve generates.
  double tail(double r) const;
  double log_tail(double r) const;
  /// -d/dr of tail(r).
  double density(double r) const;

 private:
  MrlCurve curve_;
  std::vector<double> slopes_;
  std::vector<double> cumulative_;
};

}  // namespace restart

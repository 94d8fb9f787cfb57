#pragma once

#include <memory>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "restart/mrl_curve.hpp"
#include "restart/tail_curve.hpp"

namespace restart {

using Rng = std::mt19937_64;

// Lifetime families. All times are on [0, inf].

struct Exponential {
  double rate = 1.0;
};

/// Unit-scale Weibull, F̄(t) = exp(-t^shape).
struct Weibull {
  double shape = 1.0;
};

/// F̄(t) = k² / (t + k)², the normalised form of (t + k)^-2.
struct ShiftedParetoSquare {
  double offset = 0.5;
};

/// F̄(t) = levels[i] on [breakpoints[i], breakpoints[i+1]); breakpoints[0] == 0.
struct PiecewiseConstantTail {
  std::vector<double> breakpoints;
  std::vector<double> levels;
};

/// F̄(t) = exp(intercept - rate * t) on [start, next start).
struct ExpSegment {
  double start = 0.0;
  double intercept = 0.0;
  double rate = 0.0;
};

struct PiecewiseExpTail {
  std::vector<ExpSegment> segments;
};

/// First passage of standard Brownian motion above `level`: F̄(t) = erf(a / sqrt(2t)).
struct LevyFirstPassage {
  double level = 1.0;
};

struct Tabulated {
  TailCurve curve;
};

struct FromMrl {
  MrlCurve curve;
};

using Family = std::variant<Exponential, Weibull, ShiftedParetoSquare, PiecewiseConstantTail,
                            PiecewiseExpTail, LevyFirstPassage, Tabulated, FromMrl>;

/**
 * A lifetime law as the user describes it. `defect` mixes in extra mass at
 * infinity: the tail becomes defect + (1 - defect) * F̄_family.
 */
struct DistributionSpec {
  Family family;
  double defect = 0.0;
};

/// How fast F̄ decays; drives finiteness of moments.
struct TailClass {
  enum class Kind { Compact, Light, Power, Defective };
  Kind kind = Kind::Light;
  double exponent = 0.0;  ///< F̄(t) ~ t^-exponent for Kind::Power
};

/// Nondecreasing G : [0, inf] -> [0, inf] used for G-moments.
struct MomentFunction {
  enum class Kind { Identity, Power, IndicatorAbove, Tabulated };
  Kind kind = Kind::Identity;
  double parameter = 1.0;  ///< exponent for Power, threshold for IndicatorAbove
  std::vector<double> grid;
  std::vector<double> values;

  static MomentFunction identity();
  static MomentFunction power(double p);
  static MomentFunction indicator_above(double threshold);
  /// Piecewise linear through (grid, values), constant past the last node.
  static MomentFunction tabulated(std::vector<double> grid, std::vector<double> values);

  double operator()(double t) const;
  bool bounded() const;
};

class TailModel;

/**
 * A validated lifetime law. Cheap to copy; the underlying model is immutable
 * and shared, so instances may be used from several threads.
 */
class Distribution {
 public:
  /// Validates `spec`; throws restart::Error on ZeroAtOrigin, DegenerateAtZero, NonMonotone.
  /// Reset epochs need no mass near zero, so they pass `require_mass_near_zero = false`.
  explicit Distribution(DistributionSpec spec, bool require_mass_near_zero = true);

  const DistributionSpec& spec() const { return spec_; }
  std::string describe() const;

  /// F̄(t) = P(T > t); tail(inf) == 0.
  double tail(double t) const;
  /// F̄(t-) = P(T >= t).
  double tail_left(double t) const;
  double log_tail(double t) const;
  /// H(a + d) - H(a) for the cumulative hazard H = -log F̄, without cancellation
  /// for the parametric families; 0 once F̄(a) = 0.
  double hazard_increment(double a, double d) const;
  /// Density of the absolutely continuous part.
  double density(double t) const;
  /// All finite atoms, including one at 0 when F̄(0) < 1.
  const std::vector<Atom>& atoms() const { return atoms_; }
  /// Jump and kink points plus a few scale markers, for quadrature splitting.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// t0 = sup supp.
  double support_sup() const { return support_sup_; }
  double mass_at_infinity() const { return mass_at_infinity_; }
  TailClass tail_class() const { return tail_class_; }
  /// Characteristic time scale of the family.
  double scale() const;
  /// Smallest power-of-two time past which F̄ - mass_at_infinity <= level (capped).
  double horizon(double level = 1e-10) const;

  /// inf{t : -log F̄(t) >= q}, q >= 0.
  double hazard_quantile(double q) const;
  /// Inverse-transform draw.
  double sample(Rng& rng) const;
  /// One draw of the minimum of `copies` independent copies.
  double sample_min(Rng& rng, double copies) const;

  double mean() const;
  double second_moment() const;
  double g_moment(const MomentFunction& g) const;

 private:
  DistributionSpec spec_;
  std::shared_ptr<const TailModel> model_;
  std::vector<Atom> atoms_;
  std::vector<double> breakpoints_;
  double support_sup_ = 0.0;
  double mass_at_infinity_ = 0.0;
  TailClass tail_class_;
  double mean_ = 0.0;
};

/// The `validate` operation: returns the normalised, checked law.
Distribution validate(DistributionSpec spec);

/// Standard-exponential draw from the stream, in (0, inf).
double draw_exponential(Rng& rng);

}  // namespace restart

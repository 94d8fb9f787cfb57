#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "restart/distribution.hpp"
#include "restart/tail_curve.hpp"

namespace restart {

/**
 * Law of the restart epoch R: a point mass at r, Exp(rate), or a general law
 * on [0, inf]. A general law needs mass on (0, inf]; it may put mass at 0.
 */
struct ResetLaw {
  enum class Kind { Deterministic, Exponential, General };

  Kind kind = Kind::Deterministic;
  double parameter = 1.0;  ///< r for Deterministic, rate for Exponential
  std::shared_ptr<const Distribution> law;

  static ResetLaw deterministic(double r);
  static ResetLaw exponential(double rate);
  static ResetLaw general(DistributionSpec spec);

  /// P(R > t).
  double tail(double t) const;
  /// P(R >= t).
  double tail_left(double t) const;
  double density(double t) const;
  /// Finite atoms, including one at 0.
  std::vector<Atom> atoms() const;
  std::vector<double> breakpoints() const;
  double scale() const;
  double sample(Rng& rng) const;
  std::string describe() const;
};

/// F̄(r)^k F̄(t - kr) with k = floor(t / r). Throws InvalidPeriod for r <= 0.
double deterministic_reset_tail(const Distribution& law, double r, double t);

/// Tail of the single-reset law: F̄(t) P(R > t) + ∫_[0,t] F̄(s) F̄(t - s) R(ds).
double single_reset_tail(const Distribution& law, const ResetLaw& reset, double t);

struct RenewalOptions {
  double horizon = 0.0;        ///< 0 picks one from the scales of both laws
  std::size_t cells = 0;       ///< initial cell count (power of two); 0 = default
  std::size_t max_cells = 0;   ///< refinement cap; 0 = default
  double tolerance = 1e-6;     ///< target for the grid-halving error estimate
  bool throw_if_coarse = true;
};

/**
 * Solution of F̄ᴿ(t) = F̄(t) P(R > t) + ∫_[0,t] F̄(s) F̄ᴿ(t - s) R(ds) on a
 * uniform grid. Both one-sided values are kept at every node so jumps at
 * nodes are represented exactly. Between nodes G - F̄ is interpolated by a
 * cubic, which keeps the singular and jump parts of F̄ exact.
 */
struct RenewalSolution {
  std::shared_ptr<const Distribution> law;
  std::shared_ptr<const ResetLaw> reset;
  double step = 0.0;
  std::vector<double> left;
  std::vector<double> right;
  double error = 0.0;          ///< max change against the half-resolution solve
  double terminal_rate = 0.0;  ///< exponential continuation past the horizon
  std::size_t cells = 0;

  double horizon() const { return step * static_cast<double>(cells); }
  double operator()(double t) const;
  /// Node interpolant only, without the renewal step used near the origin.
  double interpolate(double t) const;
  /// Linear-interpolation TailCurve through the right values.
  TailCurve curve() const;
};

/// Forward solve with Richardson error control; throws GridTooCoarse past the cap.
RenewalSolution solve_renewal(const Distribution& law, const ResetLaw& reset,
                              const RenewalOptions& options = {});

/**
 * Tail of the law under repeated reset, sampled on `t_grid` (0 is added if
 * missing). Deterministic resets use the closed form; others use the solver
 * over [0, max t_grid].
 */
TailCurve reset_tail(const Distribution& law, const ResetLaw& reset, std::span<const double> t_grid,
                     const RenewalOptions& options = {});

/// E[T ∧ R] / P(T <= R), with ties counted as completion.
double reset_mean(const Distribution& law, const ResetLaw& reset);

/// (1 - L(μ)) / (μ L(μ)) with L(μ) = E[e^{-μT}] from the atoms and the density.
double exp_reset_mean(const Distribution& law, double rate);

/// ∫_0^∞ e^{-μt} F̄(t) dt.
double laplace_tail(const Distribution& law, double rate);

/// F̄(r)^{(l^k - 1)/(l - 1)} F̄(t - kr)^{l^k} on [kr, (k+1)r).
double branching_deterministic_tail(const Distribution& law, double r, int l, double t);

struct SeriesSum {
  double value = 0.0;
  double envelope = 0.0;  ///< last running product; bounds the dropped terms' ratio
  std::size_t terms = 0;
};

/// μ⁻¹ Σ_k Π_{n<=k} q(l^n), q(m) = μ ∫ e^{-μt} F̄(t)^m dt.
SeriesSum branching_mean_exponential(const Distribution& law, double rate, int l);

/// Σ_k F̄(r)^{(l^k - 1)/(l - 1)} ∫_0^r F̄^{l^k}.
SeriesSum branching_mean_deterministic(const Distribution& law, double r, int l);

}  // namespace restart

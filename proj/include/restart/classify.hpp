#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "restart/distribution.hpp"
#include "restart/reset.hpp"

namespace restart {

enum class Verdict { Holds, Fails, Inconclusive, Undefined };

const char* to_string(Verdict v) noexcept;

/**
 * Outcome of one inequality check over a grid.
 *
 * `margin` is the worst signed relative violation seen (positive means the
 * inequality is broken there); `witness` holds the coordinates where it was
 * attained. `error` is the numerical error estimate of that margin.
 */
struct Check {
  std::string name;
  Verdict verdict = Verdict::Undefined;
  double margin = 0.0;
  double error = 0.0;
  std::vector<double> witness;
  std::size_t evaluated = 0;
  std::string note;

  bool holds() const { return verdict == Verdict::Holds; }
  bool fails() const { return verdict == Verdict::Fails; }
};

struct ClassifyConfig {
  double epsilon = 0.0;                        ///< 0 picks the family default
  std::vector<int> branching = {2, 3};         ///< l values for the l-fold checks
  std::vector<double> mu_grid;                 ///< empty picks a geometric grid around 1/scale
  std::size_t pair_points = 140;               ///< per axis, for (x, y) checks
  std::size_t t_points = 160;                  ///< exponential-reset condition
  std::size_t r_points = 240;                  ///< mean conditions and deterministic resets
  double horizon = 0.0;                        ///< T*; 0 picks one from the law
};

/// Grids shared by the checks of one classify() run.
struct ClassifyGrids {
  std::vector<double> pair_axis;
  std::vector<double> t_grid;
  std::vector<double> r_grid;
  std::vector<double> mu_grid;
  double horizon = 0.0;
};

ClassifyGrids make_grids(const Distribution& law, const ClassifyConfig& config);

/// Default ε: 1e-9 for closed-form families, 1e-6 for tabulated and MRL-generated ones.
double default_epsilon(const Distribution& law);

/// Verdict from a worst margin and its error: holds at <= ε, fails past ε + error.
Verdict decide(double margin, double error, double epsilon);

// Dominance under every reset law: F̄(x)F̄(y) against F̄(x + y).
Check check_supermultiplicative(const Distribution& law, std::span<const double> axis, double epsilon);
Check check_submultiplicative(const Distribution& law, std::span<const double> axis, double epsilon);
/// F̄(x)F̄(y) <= F̄(x + y) on the product xs × ys only, e.g. a single slice x = 1.
Check check_supermultiplicative(const Distribution& law, std::span<const double> xs, std::span<const double> ys,
                                double epsilon);

/// F̄(x + y) >= F̄(x) F̄(y)^l on ordered pairs (l >= 2).
Check check_lfold_supermultiplicative(const Distribution& law, int l, std::span<const double> axis,
                                      double epsilon);
/// Equality probe F̄(x + y) == F̄(x) F̄(y)^l; expected to fail for every law.
Check check_lfold_invariance(const Distribution& law, int l, std::span<const double> axis, double epsilon);

// Deterministic resets through the closed form, on the (r, t) grid.
Check check_deterministic_no_bigger(const Distribution& law, std::span<const double> r_grid,
                                    std::span<const double> t_grid, double epsilon, int l = 1);
Check check_deterministic_no_smaller(const Distribution& law, std::span<const double> r_grid,
                                     std::span<const double> t_grid, double epsilon);

/**
 * (1/t) ∫_0^t F̄(u) F̄(t - u)^l du against F̄(t) on the t grid. `no_bigger`
 * selects the direction; the no-smaller direction is only defined for l = 1.
 */
Check check_exp_reset_condition(const Distribution& law, std::span<const double> t_grid, double epsilon,
                                int l = 1, bool no_bigger = true);

/// m(r) against m0 on the r grid; Undefined for infinite means.
Check check_mean_condition(const Distribution& law, std::span<const double> r_grid, double epsilon,
                           bool no_bigger);

/// ∫_0^r F̄ / F(r) against m0, i.e. the mean under every deterministic reset.
Check check_deterministic_mean(const Distribution& law, std::span<const double> r_grid, double epsilon,
                               bool no_bigger);

/// ∫_0^∞ exp(-μt - ∫_0^t dv/m(v)) dt against 1/(1/m0 + μ), one check per μ.
std::vector<Check> check_exp_mean_condition(const Distribution& law, std::span<const double> mu_grid,
                                            double epsilon, bool no_bigger);

/// E[T²] against 2 E[T]²; holds when E[T²] >= 2 E[T]².
Check check_second_order(const Distribution& law, double epsilon);

/// Combines a no-bigger and a no-smaller check into an invariance verdict.
Check combine_invariant(const Check& no_bigger, const Check& no_smaller, std::string name);

/// Worst-over-grid aggregate of per-μ checks.
Check aggregate(const std::vector<Check>& checks, std::string name);

struct ClassificationReport {
  std::string law;
  double epsilon = 0.0;
  ClassifyGrids grids;
  std::vector<Check> checks;
  std::vector<Check> exp_mean_no_bigger_by_mu;
  std::vector<Check> exp_mean_no_smaller_by_mu;
  bool exponential = false;

  /// Throws std::out_of_range for unknown names.
  const Check& at(std::string_view name) const;
  bool any_inconclusive() const;
};

/**
 * Runs every check with shared grids. Check names:
 * {no_bigger,no_smaller,invariant}_{reset,deterministic_reset,exp_reset,mean,deterministic_mean,exp_mean},
 * second_order, lfold_no_bigger_<l>, lfold_deterministic_no_bigger_<l>, lfold_exp_no_bigger_<l>,
 * lfold_invariance_<l>.
 */
ClassificationReport classify(const Distribution& law, const ClassifyConfig& config = {});

/// The six no-bigger (or no-smaller) check names, dominance first.
const std::vector<std::string>& six_conditions(bool no_bigger);

/**
 * Corollary-style diagnostic: 𝒯[G] and 𝒯^ℛ[G] side by side. The transformed
 * moment integrates G against the reset tail over the solver horizon and
 * the closed form beyond it.
 */
struct MomentTransfer {
  double original = 0.0;
  double transformed = 0.0;
  double error = 0.0;
  bool finite_transfers = true;  ///< original finite implies transformed finite
};

MomentTransfer moment_transfer_check(const Distribution& law, const ResetLaw& reset, const MomentFunction& g);

}  // namespace restart

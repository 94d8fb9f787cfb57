#pragma once

#include <span>
#include <vector>

#include "restart/distribution.hpp"

namespace restart {

/// ∫_0^r F̄ / F(r) on the grid, i.e. the mean under a reset every r.
std::vector<double> deterministic_mean_curve(const Distribution& law, std::span<const double> r_grid);

struct ExponentialOptimum {
  double rate = 0.0;
  double mean = 0.0;
  bool improves = false;  ///< mean < m0
};

/**
 * Golden-section minimum of μ ↦ exp_reset_mean(law, μ) over [lo, hi], after a
 * coarse log-spaced scan picks the bracket. Relative tolerance 1e-6 in μ.
 * Throws NoImprovement when the minimum found is not below m0.
 */
ExponentialOptimum best_exponential_rate(const Distribution& law, double lo, double hi);

struct ExtremalReport {
  double m0 = 0.0;
  double sup = 0.0;
  double inf = 0.0;
  /// Where the extremes sit; 0 and inf mark the limits r -> 0 and r -> inf.
  double sup_at = 0.0;
  double inf_at = 0.0;
  bool sup_diverges = false;
  double limit_at_zero = 0.0;
  double limit_at_infinity = 0.0;
  std::vector<double> r_grid;
  std::vector<double> curve;
  double best_deterministic_r = 0.0;
  double best_deterministic_mean = 0.0;
  ExponentialOptimum best_exponential;
  bool exponential_searched = false;  ///< false when the search reported NoImprovement

  bool restart_helps() const { return inf < m0; }
  bool restart_harmful() const { return sup > m0; }
};

struct ExtremalConfig {
  std::vector<double> r_grid;  ///< empty picks a geometric grid over [1e-6 scale, T*]
  std::size_t points = 400;
  double mu_lo = 0.0;          ///< 0 picks 1e-4 / scale
  double mu_hi = 0.0;          ///< 0 picks 1e4 / scale
  std::size_t threads = 0;
};

/**
 * sup and inf of the reset mean over all reset laws, through the
 * deterministic curve plus its limits at r -> 0 and r -> inf, with three
 * rounds of local refinement around the grid extremes.
 */
ExtremalReport extremal_reset_mean(const Distribution& law, const ExtremalConfig& config = {});

}  // namespace restart

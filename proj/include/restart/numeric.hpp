#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace restart {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Result of a numerical integral together with its absolute error estimate.
struct Integral {
  double value = 0.0;
  double error = 0.0;
};

/**
 * Integrates `f` over [a, b] where `b` may be +infinity.
 *
 * The range is split at every point of `breaks` that falls inside (a, b) so
 * that jump and kink points of tail functions never sit inside a quadrature
 * panel. Finite panels use adaptive Gauss-Kronrod (31 points); a final
 * semi-infinite panel uses exp-sinh, which copes with algebraic decay.
 */
Integral integrate(const std::function<double(double)>& f, double a, double b,
                   std::span<const double> breaks = {}, double rel_tol = 1e-12);

/**
 * Globally adaptive Gauss-Kronrod (31 points) on the finite range [a, b]:
 * the panel with the largest error estimate is bisected until the summed
 * error is below max(abs_tol, rel_tol * |value|) or `max_panels` is reached.
 * Cheaper than `integrate` when most panels contribute nothing.
 */
Integral integrate_global(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breaks, double rel_tol, double abs_tol,
                          std::size_t max_panels = 4000);

/// Fixed-order Gauss-Legendre rule on a smooth panel; no error estimate.
double integrate_smooth(const std::function<double(double)>& f, double a, double b);

/// n points geometrically spaced on [lo, hi], lo > 0.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// n points evenly spaced on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/**
 * Working grid on [0, t_max]: half the points geometric down to
 * t_max * floor, half linear, plus 0, every break inside the range and the
 * midpoints between consecutive breaks. Sorted, duplicates removed.
 */
std::vector<double> hybrid_grid(double t_max, std::size_t n, std::span<const double> breaks = {},
                                double floor = 1e-9);

/// Sorts and removes entries closer than `rel_gap` (relative) to their predecessor.
void sort_unique(std::vector<double>& xs, double rel_gap = 1e-14);

/**
 * Signed relative gap (lhs - rhs) / max(lhs, rhs) for nonnegative operands.
 * Zero when both are zero; +1 when only lhs is infinite.
 */
double relative_margin(double lhs, double rhs);

/// Same as relative_margin, from logarithms of the operands (-inf allowed).
double log_relative_margin(double log_lhs, double log_rhs);

/// Smallest power of two that is >= x (x > 0).
double next_power_of_two(double x);

/**
 * Calls body(i) for i in [0, n) on up to `threads` workers (0 = hardware
 * concurrency), in contiguous blocks. The first exception is rethrown.
 */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t threads = 0);

}  // namespace restart

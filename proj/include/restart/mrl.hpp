#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "restart/distribution.hpp"
#include "restart/mrl_curve.hpp"

namespace restart {

/// m(r) = ∫_r^∞ F̄ / F̄(r), evaluated in log space; 0 for r >= t0. Throws InfiniteMean.
double mrl_from_tail(const Distribution& law, double r);

/**
 * m at every point of the sorted grid, from one backward accumulation of
 * ∫ F̄ over the gaps. Points at or past t0 get 0.
 */
std::vector<double> mrl_on_grid(const Distribution& law, std::span<const double> sorted_grid);

/**
 * Samples m on `grid` (must start at 0) with exact node slopes
 * m' = m * hazard - 1 where the hazard is finite. Nodes at or past t0 are
 * dropped. The terminal piece is linear for power tails, constant otherwise.
 */
MrlCurve mrl_curve(const Distribution& law, std::span<const double> grid);

/// Same on an automatic grid over [0, horizon], refined around atoms.
MrlCurve mrl_curve(const Distribution& law, std::size_t points = 600);

/// F̄(r) = (m0 / m(r)) exp(-∫_0^r dv / m(v)). Throws InvalidMrl.
double tail_from_mrl(const MrlCurve& curve, double r);

/// The law generated by `curve`; throws InvalidMrl when the curve is not a generator.
DistributionSpec law_from_mrl(const MrlCurve& curve);

}  // namespace restart

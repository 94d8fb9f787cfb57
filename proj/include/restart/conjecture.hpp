#pragma once

#include <span>
#include <vector>

#include "restart/distribution.hpp"

namespace restart {

/**
 * ∫_0^t F̄(u)^l F̄(t - u) du - t F̄(t) on a grid. A law invariant under l-fold
 * branching with exponential reset would make this vanish identically; the
 * probe only reports how far each law is from that.
 */
struct InvarianceResidual {
  int l = 2;
  std::vector<double> t;
  std::vector<double> residual;
  double sup_norm = 0.0;
  double argsup = 0.0;
  /// Only continuous laws with F̄(0) = 1 are candidates.
  bool candidate = true;
};

InvarianceResidual lfold_invariance_residual(const Distribution& law, int l, std::span<const double> t_grid);

}  // namespace restart

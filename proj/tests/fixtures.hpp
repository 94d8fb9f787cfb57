#pragma once

#include <string>
#include <vector>

#include "restart/distribution.hpp"

namespace fixtures {

using namespace restart;

inline DistributionSpec exponential(double rate = 1.0) { return {Exponential{rate}}; }
inline DistributionSpec weibull(double k) { return {Weibull{k}}; }
inline DistributionSpec pareto(double k = 0.5) { return {ShiftedParetoSquare{k}}; }
inline DistributionSpec levy(double a = 1.0) { return {LevyFirstPassage{a}}; }

// Tail 1/2, 1/4, 1/6 on [0, 1), [1, 3/2), [3/2, inf).
inline DistributionSpec halves() { return {PiecewiseConstantTail{{0.0, 1.0, 1.5}, {0.5, 0.25, 1.0 / 6.0}}}; }

// e^{-t-0.1} on [0, 1), e^{-t-0.25} after.
inline DistributionSpec two_piece_exp() { return {PiecewiseExpTail{{{0.0, -0.1, 1.0}, {1.0, -0.25, 1.0}}}}; }

// e^{-t} off [1, 2], e^{-2} on it.
inline DistributionSpec plateau() { return {PiecewiseExpTail{{{0.0, 0.0, 1.0}, {1.0, -2.0, 0.0}, {2.0, 0.0, 1.0}}}}; }

inline DistributionSpec uniform(double hi) {
  TailCurve c;
  c.grid = {0.0, hi};
  c.values = {1.0, 0.0};
  c.mode = Interpolation::Linear;
  return {Tabulated{c}};
}

struct Named {
  std::string name;
  DistributionSpec spec;
};

/// Laws with finite mean used across the property tests.
inline std::vector<Named> finite_mean() {
  return {{"exponential", exponential()}, {"weibull0.5", weibull(0.5)}, {"weibull1.5", weibull(1.5)},
          {"weibull3", weibull(3.0)},     {"pareto0.5", pareto()},      {"two_piece_exp", two_piece_exp()},
          {"plateau", plateau()},         {"uniform2", uniform(2.0)}};
}

}  // namespace fixtures

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "restart/conjecture.hpp"
#include "restart/numeric.hpp"

using namespace restart;

TEST_CASE("exponential, l = 2: closed-form residual") {
  const double lambda = 1.5;
  const Distribution e(fixtures::exponential(lambda));
  const auto grid = linear_grid(0.0, 6.0, 61);
  const auto r = lfold_invariance_residual(e, 2, grid);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double t = grid[i];
    const double expected = std::exp(-lambda * t) * ((1.0 - std::exp(-lambda * t)) / lambda - t);
    CHECK(r.residual[i] == doctest::Approx(expected).epsilon(1e-10));
    CHECK(r.residual[i] < 0.0);
  }
  CHECK(r.candidate);
}

TEST_CASE("exponential, l = 1: identically zero") {
  const Distribution e(fixtures::exponential());
  const auto r = lfold_invariance_residual(e, 1, linear_grid(0.0, 10.0, 51));
  CHECK(r.sup_norm <= 1e-12);
}

TEST_CASE("weibull(0.5), l = 2: nonzero residual") {
  const auto r = lfold_invariance_residual(Distribution(fixtures::weibull(0.5)), 2, linear_grid(0.0, 10.0, 51));
  CHECK(r.sup_norm > 1e-3);
  CHECK(r.argsup > 0.0);
}

TEST_CASE("laws with atoms are not candidates") {
  const auto r = lfold_invariance_residual(Distribution(fixtures::halves()), 2, linear_grid(0.0, 3.0, 7));
  CHECK_FALSE(r.candidate);
}

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "restart/error.hpp"
#include "restart/mrl.hpp"
#include "restart/numeric.hpp"

using namespace restart;

TEST_CASE("exponential has constant mean residual life") {
  const Distribution d(fixtures::exponential(2.0));
  for (double r : {0.0, 0.3, 5.0, 40.0}) CHECK(mrl_from_tail(d, r) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("shifted pareto square has m(r) = r + k") {
  const Distribution d(fixtures::pareto(0.5));
  for (double r : {0.0, 0.1, 3.0, 100.0}) CHECK(mrl_from_tail(d, r) == doctest::Approx(r + 0.5).epsilon(1e-8));
}

TEST_CASE("mean residual life is zero past the support") {
  const Distribution u(fixtures::uniform(2.0));
  CHECK(mrl_from_tail(u, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mrl_from_tail(u, 2.5) == 0.0);
}

TEST_CASE("mrl_on_grid agrees with pointwise evaluation") {
  const Distribution d(fixtures::weibull(1.5));
  const auto grid = hybrid_grid(8.0, 100);
  const auto m = mrl_on_grid(d, grid);
  for (std::size_t i = 0; i < grid.size(); i += 9) {
    CHECK(m[i] == doctest::Approx(mrl_from_tail(d, grid[i])).epsilon(1e-9));
  }
}

TEST_CASE("infinite mean is rejected") {
  const Distribution d(fixtures::levy());
  CHECK_THROWS_AS(mrl_from_tail(d, 1.0), Error);
}

TEST_CASE("tail -> mrl -> tail round trip") {
  for (const auto& spec : {fixtures::exponential(), fixtures::weibull(0.7), fixtures::pareto(0.5)}) {
    const Distribution d(spec);
    const MrlCurve c = mrl_curve(d);
    double worst = 0.0;
    for (double r : hybrid_grid(d.horizon(), 400)) worst = std::max(worst, std::abs(tail_from_mrl(c, r) - d.tail(r)));
    CAPTURE(d.describe());
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("law_from_mrl builds a law from a generator") {
  MrlCurve c;
  c.grid = {0.0, 1.0};
  c.values = {1.0, 1.0};
  c.m0 = 1.0;
  const Distribution d(law_from_mrl(c));
  CHECK(d.tail(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("non-generators are rejected") {
  MrlCurve steep;
  steep.grid = {0.0, 1.0};
  steep.values = {3.0, 0.5};  // slope -2.5 < -1
  steep.m0 = 3.0;
  CHECK_THROWS_AS(validate_generator(steep), Error);

  MrlCurve big_m0;
  big_m0.grid = {0.0, 1.0};
  big_m0.values = {1.0, 1.0};
  big_m0.m0 = 2.0;
  CHECK_THROWS_AS(validate_generator(big_m0), Error);
}

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "restart/error.hpp"
#include "restart/numeric.hpp"
#include "restart/reset.hpp"

using namespace restart;

TEST_CASE("deterministic reset closed form") {
  const Distribution w(fixtures::weibull(2.0));
  CHECK(deterministic_reset_tail(w, 1.0, 1.5) == doctest::Approx(std::exp(-1.25)).epsilon(1e-14));
  CHECK(deterministic_reset_tail(w, 1.0, 0.5) == doctest::Approx(w.tail(0.5)));
  CHECK(deterministic_reset_tail(w, 1.0, 2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK_THROWS_AS(deterministic_reset_tail(w, 0.0, 1.0), Error);
}

TEST_CASE("reset laws") {
  CHECK_THROWS_AS(ResetLaw::deterministic(-1.0), Error);
  CHECK_THROWS_AS(ResetLaw::exponential(0.0), Error);
  const auto e = ResetLaw::exponential(2.0);
  CHECK(e.tail(1.0) == doctest::Approx(std::exp(-2.0)));
  const auto d = ResetLaw::deterministic(1.0);
  CHECK(d.tail(0.999) == 1.0);
  CHECK(d.tail(1.0) == 0.0);
  CHECK(d.tail_left(1.0) == 1.0);
  const auto u = ResetLaw::general(fixtures::uniform(2.0));
  CHECK(u.tail(0.5) == doctest::Approx(0.75));
}

TEST_CASE("single reset") {
  const Distribution w(fixtures::weibull(0.5));
  const auto r = ResetLaw::deterministic(1.0);
  CHECK(single_reset_tail(w, r, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(single_reset_tail(w, r, 0.5) == doctest::Approx(w.tail(0.5)).epsilon(1e-14));

  const Distribution e(fixtures::exponential());
  for (double t : {0.3, 1.0, 4.0}) {
    CHECK(single_reset_tail(e, ResetLaw::exponential(0.7), t) == doctest::Approx(std::exp(-t)).epsilon(1e-9));
  }
}

TEST_CASE("exponential law is a fixed point of the renewal solver") {
  const Distribution e(fixtures::exponential());
  for (const auto& reset : {ResetLaw::exponential(0.5), ResetLaw::exponential(2.0),
                            ResetLaw::general(fixtures::uniform(2.0)), ResetLaw::deterministic(1.0)}) {
    RenewalOptions o;
    o.horizon = 10.0;
    const auto s = solve_renewal(e, reset, o);
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) worst = std::max(worst, std::abs(s(0.02 * i) - std::exp(-0.02 * i)));
    CAPTURE(reset.describe());
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("renewal solver reproduces the deterministic closed form") {
  const Distribution w(fixtures::weibull(1.5));
  RenewalOptions o;
  o.horizon = 8.0;
  const auto s = solve_renewal(w, ResetLaw::deterministic(1.0), o);
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = 0.02 * i;
    worst = std::max(worst, std::abs(s(t) - deterministic_reset_tail(w, 1.0, t)));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("reset mean against the integrated reset tail") {
  const Distribution w(fixtures::weibull(0.5));
  const auto reset = ResetLaw::exponential(1.0);
  RenewalOptions o;
  o.horizon = 32.0;
  o.tolerance = 1e-8;
  o.throw_if_coarse = false;
  const auto s = solve_renewal(w, reset, o);
  REQUIRE(s.terminal_rate > 0.0);
  const double tail_integral =
      integrate([&](double t) { return s(t); }, 0.0, o.horizon, {}, 1e-10).value +
      s(o.horizon) / s.terminal_rate;
  CHECK(reset_mean(w, reset) == doctest::Approx(tail_integral).epsilon(1e-6));
}

TEST_CASE("exp_reset_mean matches reset_mean under exponential resets") {
  for (const auto& f : fixtures::finite_mean()) {
    const Distribution d(f.spec);
    for (double mu : {0.3, 1.0, 4.0}) {
      CAPTURE(f.name);
      CAPTURE(mu);
      CHECK(exp_reset_mean(d, mu) == doctest::Approx(reset_mean(d, ResetLaw::exponential(mu))).epsilon(1e-8));
    }
  }
}

TEST_CASE("exponential law keeps its mean under any reset") {
  const Distribution e(fixtures::exponential(1.0));
  CHECK(reset_mean(e, ResetLaw::deterministic(0.5)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(reset_mean(e, ResetLaw::exponential(3.0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(reset_mean(e, ResetLaw::general(fixtures::uniform(2.0))) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("reset can make an infinite mean finite") {
  const Distribution l(fixtures::levy());
  const double m = reset_mean(l, ResetLaw::deterministic(1.0));
  CHECK(std::isfinite(m));
  CHECK(m == doctest::Approx(2.6766224637).epsilon(1e-8));
}

TEST_CASE("laplace transform of the tail") {
  const Distribution e(fixtures::exponential(1.0));
  CHECK(laplace_tail(e, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("branching series") {
  const Distribution e(fixtures::exponential());
  const Distribution w(fixtures::weibull(0.5));

  double ref = 0.0;
  for (int k = 0; k < 40; ++k) {
    const double m = std::pow(2.0, k);
    ref += std::exp(-(m - 1.0)) * (1.0 - std::exp(-m)) / m;
  }
  CHECK(branching_mean_deterministic(e, 1.0, 2).value == doctest::Approx(ref).epsilon(1e-10));

  // l = 1 gives back the plain reset means.
  CHECK(branching_mean_deterministic(w, 1.3, 1).value ==
        doctest::Approx(reset_mean(w, ResetLaw::deterministic(1.3))).epsilon(1e-8));
  CHECK(branching_mean_exponential(w, 1.0, 1).value == doctest::Approx(exp_reset_mean(w, 1.0)).epsilon(1e-8));

  // More copies can only shrink the minima.
  CHECK(branching_mean_exponential(w, 1.0, 2).value < branching_mean_exponential(w, 1.0, 1).value);

  CHECK(branching_deterministic_tail(w, 1.0, 1, 2.5) == doctest::Approx(deterministic_reset_tail(w, 1.0, 2.5)));
  CHECK(branching_deterministic_tail(e, 1.0, 2, 2.5) == doctest::Approx(std::exp(-3.0 - 4.0 * 0.5)));
}

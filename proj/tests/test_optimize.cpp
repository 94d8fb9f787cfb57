#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "restart/error.hpp"
#include "restart/numeric.hpp"
#include "restart/optimize.hpp"
#include "restart/reset.hpp"

using namespace restart;

TEST_CASE("deterministic mean curve matches reset_mean") {
  for (const auto& spec : {fixtures::weibull(0.5), fixtures::plateau(), fixtures::levy()}) {
    const Distribution d(spec);
    const std::vector<double> r = {0.05, 0.5, 1.0, 1.5, 3.0, 10.0};
    const auto curve = deterministic_mean_curve(d, r);
    for (std::size_t i = 0; i < r.size(); ++i) {
      CAPTURE(d.describe());
      CAPTURE(r[i]);
      CHECK(curve[i] == doctest::Approx(reset_mean(d, ResetLaw::deterministic(r[i]))).epsilon(1e-8));
    }
  }
  const Distribution e(fixtures::exponential());
  const std::vector<double> r = {1e-6, 0.1, 10.0, 300.0};
  for (double v : deterministic_mean_curve(e, r)) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("extremes of the exponential law") {
  const auto rep = extremal_reset_mean(Distribution(fixtures::exponential(2.0)));
  CHECK(rep.sup == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.inf == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(rep.best_exponential.improves);
}

TEST_CASE("decreasing hazard: sup is m0 in the limit") {
  const auto rep = extremal_reset_mean(Distribution(fixtures::weibull(0.5)));
  CHECK(rep.m0 == doctest::Approx(2.0));
  CHECK(rep.inf < rep.m0);
  CHECK(rep.sup == doctest::Approx(rep.m0).epsilon(1e-12));
  CHECK(std::isinf(rep.sup_at));
  CHECK(rep.limit_at_zero == 0.0);
  CHECK(rep.restart_helps());
  CHECK_FALSE(rep.restart_harmful());
}

TEST_CASE("increasing hazard: inf is m0 in the limit") {
  const auto rep = extremal_reset_mean(Distribution(fixtures::weibull(1.5)));
  CHECK(rep.sup > rep.m0);
  CHECK(rep.inf == doctest::Approx(rep.m0).epsilon(1e-12));
  CHECK(std::isinf(rep.limit_at_zero));
  CHECK(rep.restart_harmful());
}

TEST_CASE("infinite mean: curve diverges, finite minimum inside") {
  const auto rep = extremal_reset_mean(Distribution(fixtures::levy()));
  CHECK(rep.sup_diverges);
  CHECK(std::isfinite(rep.inf));
  CHECK(rep.inf_at > 0.0);
  CHECK(std::isfinite(rep.inf_at));
  CHECK(rep.best_exponential.improves);
  CHECK(std::isfinite(rep.best_exponential.mean));
}

TEST_CASE("best exponential rate") {
  CHECK_THROWS_AS(best_exponential_rate(Distribution(fixtures::exponential()), 1e-3, 1e3), Error);
  CHECK_THROWS_AS(best_exponential_rate(Distribution(fixtures::weibull(2.0)), 1e-3, 1e3), Error);

  const auto best = best_exponential_rate(Distribution(fixtures::levy()), 1e-3, 1e3);
  CHECK(std::isfinite(best.mean));
  const Distribution l(fixtures::levy());
  for (double f : {0.9, 1.1}) CHECK(exp_reset_mean(l, best.rate * f) >= best.mean);

  const auto w = best_exponential_rate(Distribution(fixtures::weibull(0.5)), 1e-3, 1e3);
  CHECK(w.improves);
  CHECK(w.mean < 2.0);
}

TEST_CASE("normalised pareto law: exponential reset improves the mean") {
  const auto best = best_exponential_rate(Distribution(fixtures::pareto(0.5)), 1e-3, 1e3);
  CHECK(best.improves);
  CHECK(best.mean < 0.5);
}

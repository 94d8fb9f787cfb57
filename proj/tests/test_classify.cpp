#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "restart/classify.hpp"
#include "restart/numeric.hpp"

using namespace restart;

namespace {

ClassifyConfig small() {
  ClassifyConfig c;
  c.pair_points = 60;
  c.t_points = 60;
  c.r_points = 80;
  c.branching = {2};
  return c;
}

}  // namespace

TEST_CASE("decide") {
  CHECK(decide(-1.0, 0.0, 1e-9) == Verdict::Holds);
  CHECK(decide(5e-10, 0.0, 1e-9) == Verdict::Holds);
  CHECK(decide(1e-3, 1e-6, 1e-9) == Verdict::Fails);
  CHECK(decide(1e-6, 1e-5, 1e-9) == Verdict::Inconclusive);
  CHECK(decide(std::nan(""), 0.0, 1e-9) == Verdict::Inconclusive);
}

TEST_CASE("default epsilon") {
  CHECK(default_epsilon(Distribution(fixtures::weibull(2.0))) == 1e-9);
  CHECK(default_epsilon(Distribution(fixtures::uniform(2.0))) == 1e-6);
}

TEST_CASE("exponential law is flagged and invariant everywhere") {
  const auto rep = classify(Distribution(fixtures::exponential(3.0)), small());
  CHECK(rep.exponential);
  for (const char* name : {"invariant_reset", "invariant_deterministic_reset", "invariant_exp_reset",
                           "invariant_mean", "invariant_deterministic_mean", "invariant_exp_mean"}) {
    CAPTURE(name);
    CHECK(rep.at(name).holds());
  }
  CHECK_FALSE(rep.at("lfold_invariance_2").holds());
  CHECK_THROWS_AS(rep.at("no_such_check"), std::out_of_range);
}

TEST_CASE("decreasing hazard: restart never hurts") {
  const auto rep = classify(Distribution(fixtures::weibull(0.5)), small());
  CHECK_FALSE(rep.exponential);
  for (const auto& name : six_conditions(true)) CHECK(rep.at(name).holds());
  for (const auto& name : six_conditions(false)) CHECK(rep.at(name).fails());
  CHECK(rep.at("lfold_no_bigger_2").holds());
  CHECK(rep.at("second_order").holds());
}

TEST_CASE("increasing hazard: restart never helps") {
  const auto rep = classify(Distribution(fixtures::weibull(2.0)), small());
  for (const auto& name : six_conditions(false)) CHECK(rep.at(name).holds());
  for (const auto& name : six_conditions(true)) CHECK(rep.at(name).fails());
  CHECK(rep.at("second_order").fails());
}

TEST_CASE("supermultiplicativity witnesses") {
  const Distribution h(fixtures::halves());
  const auto axis = hybrid_grid(4.0, 80, h.breakpoints());
  const auto c = check_supermultiplicative(h, axis, 1e-9);
  CHECK(c.fails());
  REQUIRE(c.witness.size() == 2);
  const double x = c.witness[0];
  const double y = c.witness[1];
  CHECK(h.tail(x) * h.tail(y) > h.tail(x + y));
  CHECK(check_exp_reset_condition(h, linear_grid(0.05, 6.0, 120), 1e-9).holds());
}

TEST_CASE("two-axis slice") {
  const Distribution p(fixtures::plateau());
  const double one[] = {1.0};
  const auto u = linear_grid(0.0, 6.0, 301);
  CHECK(check_supermultiplicative(p, one, u, 1e-9).holds());
  const auto a = linear_grid(0.01, 0.99, 99);
  CHECK(check_supermultiplicative(p, a, a, 1e-9).fails());
}

TEST_CASE("exponential-reset condition picks up the two-piece law") {
  const Distribution d(fixtures::two_piece_exp());
  const auto c = check_exp_reset_condition(d, linear_grid(0.05, 6.0, 120), 1e-9);
  CHECK(c.fails());
  const double r[] = {0.1, 0.5, 1.0, 2.0, 5.0, 20.0};
  CHECK(check_mean_condition(d, r, 1e-9, true).holds());
}

TEST_CASE("mean checks are undefined for infinite means") {
  const Distribution l(fixtures::levy());
  const double r[] = {0.5, 1.0, 2.0};
  CHECK(check_mean_condition(l, r, 1e-9, true).verdict == Verdict::Undefined);
}

TEST_CASE("second order condition") {
  CHECK(check_second_order(Distribution(fixtures::pareto(0.5)), 1e-9).holds());
  CHECK(check_second_order(Distribution(fixtures::exponential()), 1e-9).holds());
  CHECK(check_second_order(Distribution(fixtures::weibull(3.0)), 1e-9).fails());
}

TEST_CASE("combine and aggregate") {
  Check a{"a", Verdict::Holds};
  Check b{"b", Verdict::Fails};
  CHECK(combine_invariant(a, a, "x").holds());
  CHECK(combine_invariant(a, b, "x").fails());
  CHECK(aggregate({a, b}, "y").fails());
  CHECK(aggregate({a, a}, "y").holds());
}

TEST_CASE("moment transfer") {
  const Distribution w(fixtures::weibull(0.5));
  const auto m = moment_transfer_check(w, ResetLaw::deterministic(1.0), MomentFunction::identity());
  CHECK(m.original == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(m.transformed <= m.original);
  CHECK(m.finite_transfers);

  const Distribution l(fixtures::levy());
  const auto ml = moment_transfer_check(l, ResetLaw::deterministic(1.0), MomentFunction::identity());
  CHECK(std::isinf(ml.original));
  CHECK(std::isfinite(ml.transformed));
}

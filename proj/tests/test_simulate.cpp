#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "restart/error.hpp"
#include "restart/reset.hpp"
#include "restart/simulate.hpp"

using namespace restart;

namespace {

SimulationConfig config(std::size_t n, std::vector<double> probes = {}) {
  SimulationConfig c;
  c.replicates = n;
  c.seed = 2024;
  c.probe_times = std::move(probes);
  return c;
}

bool same(const SimulationResult& a, const SimulationResult& b) {
  if (a.mean != b.mean || a.mean_standard_error != b.mean_standard_error || a.censored != b.censored ||
      a.cycle_histogram != b.cycle_histogram || a.tail.size() != b.tail.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.tail.size(); ++i) {
    if (a.tail[i].value != b.tail[i].value) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("replicate seeds differ and are reproducible") {
  CHECK(replicate_seed(1, 0) != replicate_seed(1, 1));
  CHECK(replicate_seed(1, 0) != replicate_seed(2, 0));
  CHECK(replicate_seed(5, 9) == replicate_seed(5, 9));
}

TEST_CASE("exponential law keeps its mean") {
  const Distribution e(fixtures::exponential());
  const auto r = simulate_reset(e, ResetLaw::deterministic(0.5), config(200000));
  CHECK(std::abs(r.mean - 1.0) <= 4.0 * r.mean_standard_error);
  CHECK(r.censored == 0);
}

TEST_CASE("weibull(2) under deterministic reset") {
  const Distribution w(fixtures::weibull(2.0));
  const auto reset = ResetLaw::deterministic(1.0);
  const auto r = simulate_reset(w, reset, config(100000, {0.0, 0.5, 1.5}));
  CHECK(r.mean > std::tgamma(1.5));
  CHECK(std::abs(r.mean - reset_mean(w, reset)) <= 3.0 * r.mean_standard_error);
  CHECK(r.tail[0].value == 1.0);
  for (const auto& e : r.tail) {
    CHECK(std::abs(e.value - deterministic_reset_tail(w, 1.0, e.t)) <= 4.0 * e.standard_error + 1e-12);
  }
}

TEST_CASE("single reset matches its closed form") {
  const Distribution w(fixtures::weibull(0.5));
  const auto reset = ResetLaw::deterministic(1.0);
  const auto r = simulate_single_reset(w, reset, config(100000, {0.5, 2.0, 3.0}));
  for (const auto& e : r.tail) {
    CAPTURE(e.t);
    CHECK(std::abs(e.value - single_reset_tail(w, reset, e.t)) <= 4.0 * e.standard_error);
  }
  CHECK(r.cycle_histogram.size() <= 3);
}

TEST_CASE("results do not depend on the number of chunks") {
  const Distribution w(fixtures::weibull(0.5));
  auto c = config(20000, {0.5, 1.0, 2.0});
  c.parallel_chunks = 1;
  const auto a = simulate_reset(w, ResetLaw::exponential(1.0), c);
  c.parallel_chunks = 3;
  const auto b = simulate_reset(w, ResetLaw::exponential(1.0), c);
  c.parallel_chunks = 7;
  const auto d = simulate_reset(w, ResetLaw::exponential(1.0), c);
  CHECK(same(a, b));
  CHECK(same(a, d));
}

TEST_CASE("branching with l = 1 reuses the reset streams") {
  const Distribution w(fixtures::weibull(0.5));
  const auto c = config(20000, {1.0});
  CHECK(same(simulate_branching(w, ResetLaw::exponential(1.0), 1, c), simulate_reset(w, ResetLaw::exponential(1.0), c)));
}

TEST_CASE("branching against its series, both sampling modes") {
  const Distribution e(fixtures::exponential());
  auto c = config(100000);
  const auto min_law = simulate_branching(e, ResetLaw::deterministic(1.0), 2, c);
  c.direct_branching = true;
  const auto direct = simulate_branching(e, ResetLaw::deterministic(1.0), 2, c);
  const double series = branching_mean_deterministic(e, 1.0, 2).value;
  CHECK(std::abs(min_law.mean - series) <= 3.0 * min_law.mean_standard_error);
  CHECK(std::abs(direct.mean - series) <= 3.0 * direct.mean_standard_error);
}

TEST_CASE("excessive censoring carries the partial result") {
  const Distribution e(fixtures::exponential());
  auto c = config(1000);
  c.max_cycles = 1;
  try {
    simulate_reset(e, ResetLaw::deterministic(0.1), c);
    FAIL("expected ExcessiveCensoring");
  } catch (const CensoringError& err) {
    CHECK(err.code() == ErrorCode::ExcessiveCensoring);
    CHECK(err.partial().replicates == 1000);
    CHECK(err.partial().censored_fraction > 0.5);
  }
}

TEST_CASE("excessive branching") {
  // Almost every cycle resets, so copies keep doubling.
  const Distribution d(fixtures::exponential(1e-9));
  auto c = config(100);
  c.max_cycles = 100;
  try {
    simulate_branching(d, ResetLaw::deterministic(1e-3), 2, c);
    FAIL("expected ExcessiveBranching");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ExcessiveBranching);
  }
}

TEST_CASE("tail at zero equals F(0)") {
  const Distribution h(fixtures::halves());
  const auto r = simulate_reset(h, ResetLaw::deterministic(1.2), config(50000, {0.0}));
  CHECK(std::abs(r.tail[0].value - h.tail(0.0)) <= 3.0 * r.tail[0].standard_error);
}

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <numeric>

#include "restart/numeric.hpp"

using namespace restart;

TEST_CASE("integrate handles infinite ranges and endpoint singularities") {
  CHECK(integrate([](double t) { return std::exp(-t); }, 0.0, kInf).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate([](double t) { return std::sqrt(t); }, 0.0, 1.0).value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(integrate([](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, 0.0, kInf).value ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrate splits at jumps") {
  const auto step = [](double t) { return t < 0.3 ? 1.0 : 0.25; };
  const double breaks[] = {0.3};
  CHECK(integrate(step, 0.0, 1.0, breaks).value == doctest::Approx(0.3 + 0.7 * 0.25).epsilon(1e-14));
}

TEST_CASE("integrate_global meets its tolerance on a peaked integrand") {
  const auto peak = [](double t) { return std::exp(-1e4 * (t - 0.37) * (t - 0.37)); };
  const auto r = integrate_global(peak, 0.0, 1.0, {}, 1e-12, 0.0);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI / 1e4)).epsilon(1e-11));
  CHECK(r.error < 1e-10);
}

TEST_CASE("grids") {
  const auto g = geometric_grid(1e-3, 1e3, 7);
  REQUIRE(g.size() == 7);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g[3] == doctest::Approx(1.0));
  CHECK(g.back() == doctest::Approx(1e3));

  const auto l = linear_grid(0.0, 1.0, 5);
  CHECK(l[2] == doctest::Approx(0.5));

  const double breaks[] = {0.7, 5.0};
  const auto h = hybrid_grid(2.0, 50, breaks);
  CHECK(h.front() == 0.0);
  CHECK(h.back() == doctest::Approx(2.0));
  CHECK(std::find(h.begin(), h.end(), 0.7) != h.end());
  CHECK(std::is_sorted(h.begin(), h.end()));
  CHECK(std::adjacent_find(h.begin(), h.end()) == h.end());
}

TEST_CASE("margins") {
  CHECK(relative_margin(2.0, 1.0) == doctest::Approx(0.5));
  CHECK(relative_margin(1.0, 2.0) == doctest::Approx(-0.5));
  CHECK(relative_margin(0.0, 0.0) == 0.0);
  CHECK(relative_margin(kInf, 1.0) == 1.0);
  CHECK(log_relative_margin(std::log(2.0), 0.0) == doctest::Approx(0.5));
  CHECK(log_relative_margin(-kInf, -kInf) == 0.0);
}

TEST_CASE("next_power_of_two") {
  CHECK(next_power_of_two(3.0) == 4.0);
  CHECK(next_power_of_two(4.0) == 4.0);
  CHECK(next_power_of_two(0.3) == 0.5);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }, 3),
                  std::runtime_error);
}

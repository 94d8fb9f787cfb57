#include "restart/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <queue>
#include <thread>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace restart {

namespace {

Integral integrate_panel(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol) {
  // The absolute floor keeps subnormal tails from driving the refinement.
  return integrate_global(f, lo, hi, {}, rel_tol, 1e-280, 2000);
}

// First panel from 0: tanh-sinh absorbs integrable endpoint singularities such as t^-1/2.
Integral integrate_from_origin(const std::function<double(double)>& f, double hi, double rel_tol) {
  try {
    boost::math::quadrature::tanh_sinh<double> ts(15);
    double err = 0.0;
    double l1 = 0.0;
    const double v = ts.integrate(f, 0.0, hi, rel_tol, &err, &l1);
    if (std::isfinite(v)) return {v, err};
  } catch (const std::exception&) {
    // fall back to Gauss-Kronrod
  }
  return integrate_panel(f, 0.0, hi, rel_tol);
}

Integral integrate_to_infinity(const std::function<double(double)>& f, double lo,
                               double rel_tol) {
  double err = 0.0;
  double l1 = 0.0;
  try {
    boost::math::quadrature::exp_sinh<double> es(12);
    const double v = es.integrate(f, lo, kInf, rel_tol, &err, &l1);
    if (std::isfinite(v)) return {v, err};
  } catch (const std::exception&) {
    // fall through to the mapped Gauss-Kronrod rule
  }
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, lo, kInf, 20, rel_tol, &err, &l1);
  return {v, err};
}

}  // namespace

Integral integrate(const std::function<double(double)>& f, double a, double b,
                   std::span<const double> breaks, double rel_tol) {
  if (!(b > a)) return {};
  std::vector<double> cuts{a};
  for (double x : breaks) {
    if (x > a && x < b && std::isfinite(x)) cuts.push_back(x);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Integral total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Integral p = cuts[i] == 0.0 ? integrate_from_origin(f, cuts[i + 1], rel_tol)
                                      : integrate_panel(f, cuts[i], cuts[i + 1], rel_tol);
    total.value += p.value;
    total.error += p.error;
  }
  const double last = cuts.back();
  const Integral p = std::isinf(b)  ? integrate_to_infinity(f, last, rel_tol)
                     : last == 0.0 ? integrate_from_origin(f, b, rel_tol)
                                   : integrate_panel(f, last, b, rel_tol);
  total.value += p.value;
  total.error += p.error;
  return total;
}

Integral integrate_global(const std::function<double(double)>& f, double a, double b,
                          std::span<const double> breaks, double rel_tol, double abs_tol,
                          std::size_t max_panels) {
  if (!(b > a)) return {};
  struct Panel {
    double lo, hi, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  // K31 with the embedded G15; |K - G| bounds the Gauss error and the QUADPACK
  // rescaling turns it into an estimate for the Kronrod value.
  auto eval = [&](double lo, double hi) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    using G = boost::math::quadrature::gauss<double, 15>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double f0 = f(c);
    double k = f0 * wk[0];
    double g = f0 * wg[0];
    double l1 = std::abs(k);
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double fp = f(c + h * x[i]);
      const double fm = f(c - h * x[i]);
      k += (fp + fm) * wk[i];
      l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
      if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
    }
    k *= h;
    g *= h;
    l1 *= h;
    double err = std::abs(k - g);
    if (l1 > 0.0 && std::isfinite(err)) err *= std::min(1.0, std::pow(200.0 * err / l1, 1.5));
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(k));
    return Panel{lo, hi, k, err};
  };
  std::vector<double> cuts{a};
  for (double x : breaks) {
    if (x > a && x < b) cuts.push_back(x);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> queue;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Panel p = eval(cuts[i], cuts[i + 1]);
    value += p.value;
    error += p.error;
    queue.push(p);
  }
  while (!queue.empty() && queue.size() < max_panels && error > std::max(abs_tol, rel_tol * std::abs(value))) {
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;
    queue.pop();
    const Panel left = eval(worst.lo, mid);
    const Panel right = eval(mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  return {value, error};
}

double integrate_smooth(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("geometric_grid: need 0 < lo <= hi");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = hi;
    return out;
  }
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + h * static_cast<double>(i);
  out.back() = hi;
  return out;
}

void sort_unique(std::vector<double>& xs, double rel_gap) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (out.empty() || x - out.back() > rel_gap * std::max(1.0, std::abs(x))) out.push_back(x);
  }
  xs = std::move(out);
}

std::vector<double> hybrid_grid(double t_max, std::size_t n, std::span<const double> breaks,
                                double floor) {
  if (!(t_max > 0.0)) throw std::invalid_argument("hybrid_grid: t_max must be positive");
  n = std::max<std::size_t>(n, 4);
  std::vector<double> xs = geometric_grid(t_max * floor, t_max, n / 2);
  const auto lin = linear_grid(0.0, t_max, n - n / 2);
  xs.insert(xs.end(), lin.begin(), lin.end());

  std::vector<double> inside;
  for (double b : breaks) {
    if (b >= 0.0 && b <= t_max) inside.push_back(b);
  }
  std::sort(inside.begin(), inside.end());
  for (std::size_t i = 0; i < inside.size(); ++i) {
    xs.push_back(inside[i]);
    if (i + 1 < inside.size()) xs.push_back(0.5 * (inside[i] + inside[i + 1]));
  }
  sort_unique(xs);
  return xs;
}

double relative_margin(double lhs, double rhs) {
  if (lhs == rhs) return 0.0;
  if (std::isinf(lhs)) return 1.0;
  if (std::isinf(rhs)) return -1.0;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return (lhs - rhs) / scale;
}

double log_relative_margin(double log_lhs, double log_rhs) {
  if (log_lhs == log_rhs) return 0.0;
  if (log_lhs > log_rhs) return -std::expm1(log_rhs - log_lhs);
  return std::expm1(log_lhs - log_rhs);
}

double next_power_of_two(double x) {
  if (!(x > 0.0)) return 1.0;
  return std::exp2(std::ceil(std::log2(x)));
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        const std::size_t lo = n * w / threads;
        const std::size_t hi = n * (w + 1) / threads;
        try {
          for (std::size_t i = lo; i < hi; ++i) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace restart

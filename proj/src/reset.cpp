#include "restart/reset.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "restart/error.hpp"
#include "restart/numeric.hpp"

namespace restart {

ResetLaw ResetLaw::deterministic(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidPeriod, "reset period must be > 0");
  ResetLaw out;
  out.kind = Kind::Deterministic;
  out.parameter = r;
  return out;
}

ResetLaw ResetLaw::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::InvalidResetLaw, "exponential reset rate must be > 0");
  }
  ResetLaw out;
  out.kind = Kind::Exponential;
  out.parameter = rate;
  return out;
}

ResetLaw ResetLaw::general(DistributionSpec spec) {
  ResetLaw out;
  out.kind = Kind::General;
  try {
    out.law = std::make_shared<const Distribution>(std::move(spec), false);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ZeroAtOrigin) {
      throw Error(ErrorCode::InvalidResetLaw, "reset law puts all its mass at 0");
    }
    throw;
  }
  return out;
}

double ResetLaw::tail(double t) const {
  switch (kind) {
    case Kind::Deterministic: return t < parameter ? 1.0 : 0.0;
    case Kind::Exponential: return t < 0.0 ? 1.0 : std::exp(-parameter * t);
    case Kind::General: return std::isinf(t) ? 0.0 : law->tail(t);
  }
  return 0.0;
}

double ResetLaw::tail_left(double t) const {
  switch (kind) {
    case Kind::Deterministic: return t <= parameter ? 1.0 : 0.0;
    case Kind::Exponential: return t <= 0.0 ? 1.0 : std::exp(-parameter * t);
    case Kind::General: return law->tail_left(t);
  }
  return 0.0;
}

double ResetLaw::density(double t) const {
  switch (kind) {
    case Kind::Deterministic: return 0.0;
    case Kind::Exponential: return t < 0.0 ? 0.0 : parameter * std::exp(-parameter * t);
    case Kind::General: return law->density(t);
  }
  return 0.0;
}

std::vector<Atom> ResetLaw::atoms() const {
  switch (kind) {
    case Kind::Deterministic: return {{parameter, 1.0}};
    case Kind::Exponential: return {};
    case Kind::General: return law->atoms();
  }
  return {};
}

std::vector<double> ResetLaw::breakpoints() const {
  switch (kind) {
    case Kind::Deterministic: return {parameter};
    case Kind::Exponential: return {0.1 / parameter, 1.0 / parameter, 10.0 / parameter};
    case Kind::General: return law->breakpoints();
  }
  return {};
}

double ResetLaw::scale() const {
  switch (kind) {
    case Kind::Deterministic: return parameter;
    case Kind::Exponential: return 1.0 / parameter;
    case Kind::General: return law->scale();
  }
  return 1.0;
}

double ResetLaw::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Deterministic: return parameter;
    case Kind::Exponential: return draw_exponential(rng) / parameter;
    case Kind::General: return law->sample(rng);
  }
  return parameter;
}

std::string ResetLaw::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Deterministic: os << "det:" << parameter; break;
    case Kind::Exponential: os << "exp:" << parameter; break;
    case Kind::General: os << "general:" << law->describe(); break;
  }
  return os.str();
}

namespace {

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::erase_if(a, [](double x) { return !std::isfinite(x) || x <= 0.0; });
  sort_unique(a);
  return a;
}

// -log F̄ scale at which F̄^m drops: quadrature breakpoints for powers of the tail.
std::vector<double> power_breaks(const Distribution& law, double m) {
  std::vector<double> out = law.breakpoints();
  const double q = law.hazard_quantile(1.0 / m);
  if (std::isfinite(q) && q > 0.0) {
    for (double f : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0}) out.push_back(f * q);
  }
  return out;
}

double tail_power(const Distribution& law, double t, double m) {
  const double lt = law.log_tail(t);
  if (std::isinf(lt)) return 0.0;
  return std::exp(m * lt);
}

}  // namespace

double deterministic_reset_tail(const Distribution& law, double r, double t) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidPeriod, "reset period must be > 0");
  if (t < 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  double k = std::floor(t / r);
  double rest = t - k * r;
  if (rest < 0.0) {
    k -= 1.0;
    rest = t - k * r;
  }
  if (k == 0.0) return law.tail(t);
  const double lr = law.log_tail(r);
  const double lt = law.log_tail(rest);
  if (std::isinf(lr) || std::isinf(lt)) return 0.0;
  return std::exp(k * lr + lt);
}

double single_reset_tail(const Distribution& law, const ResetLaw& reset, double t) {
  if (t < 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  double total = law.tail(t) * reset.tail(t);
  for (const Atom& a : reset.atoms()) {
    if (a.at <= t) total += a.mass * law.tail(a.at) * law.tail(t - a.at);
  }
  if (reset.kind != ResetLaw::Kind::Deterministic && t > 0.0) {
    std::vector<double> breaks = reset.breakpoints();
    for (double b : law.breakpoints()) {
      breaks.push_back(b);
      breaks.push_back(t - b);
    }
    total += integrate([&](double s) { return reset.density(s) * law.tail(s) * law.tail(t - s); }, 0.0,
                       t, breaks, 1e-11)
                 .value;
  }
  return std::clamp(total, 0.0, 1.0);
}

double RenewalSolution::operator()(double t) const {
  if (t < 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  const double T = horizon();
  if (t >= T) return right.back() * std::exp(-terminal_rate * (t - T));
  const double pos = t / step;
  if (pos >= 32.0 || pos == std::floor(pos) || !reset) return interpolate(t);
  // Close to the origin G - F̄ is not smooth enough for the cubic; one more
  // step of the renewal identity damps the interpolation error by R((0, t]).
  double total = law->tail(t) * reset->tail(t);
  for (const Atom& a : reset->atoms()) {
    if (a.at <= t) total += a.mass * law->tail(a.at) * (a.at == 0.0 ? 0.0 : interpolate(t - a.at));
  }
  double at_zero = 0.0;
  for (const Atom& a : reset->atoms()) {
    if (a.at == 0.0) at_zero += a.mass * law->tail(0.0);
  }
  if (reset->kind != ResetLaw::Kind::Deterministic) {
    std::vector<double> breaks = reset->breakpoints();
    for (double b : law->breakpoints()) breaks.push_back(t - b);
    total += integrate([&](double u) { return reset->density(u) * law->tail(u) * interpolate(t - u); }, 0.0,
                       t, breaks, 1e-12)
                 .value;
  }
  return std::clamp(total / (1.0 - at_zero), 0.0, 1.0);
}

double RenewalSolution::interpolate(double t) const {
  const double T = horizon();
  if (t >= T) return right.back() * std::exp(-terminal_rate * (t - T));
  if (t <= 0.0) return t < 0.0 ? 1.0 : right[0];
  const double pos = t / step;
  const auto i = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(i);
  if (w == 0.0) return right[i];
  // Cubic Hermite on D = G - F̄, which is free of the singular and jump parts
  // G inherits from F̄; slopes never look across a remaining jump of D.
  const auto dl = [this](std::size_t j) { return left[j] - law->tail_left(step * static_cast<double>(j)); };
  const auto dr = [this](std::size_t j) { return right[j] - law->tail(step * static_cast<double>(j)); };
  const auto smooth = [&](std::size_t j) { return std::abs(dl(j) - dr(j)) <= 1e-15; };
  const auto slope = [&](std::size_t j, bool forward) {
    if (j >= 1 && j + 1 <= cells && smooth(j)) return (dl(j + 1) - dr(j - 1)) / (2.0 * step);
    if (forward) {
      if (j + 2 <= cells && smooth(j + 1)) return (-3.0 * dr(j) + 4.0 * dr(j + 1) - dl(j + 2)) / (2.0 * step);
      return (dl(j + 1) - dr(j)) / step;
    }
    if (j >= 2 && smooth(j - 1)) return (3.0 * dl(j) - 4.0 * dl(j - 1) + dr(j - 2)) / (2.0 * step);
    return (dl(j) - dr(j - 1)) / step;
  };
  const double a = dr(i);
  const double b = dl(i + 1);
  const double da = slope(i, true) * step;
  const double db = slope(i + 1, false) * step;
  const double w2 = w * w;
  const double w3 = w2 * w;
  const double v = law->tail(t) + (2 * w3 - 3 * w2 + 1) * a + (w3 - 2 * w2 + w) * da +
                   (-2 * w3 + 3 * w2) * b + (w3 - w2) * db;
  return std::clamp(v, left[i + 1], right[i]);
}

TailCurve RenewalSolution::curve() const {
  TailCurve c;
  c.mode = Interpolation::Linear;
  c.terminal_rate = terminal_rate;
  c.grid.reserve(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    c.grid.push_back(step * static_cast<double>(i));
    c.values.push_back(right[i]);
  }
  return c;
}

namespace {

struct OffNodeAtom {
  std::size_t cell;  // atom at (cell + theta) h
  double theta;
  double mass;
};

struct Kernel {
  std::vector<std::pair<std::size_t, double>> atoms;  // (node, mass of F̄·R)
  std::vector<OffNodeAtom> off_node;
  double atom0 = 0.0;
  std::vector<double> c0;  // ∫_cell k(s) (1 - w) ds
  std::vector<double> c1;  // ∫_cell k(s) w ds
  bool has_density = false;
  bool on_node = true;
};

Kernel build_kernel(const Distribution& law, const ResetLaw& reset, double h, std::size_t n) {
  Kernel k;
  std::vector<double> mass(n + 2, 0.0);
  for (const Atom& a : reset.atoms()) {
    const double m = a.mass * law.tail(a.at);
    if (m <= 0.0) continue;
    const double pos = a.at / h;
    if (pos > static_cast<double>(n)) continue;
    const double j = std::floor(pos);
    const double theta = pos - j;
    const auto idx = static_cast<std::size_t>(j);
    if (theta < 1e-12 * std::max(1.0, pos)) {
      mass[idx] += m;
    } else if (theta > 1.0 - 1e-12 * std::max(1.0, pos)) {
      mass[idx + 1] += m;
    } else {
      k.on_node = false;
      k.off_node.push_back({idx, theta, m});
    }
  }
  k.atom0 = mass[0];
  for (std::size_t j = 1; j <= n; ++j) {
    if (mass[j] != 0.0) k.atoms.emplace_back(j, mass[j]);
  }

  k.has_density = reset.kind != ResetLaw::Kind::Deterministic;
  if (k.has_density) {
    k.c0.assign(n, 0.0);
    k.c1.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double lo = h * static_cast<double>(j);
      const double hi = lo + h;
      k.c0[j] = integrate_smooth(
          [&](double s) { return reset.density(s) * law.tail(s) * (1.0 - (s - lo) / h); }, lo, hi);
      k.c1[j] = integrate_smooth(
          [&](double s) { return reset.density(s) * law.tail(s) * (s - lo) / h; }, lo, hi);
    }
  }
  return k;
}

struct RawSolve {
  std::vector<double> left;
  std::vector<double> right;
  bool on_node = true;
};

// Unknowns are G = F̄ᴿ at the nodes. The convolution with the reset density is
// split as κ*F̄ (adaptive quadrature per node) plus κ*D with D = G - F̄ (product
// trapezoid), so the discretisation never sees the singular part of F̄.
RawSolve solve_on(const Distribution& law, const ResetLaw& reset, double T, std::size_t n) {
  const double h = T / static_cast<double>(n);
  const Kernel k = build_kernel(law, reset, h, n);
  RawSolve s;
  s.on_node = k.on_node;
  auto& GL = s.left;
  auto& GR = s.right;
  GL.assign(n + 1, 0.0);
  GR.assign(n + 1, 0.0);
  std::vector<double> DL(n + 1, 0.0);
  std::vector<double> DR(n + 1, 0.0);
  const double c00 = k.has_density ? k.c0[0] : 0.0;
  const double c10 = k.has_density ? k.c1[0] : 0.0;

  // κ*F̄ at node i is split at s = t_i / 2: near s = 0 the kernel moments c0/c1
  // are exact and F̄ is linear; near s = t_i the tail moments p0/p1 are exact
  // and the kernel is linear. Each singular end is thus integrated exactly.
  std::vector<double> FL(n + 1);
  std::vector<double> FR(n + 1);
  std::vector<double> p0;
  std::vector<double> p1;
  std::vector<double> kR;
  std::vector<double> kL;
  std::vector<double> kernel_breaks = reset.breakpoints();
  for (double b : law.breakpoints()) kernel_breaks.push_back(b);
  for (std::size_t i = 0; i <= n; ++i) {
    FL[i] = law.tail_left(h * static_cast<double>(i));
    FR[i] = law.tail(h * static_cast<double>(i));
  }
  if (k.has_density) {
    p0.resize(n);
    p1.resize(n);
    kR.resize(n + 1);
    kL.resize(n + 1);
    const auto kernel = [&](double u) { return reset.density(u) * law.tail(u); };
    for (std::size_t m = 0; m < n; ++m) {
      const double lo = h * static_cast<double>(m);
      const auto hat0 = [&](double x) { return law.tail(x) * (1.0 - (x - lo) / h); };
      const auto hat1 = [&](double x) { return law.tail(x) * (x - lo) / h; };
      if (m == 0) {
        p0[m] = integrate(hat0, 0.0, h).value;
        p1[m] = integrate(hat1, 0.0, h).value;
      } else {
        p0[m] = integrate_smooth(hat0, lo, lo + h);
        p1[m] = integrate_smooth(hat1, lo, lo + h);
      }
      kR[m] = kernel(lo + 1e-9 * h);
      kL[m + 1] = kernel(lo + h * (1.0 - 1e-9));
    }
  }
  constexpr std::size_t kDirect = 8;

  GL[0] = 1.0;
  GR[0] = law.tail(0.0) * reset.tail(0.0) / (1.0 - k.atom0);
  DR[0] = GR[0] - law.tail(0.0);
  std::vector<double> breaks;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = h * static_cast<double>(i);
    const double tailR = FR[i];
    const double tailL = FL[i];
    const double fR = tailR * reset.tail(t);
    const double fL = tailL * reset.tail_left(t);

    double conv = 0.0;
    if (k.has_density) {
      const double* c0 = k.c0.data();
      const double* c1 = k.c1.data();
      if (i <= kDirect) {
        breaks = kernel_breaks;
        for (double b : law.breakpoints()) breaks.push_back(t - b);
        conv = integrate([&](double u) { return reset.density(u) * law.tail(u) * law.tail(t - u); }, 0.0,
                         t, breaks, 1e-12)
                   .value;
      } else {
        const std::size_t half = i / 2;
        for (std::size_t j = 0; j < half; ++j) conv += c0[j] * FL[i - j] + c1[j] * FR[i - j - 1];
        for (std::size_t j = half; j < i; ++j) {
          conv += kR[j] * p1[i - 1 - j] + kL[j + 1] * p0[i - 1 - j];
        }
      }
      conv += c10 * DR[i - 1];
      for (std::size_t j = 1; j < i; ++j) conv += c0[j] * DL[i - j] + c1[j] * DR[i - j - 1];
    }
    double atom_l = 0.0;
    double atom_r = 0.0;
    for (const auto& [j, m] : k.atoms) {
      if (j > i) break;
      atom_r += m * GR[i - j];
      if (j < i) atom_l += m * GL[i - j];
    }
    // an atom between nodes sees G at an off-node point: F̄ exactly, D interpolated
    double implicit = c00;
    for (const OffNodeAtom& a : k.off_node) {
      if (a.cell >= i) continue;
      const double x = t - (static_cast<double>(a.cell) + a.theta) * h;
      if (a.cell == 0) {
        implicit += (1.0 - a.theta) * a.mass;
        const double d = a.theta * a.mass * DR[i - 1];
        atom_l += a.mass * law.tail_left(x) + d;
        atom_r += a.mass * law.tail(x) + d;
        continue;
      }
      const double d = a.mass * ((1.0 - a.theta) * DL[i - a.cell] + a.theta * DR[i - a.cell - 1]);
      atom_l += a.mass * law.tail_left(x) + d;
      atom_r += a.mass * law.tail(x) + d;
    }
    GL[i] = (fL + atom_l + conv - implicit * tailL) / (1.0 - k.atom0 - implicit);
    DL[i] = GL[i] - tailL;
    GR[i] = (fR + atom_r + implicit * DL[i] + conv) / (1.0 - k.atom0);
    DR[i] = GR[i] - tailR;
  }
  return s;
}

void make_monotone(std::vector<double>& left, std::vector<double>& right) {
  double run = 1.0;
  for (std::size_t i = 0; i < left.size(); ++i) {
    left[i] = std::clamp(left[i], 0.0, run);
    run = left[i];
    right[i] = std::clamp(right[i], 0.0, run);
    run = right[i];
  }
}

}  // namespace

RenewalSolution solve_renewal(const Distribution& law, const ResetLaw& reset,
                              const RenewalOptions& options) {
  double T = options.horizon;
  if (!(T > 0.0)) {
    T = 16.0 * std::max(law.scale(), reset.scale());
  }
  T = next_power_of_two(T);

  const bool dense = reset.kind != ResetLaw::Kind::Deterministic;
  std::size_t n = options.cells > 0 ? options.cells : (dense ? 4096 : std::size_t{1} << 14);
  const std::size_t cap = options.max_cells > 0 ? options.max_cells
                                                : (dense ? std::size_t{1} << 15 : std::size_t{1} << 21);
  n = static_cast<std::size_t>(next_power_of_two(static_cast<double>(n)));

  const auto shared = std::make_shared<const Distribution>(law);
  const auto shared_reset = std::make_shared<const ResetLaw>(reset);
  const auto finish = [&](RenewalSolution out) {
    out.law = shared;
    out.reset = shared_reset;
    make_monotone(out.left, out.right);
    const std::size_t m = out.cells;
    const double mid = out.right[m / 2];
    const double end = out.right[m];
    if (end > 0.0 && mid > end) out.terminal_rate = std::log(mid / end) / (0.5 * T);
    return out;
  };
  // Richardson pair on the fine grid: even nodes get (4 fine - coarse) / 3, odd
  // nodes the fine value plus the mean correction of their neighbours.
  const auto extrapolated = [&](const RawSolve& coarse, const RawSolve& fine, std::size_t m) {
    RenewalSolution out;
    out.law = shared;
    out.reset = shared_reset;
    out.cells = 2 * m;
    out.step = T / static_cast<double>(2 * m);
    out.left = fine.left;
    out.right = fine.right;
    std::vector<double> dl(m + 1);
    std::vector<double> dr(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      dl[i] = (fine.left[2 * i] - coarse.left[i]) / 3.0;
      dr[i] = (fine.right[2 * i] - coarse.right[i]) / 3.0;
      out.left[2 * i] += dl[i];
      out.right[2 * i] += dr[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      out.left[2 * i + 1] += 0.5 * (dr[i] + dl[i + 1]);
      out.right[2 * i + 1] += 0.5 * (dr[i] + dl[i + 1]);
    }
    return out;
  };

  RawSolve coarse = solve_on(law, reset, T, n);
  RawSolve fine = solve_on(law, reset, T, 2 * n);
  std::optional<RenewalSolution> previous;
  if (dense && coarse.on_node) previous = extrapolated(solve_on(law, reset, T, n / 2), coarse, n / 2);
  for (;;) {
    RenewalSolution out;
    double err = 0.0;
    if (dense && coarse.on_node) {
      // error of the extrapolated curve, interpolation included: the previous
      // level evaluated at every current node
      out = extrapolated(coarse, fine, n);
      for (std::size_t i = 0; i <= out.cells; ++i) {
        const double t = out.step * static_cast<double>(i);
        err = std::max(err, std::abs(out.right[i] - (*previous)(t)));
        if (i % 2 == 0) err = std::max(err, std::abs(out.left[i] - previous->left[i / 2]));
      }
      previous = out;
    } else {
      out.law = shared;
    out.reset = shared_reset;
      out.cells = 2 * n;
      out.step = T / static_cast<double>(2 * n);
      out.left = fine.left;
      out.right = fine.right;
      for (std::size_t i = 0; i <= n; ++i) {
        err = std::max({err, std::abs(fine.left[2 * i] - coarse.left[i]),
                        std::abs(fine.right[2 * i] - coarse.right[i])});
      }
    }
    out.error = err;
    if (err <= options.tolerance || 4 * n > cap) {
      if (err > options.tolerance && options.throw_if_coarse) {
        std::ostringstream os;
        os << "renewal error estimate " << err << " above tolerance " << options.tolerance << " at "
           << 2 * n << " cells";
        throw Error(ErrorCode::GridTooCoarse, os.str());
      }
      return finish(std::move(out));
    }
    n *= 2;
    coarse = std::move(fine);
    fine = solve_on(law, reset, T, 2 * n);
  }
}

TailCurve reset_tail(const Distribution& law, const ResetLaw& reset, std::span<const double> t_grid,
                     const RenewalOptions& options) {
  std::vector<double> grid(t_grid.begin(), t_grid.end());
  grid.push_back(0.0);
  std::erase_if(grid, [](double t) { return !(t >= 0.0) || !std::isfinite(t); });
  sort_unique(grid, 0.0);
  if (grid.size() < 2) throw Error(ErrorCode::InvalidParameter, "t grid needs a positive point");

  TailCurve c;
  c.mode = Interpolation::Linear;
  c.grid = grid;
  if (reset.kind == ResetLaw::Kind::Deterministic) {
    for (double t : grid) c.values.push_back(deterministic_reset_tail(law, reset.parameter, t));
  } else {
    RenewalOptions o = options;
    if (!(o.horizon > 0.0)) o.horizon = grid.back();
    const RenewalSolution s = solve_renewal(law, reset, o);
    for (double t : grid) c.values.push_back(s(t));
  }
  for (std::size_t i = 1; i < c.values.size(); ++i) c.values[i] = std::min(c.values[i], c.values[i - 1]);
  const std::size_t n = grid.size();
  const double v0 = c.values[n - 2];
  const double v1 = c.values[n - 1];
  if (v1 > 0.0 && v0 > v1) c.terminal_rate = std::log(v0 / v1) / (grid[n - 1] - grid[n - 2]);
  return c;
}

double reset_mean(const Distribution& law, const ResetLaw& reset) {
  if (reset.kind == ResetLaw::Kind::Deterministic) {
    const double r = reset.parameter;
    const double num = integrate([&](double t) { return law.tail(t); }, 0.0, r, law.breakpoints()).value;
    const double den = -std::expm1(law.log_tail(r));
    return num / den;
  }
  const auto breaks = merged(law.breakpoints(), reset.breakpoints());
  const double upper = std::min(law.support_sup(), kInf);
  const double num =
      integrate([&](double t) { return law.tail(t) * reset.tail(t); }, 0.0, upper, breaks).value;
  if (std::isinf(num)) return kInf;

  // P(T <= R): the tie goes to completion, so F(s) = 1 - F̄(s) at R's atoms
  const auto cdf = [&](double s) { return -std::expm1(law.log_tail(s)); };
  double den = 0.0;
  for (const Atom& a : reset.atoms()) den += a.mass * cdf(a.at);
  den += integrate([&](double s) { return reset.density(s) * cdf(s); }, 0.0, kInf, breaks).value;
  if (reset.kind == ResetLaw::Kind::General) den += reset.law->mass_at_infinity();
  if (!(den > 0.0)) return kInf;
  return num / den;
}

double laplace_tail(const Distribution& law, double rate) {
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidParameter, "Laplace argument must be > 0");
  auto breaks = law.breakpoints();
  for (double f : {0.1, 1.0, 10.0}) breaks.push_back(f / rate);
  return integrate([&](double t) { return std::exp(-rate * t) * law.tail(t); }, 0.0,
                   law.support_sup(), breaks)
      .value;
}

double exp_reset_mean(const Distribution& law, double rate) {
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidResetLaw, "exponential reset rate must be > 0");
  auto breaks = law.breakpoints();
  for (double f : {0.1, 1.0, 10.0}) breaks.push_back(f / rate);
  double L = 0.0;
  for (const Atom& a : law.atoms()) L += a.mass * std::exp(-rate * a.at);
  L += integrate([&](double t) { return law.density(t) * std::exp(-rate * t); }, 0.0,
                 law.support_sup(), breaks)
           .value;
  if (!(L > 0.0)) return kInf;
  return (1.0 - L) / (rate * L);
}

double branching_deterministic_tail(const Distribution& law, double r, int l, double t) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidPeriod, "reset period must be > 0");
  if (l < 1) throw Error(ErrorCode::InvalidParameter, "branching factor must be >= 1");
  if (t < 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  double k = std::floor(t / r);
  double rest = t - k * r;
  if (rest < 0.0) {
    k -= 1.0;
    rest = t - k * r;
  }
  if (k == 0.0) return law.tail(t);
  const double ld = static_cast<double>(l);
  const double copies = std::pow(ld, k);
  const double resets = l == 1 ? k : (copies - 1.0) / (ld - 1.0);
  const double lr = law.log_tail(r);
  const double lt = law.log_tail(rest);
  if (std::isinf(lr) || std::isinf(lt)) return 0.0;
  return std::exp(resets * lr + copies * lt);
}

namespace {

constexpr double kSeriesFloor = 1e-12;
constexpr std::size_t kSeriesCap = 100'000'000;

}  // namespace

SeriesSum branching_mean_exponential(const Distribution& law, double rate, int l) {
  if (!(rate > 0.0)) throw Error(ErrorCode::InvalidResetLaw, "exponential reset rate must be > 0");
  if (l < 1) throw Error(ErrorCode::InvalidParameter, "branching factor must be >= 1");
  const auto q_of = [&](double m) {
    auto breaks = power_breaks(law, m);
    for (double f : {0.1, 1.0, 10.0}) breaks.push_back(f / rate);
    return rate * integrate([&](double t) { return std::exp(-rate * t) * tail_power(law, t, m); }, 0.0,
                            law.support_sup(), breaks)
                      .value;
  };
  SeriesSum s;
  double product = 1.0;
  double m = 1.0;
  double q = q_of(1.0);
  while (s.terms < kSeriesCap) {
    product *= q;
    s.value += product;
    ++s.terms;
    if (product < kSeriesFloor) break;
    if (l > 1) {
      m *= static_cast<double>(l);
      q = q_of(m);
    }
  }
  if (product >= kSeriesFloor) throw Error(ErrorCode::SeriesNotConverging, "running product stalls");
  s.value /= rate;
  s.envelope = product;
  return s;
}

SeriesSum branching_mean_deterministic(const Distribution& law, double r, int l) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidPeriod, "reset period must be > 0");
  if (l < 1) throw Error(ErrorCode::InvalidParameter, "branching factor must be >= 1");
  const double lr = law.log_tail(r);
  const auto piece = [&](double m) {
    return integrate([&](double u) { return tail_power(law, u, m); }, 0.0, r, power_breaks(law, m))
        .value;
  };
  SeriesSum s;
  double m = 1.0;
  double resets = 0.0;
  double integral = piece(1.0);
  double envelope = 1.0;
  while (s.terms < kSeriesCap) {
    envelope = std::isinf(lr) ? 0.0 : std::exp(resets * lr);
    s.value += envelope * integral;
    ++s.terms;
    if (envelope * std::exp(lr * m) < kSeriesFloor) break;
    resets += m;
    if (l > 1) {
      m *= static_cast<double>(l);
      integral = piece(m);
    }
  }
  if (s.terms >= kSeriesCap) throw Error(ErrorCode::SeriesNotConverging, "running product stalls");
  s.envelope = envelope;
  return s;
}

}  // namespace restart

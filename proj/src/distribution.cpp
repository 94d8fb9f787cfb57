#include "restart/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "restart/error.hpp"
#include "restart/numeric.hpp"

namespace restart {

// Internal per-family implementation of a tail function.
class TailModel {
 public:
  virtual ~TailModel() = default;

  virtual double tail(double t) const = 0;
  virtual double tail_left(double t) const { return tail(t); }
  virtual double log_tail(double t) const { return std::log(tail(t)); }
  virtual double density(double t) const = 0;
  /// H(a + d) - H(a) with H = -log F̄; families override it where the
  /// difference of two large hazards would cancel.
  virtual double hazard_increment(double a, double d) const {
    const double la = log_tail(a);
    if (std::isinf(la)) return 0.0;
    return la - log_tail(a + d);
  }
  virtual std::vector<Atom> jumps() const { return {}; }
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual double support_sup() const { return kInf; }
  virtual double limit_at_infinity() const { return 0.0; }
  virtual TailClass tail_class() const = 0;
  virtual double scale() const = 0;
  /// Parametric families have positive mass near zero by construction.
  virtual bool parametric() const { return false; }

  virtual double hazard_quantile(double q) const {
    const auto H = [this](double t) { return -log_tail(t); };
    if (q <= H(0.0)) return 0.0;
    const double lim = limit_at_infinity();
    if (lim > 0.0 && q >= -std::log(lim)) return kInf;
    const double t0 = support_sup();
    double hi = std::min(scale(), t0);
    while (H(hi) < q) {
      if (hi >= t0) return t0;
      hi = std::min(2.0 * hi, t0);
      if (hi > 1e300) return kInf;
    }
    double lo = hi;
    while (H(lo) >= q) {
      lo *= 0.5;
      if (lo < 1e-300) return lo;
    }
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      if (H(mid) >= q) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }
};

namespace {

class ExponentialModel final : public TailModel {
 public:
  explicit ExponentialModel(double rate) : rate_(rate) {}
  double tail(double t) const override { return std::exp(-rate_ * t); }
  double log_tail(double t) const override { return -rate_ * t; }
  double density(double t) const override { return rate_ * std::exp(-rate_ * t); }
  double hazard_increment(double, double d) const override { return rate_ * d; }
  TailClass tail_class() const override { return {TailClass::Kind::Light, 0.0}; }
  double scale() const override { return 1.0 / rate_; }
  bool parametric() const override { return true; }
  double hazard_quantile(double q) const override { return q / rate_; }

 private:
  double rate_;
};

class WeibullModel final : public TailModel {
 public:
  explicit WeibullModel(double shape) : k_(shape) {}
  double tail(double t) const override { return std::exp(-std::pow(t, k_)); }
  double log_tail(double t) const override { return -std::pow(t, k_); }
  double hazard_increment(double a, double d) const override {
    if (k_ == 1.0) return d;
    if (a == 0.0) return std::pow(d, k_);
    return std::pow(a, k_) * std::expm1(k_ * std::log1p(d / a));
  }
  double density(double t) const override {
    if (t == 0.0) return k_ < 1.0 ? kInf : (k_ == 1.0 ? 1.0 : 0.0);
    return k_ * std::pow(t, k_ - 1.0) * std::exp(-std::pow(t, k_));
  }
  TailClass tail_class() const override { return {TailClass::Kind::Light, 0.0}; }
  double scale() const override { return 1.0; }
  bool parametric() const override { return true; }
  double hazard_quantile(double q) const override { return std::pow(q, 1.0 / k_); }

 private:
  double k_;
};

class ParetoSquareModel final : public TailModel {
 public:
  explicit ParetoSquareModel(double k) : k_(k) {}
  double tail(double t) const override {
    const double r = k_ / (t + k_);
    return r * r;
  }
  double log_tail(double t) const override { return -2.0 * std::log1p(t / k_); }
  double hazard_increment(double a, double d) const override { return 2.0 * std::log1p(d / (a + k_)); }
  double density(double t) const override {
    const double r = k_ / (t + k_);
    return 2.0 * r * r / (t + k_);
  }
  TailClass tail_class() const override { return {TailClass::Kind::Power, 2.0}; }
  double scale() const override { return k_; }
  bool parametric() const override { return true; }
  double hazard_quantile(double q) const override { return k_ * std::expm1(0.5 * q); }

 private:
  double k_;
};

class LevyModel final : public TailModel {
 public:
  explicit LevyModel(double a) : a_(a) {}
  double tail(double t) const override {
    if (t <= 0.0) return 1.0;
    return std::erf(a_ / std::sqrt(2.0 * t));
  }
  double log_tail(double t) const override {
    if (t <= 0.0) return 0.0;
    const double x = a_ / std::sqrt(2.0 * t);
    if (x > 0.5) return std::log1p(-std::erfc(x));
    return std::log(std::erf(x));
  }
  double density(double t) const override {
    if (t <= 0.0) return 0.0;
    constexpr double kInvSqrt2Pi = 0.39894228040143267794;
    return a_ * kInvSqrt2Pi * std::pow(t, -1.5) * std::exp(-a_ * a_ / (2.0 * t));
  }
  TailClass tail_class() const override { return {TailClass::Kind::Power, 0.5}; }
  double scale() const override { return a_ * a_; }
  bool parametric() const override { return true; }
  double hazard_quantile(double q) const override {
    if (q <= 0.0) return 0.0;
    if (std::isinf(q)) return kInf;
    const double c = -std::expm1(-q);
    if (c >= 1.0) {
      // erf(x) = e^-q with q huge: x ~ sqrt(pi)/2 e^-q
      const double x = 0.88622692545275801365 * std::exp(-q);
      return a_ * a_ / (2.0 * x * x);
    }
    const double x = boost::math::erfc_inv(c);
    return a_ * a_ / (2.0 * x * x);
  }

 private:
  double a_;
};

class CurveModel final : public TailModel {
 public:
  explicit CurveModel(TailCurve curve) : c_(std::move(curve)) {}
  double tail(double t) const override { return c_(t); }
  double tail_left(double t) const override { return c_.left_limit(t); }
  double log_tail(double t) const override { return c_.log_value(t); }
  double density(double t) const override { return c_.density(t); }
  std::vector<Atom> jumps() const override { return c_.jumps(); }
  std::vector<double> breakpoints() const override {
    std::vector<double> out;
    const std::size_t n = c_.grid.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 256);
    for (std::size_t i = 0; i < n; i += stride) out.push_back(c_.grid[i]);
    out.push_back(c_.grid.back());
    for (const Atom& a : c_.jumps()) out.push_back(a.at);
    return out;
  }
  double support_sup() const override {
    if (c_.terminal_rate > 0.0 || c_.values.back() > 0.0) return kInf;
    for (std::size_t i = 0; i < c_.values.size(); ++i) {
      if (c_.values[i] == 0.0) return c_.grid[i];
    }
    return c_.grid.back();
  }
  double limit_at_infinity() const override { return c_.limit_at_infinity(); }
  TailClass tail_class() const override {
    if (c_.terminal_rate > 0.0) return {TailClass::Kind::Light, 0.0};
    if (c_.values.back() == 0.0) return {TailClass::Kind::Compact, 0.0};
    return {TailClass::Kind::Defective, 0.0};
  }
  double scale() const override {
    const double t0 = support_sup();
    const double span = std::isfinite(t0) ? t0 : c_.grid.back();
    return span > 0.0 ? span / 4.0 : 1.0;
  }
  double hazard_quantile(double q) const override { return c_.hazard_quantile(q); }

 private:
  TailCurve c_;
};

class PiecewiseExpModel final : public TailModel {
 public:
  explicit PiecewiseExpModel(std::vector<ExpSegment> segs) : s_(std::move(segs)) {}

  double log_tail(double t) const override {
    if (std::isinf(t)) return -kInf;
    const ExpSegment& seg = s_[segment(t)];
    return seg.intercept - seg.rate * t;
  }
  double tail(double t) const override { return std::exp(log_tail(t)); }
  double tail_left(double t) const override {
    if (t <= 0.0) return 1.0;
    const std::size_t i = segment(t);
    if (s_[i].start == t && i > 0) return std::exp(s_[i - 1].intercept - s_[i - 1].rate * t);
    return tail(t);
  }
  double density(double t) const override {
    const ExpSegment& seg = s_[segment(t)];
    return seg.rate * tail(t);
  }
  std::vector<Atom> jumps() const override {
    std::vector<Atom> out;
    for (std::size_t i = 1; i < s_.size(); ++i) {
      const double jump = tail_left(s_[i].start) - tail(s_[i].start);
      if (jump > 0.0) out.push_back({s_[i].start, jump});
    }
    return out;
  }
  std::vector<double> breakpoints() const override {
    std::vector<double> out;
    for (const auto& seg : s_) out.push_back(seg.start);
    return out;
  }
  double limit_at_infinity() const override {
    return s_.back().rate > 0.0 ? 0.0 : std::exp(s_.back().intercept);
  }
  TailClass tail_class() const override {
    if (s_.back().rate > 0.0) return {TailClass::Kind::Light, 0.0};
    return {TailClass::Kind::Defective, 0.0};
  }
  double scale() const override {
    for (const auto& seg : s_) {
      if (seg.rate > 0.0) return 1.0 / seg.rate;
    }
    return 1.0;
  }
  double hazard_quantile(double q) const override {
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const ExpSegment& seg = s_[i];
      const double end = i + 1 < s_.size() ? s_[i + 1].start : kInf;
      if (seg.rate * seg.start - seg.intercept >= q) return seg.start;
      if (seg.rate > 0.0) {
        const double t = (q + seg.intercept) / seg.rate;
        if (t < end) return t;
      }
    }
    return kInf;
  }

 private:
  std::size_t segment(double t) const {
    std::size_t i = 0;
    while (i + 1 < s_.size() && s_[i + 1].start <= t) ++i;
    return i;
  }

  std::vector<ExpSegment> s_;
};

class MrlModel final : public TailModel {
 public:
  explicit MrlModel(MrlCurve curve) : f_(std::move(curve)) {}
  double tail(double t) const override { return std::isinf(t) ? 0.0 : f_.tail(t); }
  double log_tail(double t) const override { return f_.log_tail(t); }
  double density(double t) const override { return f_.density(t); }
  std::vector<double> breakpoints() const override {
    const auto& g = f_.curve().grid;
    std::vector<double> out;
    const std::size_t stride = std::max<std::size_t>(1, g.size() / 64);
    for (std::size_t i = 0; i < g.size(); i += stride) out.push_back(g[i]);
    out.push_back(g.back());
    return out;
  }
  TailClass tail_class() const override {
    const auto& c = f_.curve();
    if (c.terminal == MrlTerminal::Linear && c.terminal_slope > 0.0) {
      return {TailClass::Kind::Power, 1.0 + 1.0 / c.terminal_slope};
    }
    return {TailClass::Kind::Light, 0.0};
  }
  double scale() const override { return f_.curve().m0; }

 private:
  MrlFunction f_;
};

class DefectiveModel final : public TailModel {
 public:
  DefectiveModel(std::shared_ptr<const TailModel> base, double p) : base_(std::move(base)), p_(p) {}
  double tail(double t) const override {
    if (std::isinf(t)) return 0.0;
    return p_ + (1.0 - p_) * base_->tail(t);
  }
  double tail_left(double t) const override { return p_ + (1.0 - p_) * base_->tail_left(t); }
  double density(double t) const override { return (1.0 - p_) * base_->density(t); }
  std::vector<Atom> jumps() const override {
    auto out = base_->jumps();
    for (Atom& a : out) a.mass *= 1.0 - p_;
    return out;
  }
  std::vector<double> breakpoints() const override { return base_->breakpoints(); }
  double limit_at_infinity() const override { return p_ + (1.0 - p_) * base_->limit_at_infinity(); }
  TailClass tail_class() const override { return {TailClass::Kind::Defective, 0.0}; }
  double scale() const override { return base_->scale(); }
  bool parametric() const override { return base_->parametric(); }
  double hazard_quantile(double q) const override {
    const double one_minus_v = -std::expm1(-q);
    const double rest = one_minus_v / (1.0 - p_);
    if (rest >= 1.0) return kInf;
    return base_->hazard_quantile(-std::log1p(-rest));
  }

 private:
  std::shared_ptr<const TailModel> base_;
  double p_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

struct ModelBuilder {
  std::shared_ptr<const TailModel> operator()(const Exponential& f) const {
    require(f.rate > 0.0 && std::isfinite(f.rate), "exponential rate must be > 0");
    return std::make_shared<ExponentialModel>(f.rate);
  }
  std::shared_ptr<const TailModel> operator()(const Weibull& f) const {
    require(f.shape > 0.0 && std::isfinite(f.shape), "weibull shape must be > 0");
    return std::make_shared<WeibullModel>(f.shape);
  }
  std::shared_ptr<const TailModel> operator()(const ShiftedParetoSquare& f) const {
    require(f.offset > 0.0 && std::isfinite(f.offset), "pareto offset must be > 0");
    return std::make_shared<ParetoSquareModel>(f.offset);
  }
  std::shared_ptr<const TailModel> operator()(const PiecewiseConstantTail& f) const {
    require(!f.breakpoints.empty() && f.breakpoints.size() == f.levels.size(),
            "piecewise constant tail needs one level per breakpoint");
    TailCurve c{f.breakpoints, f.levels, Interpolation::Step, 0.0};
    c.check();
    return std::make_shared<CurveModel>(std::move(c));
  }
  std::shared_ptr<const TailModel> operator()(const PiecewiseExpTail& f) const {
    require(!f.segments.empty(), "piecewise exponential tail needs segments");
    require(f.segments.front().start == 0.0, "first segment must start at 0");
    for (std::size_t i = 0; i < f.segments.size(); ++i) {
      const ExpSegment& s = f.segments[i];
      require(std::isfinite(s.intercept) && std::isfinite(s.rate), "segment parameters must be finite");
      if (s.rate < 0.0) throw Error(ErrorCode::NonMonotone, "segment rate must be >= 0");
      if (i > 0) {
        const ExpSegment& p = f.segments[i - 1];
        require(s.start > p.start, "segment starts must increase");
        if (s.intercept - s.rate * s.start > p.intercept - p.rate * s.start + 1e-15) {
          throw Error(ErrorCode::NonMonotone, "tail increases at t=" + std::to_string(s.start));
        }
      }
    }
    if (f.segments.front().intercept > 1e-15) {
      throw Error(ErrorCode::InvalidParameter, "tail exceeds 1 at the origin");
    }
    return std::make_shared<PiecewiseExpModel>(f.segments);
  }
  std::shared_ptr<const TailModel> operator()(const LevyFirstPassage& f) const {
    require(f.level > 0.0 && std::isfinite(f.level), "levy level must be > 0");
    return std::make_shared<LevyModel>(f.level);
  }
  std::shared_ptr<const TailModel> operator()(const Tabulated& f) const {
    f.curve.check();
    return std::make_shared<CurveModel>(f.curve);
  }
  std::shared_ptr<const TailModel> operator()(const FromMrl& f) const {
    validate_generator(f.curve);
    return std::make_shared<MrlModel>(f.curve);
  }
};

struct Describer {
  std::string operator()(const Exponential& f) const { return "exponential(rate=" + num(f.rate) + ")"; }
  std::string operator()(const Weibull& f) const { return "weibull(shape=" + num(f.shape) + ")"; }
  std::string operator()(const ShiftedParetoSquare& f) const {
    return "shifted_pareto_square(offset=" + num(f.offset) + ")";
  }
  std::string operator()(const PiecewiseConstantTail& f) const {
    return "piecewise_constant(" + std::to_string(f.levels.size()) + " levels)";
  }
  std::string operator()(const PiecewiseExpTail& f) const {
    return "piecewise_exp(" + std::to_string(f.segments.size()) + " segments)";
  }
  std::string operator()(const LevyFirstPassage& f) const { return "levy(level=" + num(f.level) + ")"; }
  std::string operator()(const Tabulated& f) const {
    return std::string("tabulated(") + std::to_string(f.curve.grid.size()) + " nodes, " +
           to_string(f.curve.mode) + ")";
  }
  std::string operator()(const FromMrl& f) const {
    return "mrl(" + std::to_string(f.curve.grid.size()) + " nodes, m0=" + num(f.curve.m0) + ")";
  }
  static std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }
};

}  // namespace

MomentFunction MomentFunction::identity() { return {}; }

MomentFunction MomentFunction::power(double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidParameter, "power moment needs p >= 1");
  MomentFunction g;
  g.kind = Kind::Power;
  g.parameter = p;
  return g;
}

MomentFunction MomentFunction::indicator_above(double threshold) {
  MomentFunction g;
  g.kind = Kind::IndicatorAbove;
  g.parameter = threshold;
  return g;
}

MomentFunction MomentFunction::tabulated(std::vector<double> grid, std::vector<double> values) {
  if (grid.empty() || grid.size() != values.size() || grid.front() != 0.0) {
    throw Error(ErrorCode::InvalidParameter, "moment curve needs a grid starting at 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidParameter, "moment grid must increase");
    if (values[i] < values[i - 1]) throw Error(ErrorCode::NonMonotone, "moment curve must be nondecreasing");
  }
  if (values.front() < 0.0) throw Error(ErrorCode::InvalidParameter, "moment curve must be >= 0");
  MomentFunction g;
  g.kind = Kind::Tabulated;
  g.grid = std::move(grid);
  g.values = std::move(values);
  return g;
}

double MomentFunction::operator()(double t) const {
  switch (kind) {
    case Kind::Identity: return t;
    case Kind::Power: return std::pow(t, parameter);
    case Kind::IndicatorAbove: return t > parameter ? 1.0 : 0.0;
    case Kind::Tabulated: {
      if (t >= grid.back()) return values.back();
      const auto it = std::upper_bound(grid.begin(), grid.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
      const double w = (t - grid[i]) / (grid[i + 1] - grid[i]);
      return values[i] + w * (values[i + 1] - values[i]);
    }
  }
  return 0.0;
}

bool MomentFunction::bounded() const {
  return kind == Kind::IndicatorAbove || kind == Kind::Tabulated;
}

Distribution::Distribution(DistributionSpec spec, bool require_mass_near_zero)
    : spec_(std::move(spec)) {
  if (!(spec_.defect >= 0.0 && spec_.defect < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "mass at infinity must lie in [0, 1)");
  }
  auto base = std::visit(ModelBuilder{}, spec_.family);
  if (spec_.defect > 0.0) {
    model_ = std::make_shared<DefectiveModel>(std::move(base), spec_.defect);
  } else {
    model_ = std::move(base);
  }

  const double at_zero = model_->tail(0.0);
  if (!(at_zero > 0.0)) throw Error(ErrorCode::ZeroAtOrigin, "F̄(0) = 0");
  if (require_mass_near_zero && !model_->parametric()) {
    double probe = model_->scale();
    for (double b : model_->breakpoints()) {
      if (b > 0.0) probe = std::min(probe, b);
    }
    if (model_->tail(probe * 1e-9) >= 1.0) {
      throw Error(ErrorCode::DegenerateAtZero, "F̄(r) = 1 for some r > 0: no mass near zero");
    }
  }

  if (at_zero < 1.0) atoms_.push_back({0.0, 1.0 - at_zero});
  for (const Atom& a : model_->jumps()) atoms_.push_back(a);

  breakpoints_ = model_->breakpoints();
  const double s = model_->scale();
  for (double f : {0.1, 1.0, 10.0, 100.0}) breakpoints_.push_back(f * s);
  for (const Atom& a : atoms_) breakpoints_.push_back(a.at);
  sort_unique(breakpoints_);

  support_sup_ = model_->support_sup();
  mass_at_infinity_ = model_->limit_at_infinity();
  tail_class_ = model_->tail_class();
  if (std::isfinite(support_sup_)) {
    tail_class_ = {TailClass::Kind::Compact, 0.0};
    std::erase_if(breakpoints_, [this](double b) { return b > support_sup_; });
  }
  mean_ = g_moment(MomentFunction::identity());
}

std::string Distribution::describe() const {
  std::string out = std::visit(Describer{}, spec_.family);
  if (spec_.defect > 0.0) out += " + mass_at_infinity=" + Describer::num(spec_.defect);
  return out;
}

double Distribution::tail(double t) const {
  if (t < 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  return model_->tail(t);
}

double Distribution::tail_left(double t) const {
  if (t <= 0.0) return 1.0;
  if (std::isinf(t)) return mass_at_infinity_;
  return model_->tail_left(t);
}

double Distribution::log_tail(double t) const {
  if (t < 0.0) return 0.0;
  if (std::isinf(t)) return -kInf;
  return model_->log_tail(t);
}

double Distribution::density(double t) const {
  if (t < 0.0 || std::isinf(t) || t > support_sup_) return 0.0;
  return model_->density(t);
}

double Distribution::hazard_increment(double a, double d) const {
  if (d <= 0.0) return 0.0;
  if (std::isinf(d)) return mass_at_infinity_ > 0.0 && tail(a) > 0.0 ? -std::log(mass_at_infinity_ / tail(a)) : kInf;
  return std::max(0.0, model_->hazard_increment(std::max(a, 0.0), d));
}

double Distribution::scale() const { return model_->scale(); }

double Distribution::horizon(double level) const {
  if (std::isfinite(support_sup_)) return next_power_of_two(support_sup_);
  double t = next_power_of_two(scale());
  const double cap = 1e8 * scale();
  double last_break = 0.0;
  for (double b : breakpoints_) last_break = std::max(last_break, b);
  while (t < cap && (tail(t) - mass_at_infinity_ > level || t < last_break)) t *= 2.0;
  return t;
}

double Distribution::hazard_quantile(double q) const {
  if (std::isinf(q)) return kInf;
  return model_->hazard_quantile(q);
}

double draw_exponential(Rng& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return -std::log1p(-u);
}

double Distribution::sample(Rng& rng) const { return hazard_quantile(draw_exponential(rng)); }

double Distribution::sample_min(Rng& rng, double copies) const {
  return hazard_quantile(draw_exponential(rng) / copies);
}

double Distribution::g_moment(const MomentFunction& g) const {
  using Kind = MomentFunction::Kind;
  if (g.kind == Kind::IndicatorAbove) return tail(g.parameter);

  const double upper = support_sup_;
  if (g.kind == Kind::Tabulated) {
    double total = g.values.front();
    for (std::size_t i = 0; i + 1 < g.grid.size(); ++i) {
      const double slope = (g.values[i + 1] - g.values[i]) / (g.grid[i + 1] - g.grid[i]);
      if (slope == 0.0) continue;
      const double lo = g.grid[i];
      const double hi = std::min(g.grid[i + 1], upper);
      if (hi <= lo) break;
      total += slope * integrate([this](double t) { return tail(t); }, lo, hi, breakpoints_).value;
    }
    return total;
  }

  const double p = g.kind == Kind::Power ? g.parameter : 1.0;
  if (mass_at_infinity_ > 0.0) return kInf;
  if (tail_class_.kind == TailClass::Kind::Power && tail_class_.exponent <= p) return kInf;
  if (p == 1.0) return integrate([this](double t) { return tail(t); }, 0.0, upper, breakpoints_).value;
  return integrate([this, p](double t) { return p * std::pow(t, p - 1.0) * tail(t); }, 0.0, upper,
                   breakpoints_)
      .value;
}

double Distribution::mean() const { return mean_; }

double Distribution::second_moment() const { return g_moment(MomentFunction::power(2.0)); }

Distribution validate(DistributionSpec spec) { return Distribution(std::move(spec)); }

}  // namespace restart

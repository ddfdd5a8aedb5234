#include "itf/interval_map.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "itf/errors.hpp"

namespace itf {

std::string_view to_string(MapKind k) {
  switch (k) {
    case MapKind::tent: return "tent";
    case MapKind::quadratic: return "quadratic";
    case MapKind::chebyshev: return "chebyshev";
    case MapKind::plinear: return "plinear";
    case MapKind::custom: return "custom";
  }
  return "?";
}

std::string_view to_string(CritKind k) {
  switch (k) {
    case CritKind::turning: return "turning";
    case CritKind::inflection: return "inflection";
    case CritKind::kink: return "kink";
  }
  return "?";
}

namespace {

class AffineFormula final : public BranchFormula {
 public:
  AffineFormula(double x0, double y0, double slope) : x0_(x0), y0_(y0), slope_(slope) {}
  double value(double x) const override { return y0_ + slope_ * (x - x0_); }
  double derivative(double) const override { return slope_; }
  long double value_ext(long double x) const override {
    return static_cast<long double>(y0_) + static_cast<long double>(slope_) * (x - x0_);
  }
  long double derivative_ext(long double) const override { return slope_; }
  double inverse(double y) const override { return x0_ + (y - y0_) / slope_; }
  long double inverse_ext(long double y) const override {
    return static_cast<long double>(x0_) + (y - y0_) / static_cast<long double>(slope_);
  }
  bool affine() const override { return true; }

 private:
  double x0_, y0_, slope_;
};

class QuadraticFormula final : public BranchFormula {
 public:
  QuadraticFormula(double a, bool left) : a_(a), left_(left) {}
  double value(double x) const override { return a_ * x * (1.0 - x); }
  double derivative(double x) const override { return a_ * (1.0 - 2.0 * x); }
  long double value_ext(long double x) const override { return a_ * x * (1.0L - x); }
  long double derivative_ext(long double x) const override { return a_ * (1.0L - 2.0L * x); }
  double inverse(double y) const override { return static_cast<double>(inverse_ext(y)); }
  long double inverse_ext(long double y) const override {
    const long double a = a_;
    y = std::clamp(y, 0.0L, a / 4.0L);
    const long double r = sqrtl(std::max(0.0L, 1.0L - 4.0L * y / a));
    // the left root in the cancellation-free form
    return left_ ? (2.0L * y / a) / (1.0L + r) : 0.5L * (1.0L + r);
  }

 private:
  double a_;
  bool left_;
};

// f(x) = (1 - T_d(1-2x))/2 written as sin^2(d asin(sqrt x)); Df = d U_{d-1}(1-2x)
class ChebyshevFormula final : public BranchFormula {
 public:
  ChebyshevFormula(int d, int k) : d_(d), k_(k) {}
  double value(double x) const override { return static_cast<double>(value_ext(x)); }
  double derivative(double x) const override { return static_cast<double>(derivative_ext(x)); }
  long double value_ext(long double x) const override {
    const long double s = sinl(d_ * asinl(sqrtl(std::clamp(x, 0.0L, 1.0L))));
    return s * s;
  }
  long double derivative_ext(long double x) const override {
    const long double y = 1.0L - 2.0L * x;
    long double u0 = 1.0L, u1 = 2.0L * y;
    for (int k = 2; k < d_; ++k) {
      const long double u2 = 2.0L * y * u1 - u0;
      u0 = u1;
      u1 = u2;
    }
    return d_ * u1;
  }
  double inverse(double y) const override { return static_cast<double>(inverse_ext(y)); }
  long double inverse_ext(long double y) const override {
    // d*phi ranges over [k pi/2, (k+1) pi/2] with phi = asin(sqrt x)
    const long double r = asinl(sqrtl(std::clamp(y, 0.0L, 1.0L)));  // in [0, pi/2]
    const long double half = std::numbers::pi_v<long double> / 2.0L;
    const long double dphi = (k_ % 2 == 0) ? k_ * half + r : (k_ + 1) * half - r;
    const long double s = sinl(dphi / d_);
    return s * s;
  }

 private:
  int d_, k_;
};

class ExpressionFormula final : public BranchFormula {
 public:
  ExpressionFormula(Expression e, Interval dom) : e_(std::move(e)), dom_(dom) {
    ylo_ = e_(dom.lo);
    yhi_ = e_(dom.hi);
  }
  double value(double x) const override { return e_(x); }
  double derivative(double x) const override { return e_.eval(x).d; }
  double inverse(double y) const override {
    const bool inc = yhi_ >= ylo_;
    if (inc ? y <= ylo_ : y >= ylo_) return dom_.lo;
    if (inc ? y >= yhi_ : y <= yhi_) return dom_.hi;
    double a = dom_.lo, b = dom_.hi;
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      const bool below = inc ? e_(m) < y : e_(m) > y;
      (below ? a : b) = m;
    }
    return 0.5 * (a + b);
  }

 private:
  Expression e_;
  Interval dom_;
  double ylo_, yhi_;
};

std::string idx(std::size_t i) { return "branches[" + std::to_string(i) + "]"; }

}  // namespace

std::string branch_label(std::size_t index, std::size_t count, MapKind kind) {
  if (count == 2 && (kind == MapKind::tent || kind == MapKind::quadratic))
    return index == 0 ? "L" : "R";
  if (index < 26) return std::string(1, static_cast<char>('A' + index));
  return "b" + std::to_string(index);
}

IntervalMap::IntervalMap(std::string name, MapKind kind, Interval domain,
                         std::vector<BranchSpec> branches, std::vector<CriticalPoint> crit)
    : name_(std::move(name)),
      kind_(kind),
      domain_(domain),
      branches_(std::move(branches)),
      crit_(std::move(crit)) {
  if (!(domain_.length() > 0)) throw SchemaError("domain", "empty domain");
  if (branches_.empty()) throw SchemaError("branches", "no branches");
  double edge = domain_.lo;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    auto& b = branches_[i];
    if (!b.formula) throw SchemaError(idx(i), "missing formula");
    if (std::abs(b.interval.lo - edge) > kSnapTol)
      throw SchemaError(idx(i) + ".interval",
                        b.interval.lo < edge ? "overlaps previous branch" : "gap before branch");
    b.interval.lo = edge;
    if (!(b.interval.length() > kSnapTol)) throw SchemaError(idx(i) + ".interval", "empty branch");
    if (b.orientation != 1 && b.orientation != -1)
      throw SchemaError(idx(i) + ".orientation", "must be +1 or -1");
    // sampled strict monotonicity
    constexpr int kSamples = 33;
    for (int s = 1; s < kSamples; ++s) {
      const double x = b.interval.lo + b.interval.length() * s / kSamples;
      const double d = b.derivative(x);
      if (!(d * b.orientation > 0))
        throw SchemaError(idx(i), "not strictly monotone with declared orientation near x=" +
                                      std::to_string(x));
    }
    const double v0 = b(b.interval.lo), v1 = b(b.interval.hi);
    if ((v1 - v0) * b.orientation <= 0)
      throw SchemaError(idx(i), "endpoint values contradict orientation");
    if (!domain_.contains(v0, 1e-12) || !domain_.contains(v1, 1e-12))
      throw SchemaError(idx(i) + ".image", "image escapes the domain");
    if (b.label.empty()) b.label = branch_label(i, branches_.size(), kind_);
    edge = b.interval.hi;
  }
  if (std::abs(edge - domain_.hi) > kSnapTol)
    throw SchemaError("branches", "branches do not cover the domain");
  branches_.back().interval.hi = domain_.hi;

  for (std::size_t i = 0; i < crit_.size(); ++i) {
    auto& c = crit_[i];
    const std::string field = "crit[" + std::to_string(i) + "]";
    if (!std::isfinite(c.order) || c.order < 1.0)
      throw SchemaError(field + ".order", "order must be finite and >= 1");
    if (c.kind != CritKind::kink && !(c.order > 1.0))
      throw SchemaError(field + ".order", "order must exceed 1");
    if (!domain_.contains(c.c)) throw SchemaError(field, "outside the domain");
    if (c.kind == CritKind::inflection) {
      if (on_breakpoint(c.c)) throw SchemaError(field, "inflection point on a breakpoint");
    } else {
      if (!on_breakpoint(c.c))
        throw SchemaError(field, "turning point must be a shared endpoint of two branches");
      c.c = snap(c.c);
      const std::size_t r = branch_at(c.c, Side::right);
      if (branches_[r].orientation == branches_[r - 1].orientation)
        throw SchemaError(field, "no change of orientation at turning point");
    }
    c.image = (*this)(c.c, Side::left);
  }
}

bool IntervalMap::piecewise_affine() const {
  for (const auto& b : branches_)
    if (!b.formula->affine()) return false;
  return true;
}

bool IntervalMap::full_branches() const {
  for (const auto& b : branches_)
    if (!b.image().approx_equal(domain_, kIdentifyTol)) return false;
  return true;
}

double IntervalMap::max_order() const {
  double m = 1.0;
  for (const auto& c : crit_)
    if (c.flat()) m = std::max(m, c.order);
  return m;
}

double IntervalMap::snap(double x) const {
  if (!(x >= domain_.lo - kSnapTol && x <= domain_.hi + kSnapTol))
    throw DomainError("point " + std::to_string(x) + " outside the domain");
  if (std::abs(x - domain_.lo) <= kSnapTol) return domain_.lo;
  for (const auto& b : branches_)
    if (std::abs(x - b.interval.hi) <= kSnapTol) return b.interval.hi;
  return x;
}

bool IntervalMap::on_breakpoint(double x) const {
  for (std::size_t i = 0; i + 1 < branches_.size(); ++i)
    if (std::abs(x - branches_[i].interval.hi) <= kSnapTol) return true;
  return false;
}

std::size_t IntervalMap::branch_at(double x, Side side) const {
  x = snap(x);
  const std::size_t n = branches_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& iv = branches_[i].interval;
    if (x < iv.hi) return i;
    if (x == iv.hi) return (side == Side::left || i + 1 == n) ? i : i + 1;
  }
  return n - 1;
}

double IntervalMap::operator()(double x, Side side) const {
  x = snap(x);
  const double y = branches_[branch_at(x, side)](x);
  return std::clamp(y, domain_.lo, domain_.hi);
}

double IntervalMap::derivative(double x, Side side) const {
  x = snap(x);
  return branches_[branch_at(x, side)].derivative(x);
}

bool IntervalMap::at_flat_critical(double x) const {
  for (const auto& c : crit_)
    if (c.flat() && std::abs(x - c.c) <= kSnapTol) return true;
  return false;
}

namespace {

// one step in extended precision; snapping decisions are made in double
long double step_ext(const IntervalMap& f, long double& x, Side side, std::size_t& branch) {
  const double xd = static_cast<double>(x);
  const double snapped = f.snap(xd);
  if (snapped != xd) x = snapped;
  branch = f.branch_at(snapped, side);
  const long double y = f.branch(branch).formula->value_ext(x);
  return std::clamp(y, static_cast<long double>(f.domain().lo),
                    static_cast<long double>(f.domain().hi));
}

}  // namespace

std::vector<double> eval_orbit(const IntervalMap& f, double x, std::size_t n, Side side) {
  std::vector<double> orbit;
  orbit.reserve(n + 1);
  long double xe = f.snap(x);
  orbit.push_back(static_cast<double>(xe));
  std::size_t b = 0;
  for (std::size_t k = 0; k < n; ++k) {
    xe = step_ext(f, xe, side, b);
    orbit.push_back(static_cast<double>(xe));
  }
  return orbit;
}

double log_derivative_along(const IntervalMap& f, double x, std::size_t n, Side side) {
  long double acc = 0.0L, xe = f.snap(x);
  std::size_t b = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xd = f.snap(static_cast<double>(xe));
    if (f.at_flat_critical(xd)) throw CriticalOrbitError(k, xd);
    const long double y = step_ext(f, xe, side, b);
    acc += logl(fabsl(f.branch(b).formula->derivative_ext(xe)));
    xe = y;
  }
  return static_cast<double>(acc);
}

double derivative_along(const IntervalMap& f, double x, std::size_t n, Side side) {
  long double acc = 1.0L, xe = f.snap(x);
  std::size_t b = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double xd = f.snap(static_cast<double>(xe));
    if (f.at_flat_critical(xd)) throw CriticalOrbitError(k, xd);
    const long double y = step_ext(f, xe, side, b);
    acc *= fabsl(f.branch(b).formula->derivative_ext(xe));
    xe = y;
  }
  return static_cast<double>(acc);
}

IntervalMap tent_map(double s) {
  if (!(s > 0 && s <= 2)) throw SchemaError("s", "tent slope must lie in (0,2]");
  std::vector<BranchSpec> br(2);
  br[0] = {{0.0, 0.5}, 1, "", std::make_shared<AffineFormula>(0.0, 0.0, s)};
  br[1] = {{0.5, 1.0}, -1, "", std::make_shared<AffineFormula>(1.0, 0.0, -s)};
  char name[32];
  std::snprintf(name, sizeof name, "tent(%g)", s);
  return IntervalMap(name, MapKind::tent, {0, 1}, std::move(br),
                     {{0.5, 1.0, 0.0, CritKind::kink}});
}

IntervalMap quadratic_map(double a) {
  if (!(a > 0 && a <= 4)) throw SchemaError("a", "quadratic parameter must lie in (0,4]");
  std::vector<BranchSpec> br(2);
  br[0] = {{0.0, 0.5}, 1, "", std::make_shared<QuadraticFormula>(a, true)};
  br[1] = {{0.5, 1.0}, -1, "", std::make_shared<QuadraticFormula>(a, false)};
  char name[40];
  std::snprintf(name, sizeof name, "quadratic(%.12g)", a);
  return IntervalMap(name, MapKind::quadratic, {0, 1}, std::move(br),
                     {{0.5, 2.0, 0.0, CritKind::turning}});
}

IntervalMap chebyshev_map(int d) {
  if (d < 2 || d > 64) throw SchemaError("d", "chebyshev degree must lie in [2,64]");
  std::vector<BranchSpec> br;
  std::vector<CriticalPoint> crit;
  auto knot = [d](int k) {
    const double s = std::sin(k * std::numbers::pi / (2.0 * d));
    return s * s;  // (1 - cos(k pi/d))/2
  };
  for (int k = 0; k < d; ++k) {
    br.push_back({{knot(k), k + 1 == d ? 1.0 : knot(k + 1)},
                  k % 2 == 0 ? 1 : -1,
                  "",
                  std::make_shared<ChebyshevFormula>(d, k)});
    if (k > 0) crit.push_back({knot(k), 2.0, 0.0, CritKind::turning});
  }
  return IntervalMap("chebyshev(" + std::to_string(d) + ")", MapKind::chebyshev, {0, 1},
                     std::move(br), std::move(crit));
}

IntervalMap plinear_map(std::string name, const std::vector<double>& breakpoints,
                        const std::vector<Interval>& images, std::vector<int> orientations) {
  if (breakpoints.size() < 2) throw SchemaError("breakpoints", "need at least two breakpoints");
  const std::size_t n = breakpoints.size() - 1;
  if (images.size() != n)
    throw SchemaError("images", "expected " + std::to_string(n) + " images, got " +
                                    std::to_string(images.size()));
  if (orientations.empty())
    for (std::size_t i = 0; i < n; ++i) orientations.push_back(i % 2 == 0 ? 1 : -1);
  if (orientations.size() != n) throw SchemaError("orientations", "wrong count");
  std::vector<BranchSpec> br;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = breakpoints[i], b = breakpoints[i + 1];
    const Interval& im = images[i];
    const std::string field = "images[" + std::to_string(i) + "]";
    if (!(b > a)) throw SchemaError("breakpoints[" + std::to_string(i + 1) + "]", "not increasing");
    if (!(im.hi > im.lo)) throw SchemaError(field, "empty image");
    const double slope = orientations[i] * im.length() / (b - a);
    const double y0 = orientations[i] > 0 ? im.lo : im.hi;
    br.push_back({{a, b}, orientations[i], "", std::make_shared<AffineFormula>(a, y0, slope)});
  }
  // turning points where adjacent branches meet continuously and flip
  std::vector<CriticalPoint> crit;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (br[i].orientation == br[i + 1].orientation) continue;
    const double left = br[i](breakpoints[i + 1]), right = br[i + 1](breakpoints[i + 1]);
    if (std::abs(left - right) <= 1e-12) crit.push_back({breakpoints[i + 1], 1.0, 0.0, CritKind::kink});
  }
  return IntervalMap(std::move(name), MapKind::plinear,
                     {breakpoints.front(), breakpoints.back()}, std::move(br), std::move(crit));
}

IntervalMap custom_map(std::string name, const std::vector<double>& breakpoints,
                       const std::vector<Expression>& exprs, std::vector<CriticalPoint> crit) {
  if (breakpoints.size() < 2) throw SchemaError("breakpoints", "need at least two breakpoints");
  const std::size_t n = breakpoints.size() - 1;
  if (exprs.size() != 1 && exprs.size() != n)
    throw SchemaError("branches", "expected 1 or " + std::to_string(n) + " expressions");
  std::vector<BranchSpec> br;
  for (std::size_t i = 0; i < n; ++i) {
    const Interval iv{breakpoints[i], breakpoints[i + 1]};
    if (!(iv.hi > iv.lo))
      throw SchemaError("breakpoints[" + std::to_string(i + 1) + "]", "not increasing");
    const Expression& e = exprs.size() == 1 ? exprs[0] : exprs[i];
    const int orient = e(iv.hi) >= e(iv.lo) ? 1 : -1;
    br.push_back({iv, orient, "", std::make_shared<ExpressionFormula>(e, iv)});
  }
  return IntervalMap(std::move(name), MapKind::custom, {breakpoints.front(), breakpoints.back()},
                     std::move(br), std::move(crit));
}

}  // namespace itf

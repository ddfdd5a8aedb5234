#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "itf/expression.hpp"
#include "itf/interval.hpp"

namespace itf {

// Which branch owns a point sitting on a shared breakpoint.
enum class Side { left, right };

enum class MapKind { tent, quadratic, chebyshev, plinear, custom };
std::string_view to_string(MapKind k);

// Closed-form evaluation of one monotone branch.
class BranchFormula {
 public:
  virtual ~BranchFormula() = default;
  virtual double value(double x) const = 0;
  virtual double derivative(double x) const = 0;
  // extended-precision forms used along orbits; default to the double ones
  virtual long double value_ext(long double x) const { return value(static_cast<double>(x)); }
  virtual long double derivative_ext(long double x) const {
    return derivative(static_cast<double>(x));
  }
  virtual long double inverse_ext(long double y) const { return inverse(static_cast<double>(y)); }
  // preimage of y on the branch; y is clamped to the branch image first
  virtual double inverse(double y) const = 0;
  virtual bool affine() const { return false; }
};

struct BranchSpec {
  Interval interval;
  int orientation = 1;
  std::string label;
  std::shared_ptr<const BranchFormula> formula;

  double operator()(double x) const { return formula->value(x); }
  double derivative(double x) const { return formula->derivative(x); }
  double inverse(double y) const { return formula->inverse(y); }

  Interval image() const { return apply(interval); }
  // f(J) for J inside the branch interval
  Interval apply(const Interval& j) const { return hull(formula->value(j.lo), formula->value(j.hi)); }
  // f^{-1}(J) inside the branch; J is clamped to the image
  Interval pull_back(const Interval& j) const {
    return hull(formula->inverse(j.lo), formula->inverse(j.hi));
  }

};

// turning: Df(c) = 0 at an interior breakpoint, orientation flips.
// inflection: Df(c) = 0 inside a branch, excluded from turning logic.
// kink: piecewise-linear turning point (tent), derivative never vanishes.
enum class CritKind { turning, inflection, kink };
std::string_view to_string(CritKind k);

struct CriticalPoint {
  double c = 0.0;
  double order = 2.0;
  double image = 0.0;
  CritKind kind = CritKind::turning;

  bool flat() const { return kind != CritKind::kink; }  // Df(c) = 0
};

class IntervalMap {
 public:
  // validates the invariants; throws SchemaError naming the offending field
  IntervalMap(std::string name, MapKind kind, Interval domain, std::vector<BranchSpec> branches,
              std::vector<CriticalPoint> crit);

  const std::string& name() const { return name_; }
  MapKind kind() const { return kind_; }
  const Interval& domain() const { return domain_; }
  const std::vector<BranchSpec>& branches() const { return branches_; }
  const BranchSpec& branch(std::size_t i) const { return branches_[i]; }
  std::size_t size() const { return branches_.size(); }
  const std::vector<CriticalPoint>& crit() const { return crit_; }

  bool piecewise_affine() const;
  bool full_branches() const;  // every branch maps onto the domain
  double max_order() const;    // largest critical order, 1 without flat critical points

  // snaps x to a nearby breakpoint; throws DomainError outside the domain
  double snap(double x) const;
  bool on_breakpoint(double x) const;  // interior breakpoint after snapping
  std::size_t branch_at(double x, Side side = Side::right) const;

  double operator()(double x, Side side = Side::right) const;
  double derivative(double x, Side side = Side::right) const;
  bool at_flat_critical(double x) const;

 private:
  std::string name_;
  MapKind kind_;
  Interval domain_;
  std::vector<BranchSpec> branches_;
  std::vector<CriticalPoint> crit_;
};

std::vector<double> eval_orbit(const IntervalMap& f, double x, std::size_t n,
                               Side side = Side::right);

// |Df^n(x)|; throws CriticalOrbitError if f^k(x) is a flat critical point, k < n
double derivative_along(const IntervalMap& f, double x, std::size_t n, Side side = Side::right);
// log |Df^n(x)|, same contract, safe against overflow for long orbits
double log_derivative_along(const IntervalMap& f, double x, std::size_t n,
                            Side side = Side::right);

IntervalMap tent_map(double s);
IntervalMap quadratic_map(double a);
IntervalMap chebyshev_map(int d);
// affine branches over consecutive breakpoints with the given images;
// orientations default to alternating +, -
IntervalMap plinear_map(std::string name, const std::vector<double>& breakpoints,
                        const std::vector<Interval>& images, std::vector<int> orientations = {});
IntervalMap custom_map(std::string name, const std::vector<double>& breakpoints,
                       const std::vector<Expression>& branches, std::vector<CriticalPoint> crit);

std::string branch_label(std::size_t index, std::size_t count, MapKind kind);

}  // namespace itf

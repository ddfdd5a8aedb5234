#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

namespace itf {

inline constexpr double kSnapTol = 1e-14;      // endpoint snapping
inline constexpr double kIdentifyTol = 1e-12;  // tower node identification

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool contains(const Interval& o, double tol = 0.0) const {
    return o.lo >= lo - tol && o.hi <= hi + tol;
  }
  bool approx_equal(const Interval& o, double tol) const {
    return std::abs(lo - o.lo) <= tol && std::abs(hi - o.hi) <= tol;
  }
  // concentric neighbourhood of length (1+2*delta)|J|
  Interval scaled(double delta) const {
    const double pad = delta * length();
    return {lo - pad, hi + pad};
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// intersection with positive length (> min_len), otherwise empty
inline std::optional<Interval> intersect(const Interval& a, const Interval& b,
                                         double min_len = 0.0) {
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  if (hi - lo <= min_len) return std::nullopt;
  return Interval{lo, hi};
}

inline Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace itf

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "itf/interval_map.hpp"

namespace itf {

using Letter = std::uint32_t;

struct Word {
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  Letter operator[](std::size_t i) const { return letters[i]; }
  std::span<const Letter> span() const { return letters; }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;
};

// labels concatenated, comma separated when some label is longer than one char
std::string to_string(const Word& w, const IntervalMap& f);
Word parse_word(const std::string& text, const IntervalMap& f);

struct Cylinder {
  Word word;
  Interval interval;
  Interval image;       // f^n(interval)
  int orientation = 1;  // of f^n on the cylinder
};

inline constexpr std::size_t kDefaultCylinderCap = 1u << 21;

// P_n, left to right; throws ResourceError past the cap
std::vector<Cylinder> refine(const IntervalMap& f, std::size_t n,
                             std::size_t cap = kDefaultCylinderCap);
// one refinement step P_n -> P_{n+1}
std::vector<Cylinder> refine_step(const IntervalMap& f, const std::vector<Cylinder>& cyl,
                                  std::size_t cap = kDefaultCylinderCap);
// P_1 as cylinders
std::vector<Cylinder> branch_cylinders(const IntervalMap& f);

// throws AmbiguityError when the orbit hits a breakpoint and no side is given
Word itinerary(const IntervalMap& f, double x, std::size_t n,
               std::optional<Side> side = std::nullopt);

struct LapsRecord {
  std::vector<std::uint64_t> laps;  // laps(f^n), n = 1..n_max
  double h_top_estimate = 0.0;
  double cauchy_diff = 0.0;  // |h_n - h_{n-1}| at n_max
};
LapsRecord laps_entropy(const IntervalMap& f, std::size_t n_max,
                        std::size_t cap = kDefaultCylinderCap);
// number of maximal monotone pieces of f^n given P_n
std::uint64_t count_laps(const std::vector<Cylinder>& cyl);

std::optional<Cylinder> cylinder_of(const IntervalMap& f, const Word& w);

struct PeriodicPoint {
  double x = 0.0;
  double multiplier = 0.0;  // |Df^n(x)|
};
std::optional<PeriodicPoint> periodic_point(const IntervalMap& f, const Word& w);

// Evaluation along a prescribed letter sequence, using each branch's
// formula even slightly outside its interval.
double apply_letters(const IntervalMap& f, std::span<const Letter> w, double x);
double log_derivative_letters(const IntervalMap& f, std::span<const Letter> w, double x);
// (f_{w_{n-1}} o ... o f_{w_0})^{-1}(y)
double pull_back(const IntervalMap& f, std::span<const Letter> w, double y);
Interval pull_back(const IntervalMap& f, std::span<const Letter> w, const Interval& j);
// log|Df^n| at the pullback of y, found in the same backward pass; the point goes to *x
double pull_back_log_derivative(const IntervalMap& f, std::span<const Letter> w, double y,
                                double* x = nullptr);
// fixed point of the word map inside J by bisection; empty without a sign change
std::optional<double> fixed_point_in(const IntervalMap& f, std::span<const Letter> w,
                                     const Interval& j);

void write_cylinders_csv(std::ostream& out, const std::vector<Cylinder>& cyl,
                         const IntervalMap& f);

}  // namespace itf

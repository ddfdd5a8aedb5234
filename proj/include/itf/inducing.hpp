#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "itf/hofbauer.hpp"
#include "itf/interval_map.hpp"
#include "itf/symbolic.hpp"

namespace itf {

enum class SchemeOrigin { tower_first_return, delta_extendible };

struct SchemeBranch {
  Interval domain;     // X_i
  std::size_t tau = 1;
  Word word;           // the f-letters of F = f^tau on X_i
  Interval extension;  // X_i', mapped by f^tau onto the scaled neighbourhood of X
  double inf_deriv = 0.0;  // sampled bracket of |DF| on X_i
  double sup_deriv = 0.0;
};

struct InducingScheme {
  IntervalMap map;
  Interval X;
  std::vector<SchemeBranch> branches;  // ordered by position
  double delta = 0.0;
  SchemeOrigin origin = SchemeOrigin::tower_first_return;
  std::string origin_desc;
  std::size_t truncation = 0;
  double escaping_mass_bound = 0.0;     // |X| minus the covered length
  std::vector<double> escaping_by_time;  // index n: |X| minus the length with tau <= n
  std::size_t rejected_overlaps = 0;    // extendible candidates dropped for overlap
  double partial_return_mass = 0.0;     // first returns that were not full branches

  std::size_t max_tau() const;
  double measured_distortion() const;  // max over branches of sup/inf |DF|
  // Koebe bound for delta > 0, +inf without an extension margin
  double koebe_bound() const;
  // Koebe bound with an extension margin, the measured distortion without one
  double distortion_bound() const;
};

double koebe_bound(double delta);

// X^ = pi^{-1}(C) lifted to every tower domain containing C, where
// C = pi(D) intersected with the cylinder of the given word (whole D for the empty word).
struct XhatDescriptor {
  std::size_t node = 0;
  Word cylinder;
};

struct SchemeOptions {
  std::size_t piece_cap = 4'000'000;
  int derivative_samples = 17;
};

InducingScheme first_return_scheme(const HofbauerTower& tower, const XhatDescriptor& xhat,
                                   std::size_t T, SchemeOptions opt = {});

InducingScheme extendible_return_scheme(const IntervalMap& f, const Interval& X, double delta,
                                        std::size_t T, SchemeOptions opt = {});

struct SchemeOverlap {
  std::size_t a = 0, b = 0;
  Interval overlap;
};

struct BranchCheck {
  bool onto = true;
  bool distortion_ok = true;
  bool disjoint = true;
  double distortion = 1.0;
  double onto_error = 0.0;  // |F(X_i) symmetric-difference X| / |X|
  bool pass() const { return onto && distortion_ok && disjoint; }
};

struct ValidationReport {
  std::vector<BranchCheck> branches;
  std::vector<SchemeOverlap> overlaps;
  double bound = 0.0;
  double worst_distortion = 1.0;
  bool pass = true;
};

ValidationReport validate_scheme(const InducingScheme& s);

// (i, lo, hi, tau, inf_DF, sup_DF, ext_lo, ext_hi)
void write_scheme_csv(std::ostream& out, const InducingScheme& s);

// F on branch i and its derivative
double induced_apply(const InducingScheme& s, std::size_t i, double x);
double induced_log_derivative(const InducingScheme& s, std::size_t i, double x);

// x in the cylinder of the branch sequence with F^n(x) = y, and log|DF^n(x)|.
// Evaluated branch by branch along the backward orbit, which stays accurate
// when the cylinder is far below double resolution.
struct InducedPullback {
  double x = 0.0;
  double log_deriv = 0.0;
};
InducedPullback induced_pull_back(const InducingScheme& s, std::span<const std::size_t> seq, double y);
// periodic point of F^n on the cylinder of seq, by iterating the contraction
InducedPullback induced_periodic_point(const InducingScheme& s, std::span<const std::size_t> seq);

}  // namespace itf

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "itf/fit.hpp"
#include "itf/inducing.hpp"
#include "itf/interval_map.hpp"

namespace itf {

enum class GrowthVerdict { collet_eckmann, polynomial, neither };
std::string_view to_string(GrowthVerdict v);

// growth of |Df^n(f(c))|, n = 1..n_max, kept as logarithms
struct CriticalGrowth {
  double c = 0.0;
  double order = 2.0;
  std::vector<double> log_deriv;  // entry n-1 is log|Df^n(f(c))|
  bool truncated = false;         // orbit hit a flat critical point
  std::size_t hit_time = 0;
  std::optional<LinearFit> exponential;  // log|Df^n| against n, kept when R^2 >= 0.9
  std::optional<LinearFit> polynomial;   // against log n
  GrowthVerdict verdict = GrowthVerdict::neither;
  double alpha = 0.0;
  double beta = 0.0;
  bool beta_above_threshold = false;
};

struct GrowthRecord {
  std::vector<CriticalGrowth> points;
  double t0 = 0.9;
  double beta_threshold = 0.0;  // l_max (1 + 1/t0) - 1
  GrowthVerdict verdict = GrowthVerdict::neither;
  bool heuristic = true;
};

// classify one sequence of log-derivatives
CriticalGrowth classify_growth(std::vector<double> log_deriv, double order, double t0,
                               double l_max);
GrowthRecord critical_orbit_growth(const IntervalMap& f, std::size_t n_max, double t0);

double gamma_n(std::size_t n, double delta_X);

struct BindingRecord {
  double c = 0.0;
  double order = 2.0;
  Interval U;                          // f^{-1} of the eps-ball around f(c), near c
  std::vector<double> gamma;           // gamma_n, n = 1..n_max
  std::vector<double> summable;        // partial sums of (gamma^{l-1}|Df^n(f(c))|)^{-t0/l}
  std::vector<double> bound_sums;      // partial sums over binding-period strings, to compare with 1
  std::size_t p_U = 0;                 // minimal sampled binding period
  std::vector<double> F_prime;         // entry p-1: inf |Df^p| over samples with p(x) = p, nan if none
  bool converged = false;              // tail increments of the summable series below 1e-8
  bool bound_below_one = false;
  bool heuristic = true;
};

// f^{-1}(B_eps(f(c))) around c, cut at the ends of the two adjacent branches
Interval critical_neighbourhood(const IntervalMap& f, const CriticalPoint& c, double eps);

struct BindingOptions {
  double zeta = 1.0;
  std::size_t grid = 2001;
};

// one record per flat critical point
std::vector<BindingRecord> binding_analysis(const IntervalMap& f, double eps, double delta_X,
                                            std::size_t n_max, double t0, BindingOptions opt = {});
// the same series for a prescribed derivative sequence
BindingRecord binding_series(const std::vector<double>& log_deriv, double order, double delta_X,
                             double t0, std::size_t p_U, double zeta = 1.0);

struct KoebeReport {
  double measured = 1.0;
  double bound = 0.0;
  bool ok = true;
};
KoebeReport koebe_check(const InducingScheme& s);

struct VariationRecord {
  std::vector<double> V;  // entry n-1 is V_n
  bool exact = true;      // every n-cylinder visited; otherwise a window bound past n = 1
  std::optional<LinearFit> fit;  // log V_n against n
  double rate = 0.0;             // fitted V_{n+1}/V_n
  double reference_rate = 0.0;   // 1 / inf|DF|, the contraction of inverse branches
  bool summable_trend = false;
};
VariationRecord variation_decay(const InducingScheme& s, double t, std::size_t n_max);

struct ExpansionReport {
  double lambda1 = 0.0;  // min over sampled segments of (1/k) log|Df^k|
  double b = 0.0;        // min over sampled first entries to U of |Df^r|
  std::size_t segments = 0;
  bool positive = false;
};
ExpansionReport mane_expansion(const IntervalMap& f, const std::vector<Interval>& U,
                               std::size_t n_max, std::size_t samples, std::uint64_t seed,
                               std::size_t k_min = 5);

struct NiceReport {
  bool nice = true;
  std::optional<std::size_t> offending;  // first n with f^n(boundary) inside U
};
NiceReport nice_check(const IntervalMap& f, const std::vector<Interval>& U, std::size_t n_max);

void write_growth_csv(std::ostream& out, const CriticalGrowth& g);
void write_binding_csv(std::ostream& out, const BindingRecord& b);
void write_variation_csv(std::ostream& out, const VariationRecord& v);

}  // namespace itf

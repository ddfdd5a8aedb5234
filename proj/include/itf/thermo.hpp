#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "itf/inducing.hpp"

namespace itf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Total weight sum_{n >= start} W_n e^{-nS} of the branches left out of a family,
// where W_n is the unshifted weight carried by inducing time n.
enum class TailKind { none, geometric, power, unbounded };
std::string_view to_string(TailKind k);

struct TailEnvelope {
  TailKind kind = TailKind::none;
  double scale = 0.0;     // W_n <= scale * rate^n (geometric) or scale * n^-rate (power)
  double rate = 0.0;
  std::size_t start = 1;  // first inducing time not represented by a kept branch
  bool exact = false;     // W_n is the formula itself, not an upper bound for it
  // optional extra cap scale * e^{-start*S}, only used for S >= 0
  double cap_scale = kInf;

  static TailEnvelope geometric(double scale, double rate, std::size_t start, bool exact);
  static TailEnvelope power(double scale, double exponent, std::size_t start, bool exact);
  static TailEnvelope unbounded(std::size_t start);

  bool finite(double S) const;
  double upper(double S) const;
  double lower(double S) const;  // the exact value for exact envelopes, else 0
};

struct FamilyBranch {
  std::size_t tau = 1;
  double log_lo = 0.0;  // bracket of the unshifted induced potential on the branch
  double log_hi = 0.0;
};

// periodic-point log-derivatives, filled on first use; they depend on the scheme only
struct PeriodicCache;

// Branch weights of an induced potential before the -S tau shift.
struct BranchFamily {
  double t = 0.0;
  std::vector<FamilyBranch> branches;
  TailEnvelope tail;
  double distortion = 1.0;  // K_dist
  double log_B = 0.0;       // constant in log Z_m + log Z_n <= log Z_{m+n} + log B
  std::shared_ptr<const InducingScheme> scheme;  // null for synthetic families
  std::size_t truncation = 0;                    // largest inducing time represented
  bool constant_weights() const;                 // brackets all degenerate
  std::shared_ptr<PeriodicCache> periodic;       // shared by copies
};

BranchFamily make_family(std::shared_ptr<const InducingScheme> scheme, double t);
// families without an underlying map, weights given at S = 0
BranchFamily synthetic_family(const std::vector<std::size_t>& tau,
                              const std::vector<double>& weights, TailEnvelope tail = {});
// w_n = (1-theta) theta^{n-1}, tau_n = n, n <= N kept, rest in an exact tail
BranchFamily geometric_family(double theta, std::size_t N);
// w_n = c n^{-p}, c normalising the full series when normalise is set
BranchFamily power_family(double p, std::size_t N, bool normalise);

struct ThermoModel {
  std::shared_ptr<const BranchFamily> family;
  double S = 0.0;
  std::vector<double> w_lo, w_hi;  // shifted weight brackets of kept branches
  double kept_lo = 0.0, kept_hi = 0.0;
  double tail_lo = 0.0, tail_hi = 0.0;

  double t() const { return family->t; }
  std::size_t size() const { return w_lo.size(); }
  double sum_lo() const { return kept_lo + tail_lo; }
  double sum_hi() const { return kept_hi + tail_hi; }
  bool divergent() const { return !(tail_hi < kInf); }
  double distortion() const { return family->distortion; }
  double log_B() const { return family->log_B; }
};

ThermoModel shifted_model(std::shared_ptr<const BranchFamily> family, double S);
ThermoModel induced_potential(std::shared_ptr<const InducingScheme> scheme, double t, double S);

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

struct PartitionOptions {
  std::size_t word_cap = 50'000;  // exact periodic-point enumeration up to this many words
};

Bracket partition_function(const ThermoModel& m, std::size_t n, std::size_t base,
                           PartitionOptions opt = {});
Bracket partition_function_total(const ThermoModel& m, std::size_t n,
                                 PartitionOptions opt = {});
Bracket partition_function_star(const ThermoModel& m, std::size_t n, std::size_t base,
                                PartitionOptions opt = {});

struct PressureBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t n_used = 0;  // 0 when the one-step weight sums gave the tightest bound
  double tail_bound = 0.0;
  bool infinite = false;  // weight sum not shown finite; upper is +inf
  double mid() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

// base: restrict the periodic-point refinement to one branch
PressureBracket gurevich_pressure(const ThermoModel& m, std::size_t n_max,
                                  std::optional<std::size_t> base = std::nullopt,
                                  PartitionOptions opt = {});

struct ShiftRow {
  double S = 0.0;
  PressureBracket P;
};
struct ShiftScan {
  std::vector<ShiftRow> rows;
  bool monotone = true;  // midpoints non-increasing up to bracket widths
};
ShiftScan pressure_vs_shift(std::shared_ptr<const BranchFamily> family,
                            const std::vector<double>& S_grid, std::size_t n_max = 6);

enum class Flag { finite, minus_inf, plus_inf, inconclusive };
std::string_view to_string(Flag f);

struct Discriminant {
  double p_star = 0.0;
  Flag p_star_flag = Flag::finite;
  double discriminant = 0.0;
  Flag discriminant_flag = Flag::finite;
  TailKind tail_model = TailKind::none;
  bool heuristic = true;
};
Discriminant p_star_discriminant(std::shared_ptr<const BranchFamily> family,
                                 const std::vector<double>& probe);

struct RecurrenceReport {
  std::vector<double> partial_sums;       // sum_{k<=n} lambda^-k Z_k (all bases)
  std::vector<double> star_partial_sums;  // sum_{k<=n} k lambda^-k Z*_k (base 0)
  bool recurrent = false;
  bool positive_recurrent = false;
  bool heuristic = true;
};
RecurrenceReport recurrence_check(const ThermoModel& m, double lambda, std::size_t n_max);

enum class DecayKind { exponential, polynomial, inconclusive };
std::string_view to_string(DecayKind k);

struct TailFit {
  DecayKind kind = DecayKind::inconclusive;
  double rate = 0.0;  // decay rate r of e^{-rn}, or exponent p of n^{-p}
  double r2 = 0.0;
  bool finite_support = false;
  std::size_t points = 0;
};
// masses[k] is the mass at inducing time k+1
TailFit tail_classify(const std::vector<double>& masses);

void write_shift_csv(std::ostream& out, const ShiftScan& scan);
void write_partition_csv(std::ostream& out, const std::vector<Bracket>& z);  // z[k] is Z_{k+1}
void write_mass_csv(std::ostream& out, const std::vector<double>& masses);

}  // namespace itf

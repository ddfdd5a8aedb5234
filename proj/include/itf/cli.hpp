#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "itf/inducing.hpp"
#include "itf/interval_map.hpp"

namespace itf {

enum class SchemeChoice { automatic, tower_first_return, extendible };

struct ScanConfig {
  std::string map = "markov_golden";
  SchemeChoice scheme = SchemeChoice::automatic;
  XhatDescriptor xhat;             // tower_first_return
  std::optional<std::string> xhat_word;  // parsed against the map when set
  std::size_t depth = 5;           // tower depth R
  std::optional<Interval> X;       // extendible; default the 3-cylinder containing 0.3
  double delta = 0.5;
  std::optional<std::size_t> cap;  // T; 10 for first returns, 14 for extendible schemes
  double t_min = 0.0;
  double t_max = 1.0;
  std::size_t steps = 11;
  double tol = 1e-10;
  std::size_t threads = 0;  // 0: hardware concurrency

  void validate() const;  // throws SchemaError naming the field
  double t_at(std::size_t k) const;
};

// the scheme a config selects for a map
std::shared_ptr<const InducingScheme> choose_scheme(const IntervalMap& f, const ScanConfig& c);

struct CurveRow {
  double t = 0.0;
  double p_lo = 0.0;  // bracket on P_+
  double p_hi = 0.0;
  double zero_entropy = 0.0;
  std::string tail_kind = "inconclusive";
  double tail_rate = 0.0;
  double tau_mean = 0.0;
  double lyap = 0.0;
  double entropy = 0.0;
  std::string error;  // empty when the row solved
};

struct PressureCurve {
  std::string map;
  std::vector<CurveRow> rows;  // sorted by t
};

PressureCurve scan_pressure(const ScanConfig& config);
// one row for an already built scheme
CurveRow pressure_row(std::shared_ptr<const InducingScheme> scheme, double t, double tol);

void write_curve_csv(std::ostream& out, const PressureCurve& curve);

enum class SmoothnessVerdict { smooth, transition, inconclusive };
std::string_view to_string(SmoothnessVerdict v);

struct PhaseReport {
  SmoothnessVerdict verdict = SmoothnessVerdict::inconclusive;
  std::vector<double> kinks;             // located by intersecting the adjacent lines
  std::vector<double> zero_entropy_crossings;
  bool heuristic = true;
};
PhaseReport detect_phase_transition(const PressureCurve& curve);

// log of the spectral radius of the weighted Markov matrix; NotApplicableError
// unless f is piecewise affine with a finite Markov partition
double markov_oracle(const IntervalMap& f, double t);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace itf

#include "itf/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "itf/errors.hpp"
#include "itf/fit.hpp"
#include "itf/format.hpp"
#include "itf/symbolic.hpp"

namespace itf {

namespace {
std::shared_ptr<PeriodicCache> new_periodic_cache();
}

std::string_view to_string(TailKind k) {
  switch (k) {
    case TailKind::none: return "none";
    case TailKind::geometric: return "geometric";
    case TailKind::power: return "power";
    case TailKind::unbounded: return "unbounded";
  }
  return "?";
}

std::string_view to_string(Flag f) {
  switch (f) {
    case Flag::finite: return "finite";
    case Flag::minus_inf: return "-inf";
    case Flag::plus_inf: return "+inf";
    case Flag::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(DecayKind k) {
  switch (k) {
    case DecayKind::exponential: return "exponential";
    case DecayKind::polynomial: return "polynomial";
    case DecayKind::inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------- tails

TailEnvelope TailEnvelope::geometric(double scale, double rate, std::size_t start, bool exact) {
  TailEnvelope e;
  e.kind = TailKind::geometric;
  e.scale = scale;
  e.rate = rate;
  e.start = start;
  e.exact = exact;
  return e;
}

TailEnvelope TailEnvelope::power(double scale, double exponent, std::size_t start, bool exact) {
  TailEnvelope e;
  e.kind = TailKind::power;
  e.scale = scale;
  e.rate = exponent;
  e.start = start;
  e.exact = exact;
  return e;
}

TailEnvelope TailEnvelope::unbounded(std::size_t start) {
  TailEnvelope e;
  e.kind = TailKind::unbounded;
  e.start = start;
  return e;
}

namespace {

// sum_{n >= N} n^-p e^{-nS}, S >= 0, p > 1 unless S > 0
double power_series(double p, std::size_t start, double S) {
  constexpr std::size_t kDirect = 2000;
  long double sum = 0;
  const std::size_t N = start + kDirect;
  for (std::size_t n = start; n < N; ++n)
    sum += std::exp(-p * std::log(static_cast<long double>(n)) - static_cast<long double>(n) * S);
  const double Nd = static_cast<double>(N);
  const double fN = std::exp(-p * std::log(Nd) - Nd * S);
  double rest;
  if (S == 0.0) {
    rest = std::pow(Nd, 1 - p) / (p - 1) + fN / 2 + p * fN / (12 * Nd);
  } else if (p > 1) {
    // integral from N to infinity of x^-p e^{-Sx}, with x = N v^{-1/(p-1)}
    constexpr int kPanels = 2048;
    auto g = [&](double v) {
      if (v <= 0) return 0.0;
      return std::exp(-S * Nd * std::pow(v, -1 / (p - 1)));
    };
    double simpson = g(0) + g(1);
    for (int k = 1; k < kPanels; ++k) simpson += (k % 2 ? 4 : 2) * g(static_cast<double>(k) / kPanels);
    simpson /= 3.0 * kPanels;
    rest = std::pow(Nd, 1 - p) / (p - 1) * simpson + fN / 2 + fN * (p / Nd + S) / 12;
  } else {
    rest = fN / (1 - std::exp(-S));  // crude geometric majorant
  }
  return static_cast<double>(sum) + rest;
}

}  // namespace

bool TailEnvelope::finite(double S) const {
  switch (kind) {
    case TailKind::none: return true;
    case TailKind::unbounded: return false;
    case TailKind::geometric:
      if (rate * std::exp(-S) < 1) return true;
      break;
    case TailKind::power:
      if (S > 0 || (S == 0 && rate > 1)) return true;
      break;
  }
  return S >= 0 && cap_scale < kInf;
}

double TailEnvelope::upper(double S) const {
  if (kind == TailKind::none) return 0.0;
  if (kind == TailKind::unbounded) return kInf;
  if (scale == 0.0) return 0.0;
  double v = kInf;
  if (kind == TailKind::geometric) {
    const double q = rate * std::exp(-S);
    if (q < 1) v = std::exp(std::log(scale) + static_cast<double>(start) * std::log(q) - std::log1p(-q));
  } else if (kind == TailKind::power) {
    if (S > 0 || (S == 0 && rate > 1)) v = scale * power_series(rate, start, S);
  }
  if (!exact && S >= 0 && cap_scale < kInf)
    v = std::min(v, cap_scale * std::exp(-static_cast<double>(start) * S));
  return v;
}

double TailEnvelope::lower(double S) const { return exact ? upper(S) : 0.0; }

// ---------------------------------------------------------------- families

bool BranchFamily::constant_weights() const {
  for (const auto& b : branches)
    if (b.log_hi - b.log_lo > 1e-15 * (1 + std::abs(b.log_lo))) return false;
  return tail.kind == TailKind::none || tail.exact;
}

namespace {

double laps_constant(const IntervalMap& f, std::size_t q, double& h_q) {
  const auto rec = laps_entropy(f, q);
  h_q = std::log(static_cast<double>(rec.laps.back())) / static_cast<double>(q);
  double c = 1.0;
  for (std::size_t r = 1; r < q; ++r)
    c = std::max(c, static_cast<double>(rec.laps[r - 1]) * std::exp(-static_cast<double>(r) * h_q));
  return c;
}

// Envelope for the branches not found up to the truncation time, from the
// escaping mass E_n: mass with tau = n is at most E_{n-1}, and
// |DF|^{-1} <= K |X_i| / |X| on each branch.
TailEnvelope scheme_tail(const InducingScheme& s, double t, double K) {
  const std::size_t T = s.truncation;
  const auto& E = s.escaping_by_time;
  if (E.empty() || E.back() <= 0.0) return TailEnvelope{TailKind::none, 0, 0, T + 1, true, kInf};
  if (t < 0) return TailEnvelope::unbounded(T + 1);
  std::vector<double> xs, ys;
  for (std::size_t n = std::max<std::size_t>(1, T / 2); n <= T && n < E.size(); ++n)
    if (E[n] > 0) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(E[n]));
    }
  if (xs.size() < 3) return TailEnvelope::unbounded(T + 1);
  const double alpha = -fit_line(xs, ys).slope;
  if (!(alpha > 0)) return TailEnvelope::unbounded(T + 1);
  const double frac = E.back() / s.X.length();
  const double Td = static_cast<double>(T);
  double log_scale = t * std::log(K) + t * std::log(frac) + alpha * t * (Td + 1);
  double log_rate = -alpha * t;
  if (t < 1) {
    // Hoelder over at most laps(f^n) <= C e^{n h} branches per level
    double h = 0;
    const double C = laps_constant(s.map, std::min<std::size_t>(std::max<std::size_t>(T, 1), 10), h);
    log_scale += (1 - t) * std::log(C);
    log_rate += (1 - t) * h;
  }
  auto env = TailEnvelope::geometric(std::exp(log_scale), std::exp(log_rate), T + 1, false);
  if (t >= 1) env.cap_scale = std::exp(t * std::log(K) + t * std::log(frac));
  return env;
}

}  // namespace

BranchFamily make_family(std::shared_ptr<const InducingScheme> scheme, double t) {
  if (!scheme) throw DomainError("make_family needs a scheme");
  BranchFamily fam;
  fam.t = t;
  fam.truncation = scheme->truncation;
  for (const auto& b : scheme->branches) {
    if (!(b.inf_deriv > 0) || !std::isfinite(b.sup_deriv))
      throw DegenerateBranchError("branch with degenerate derivative bracket at tau " +
                                  std::to_string(b.tau));
    const double a = -t * std::log(b.sup_deriv), c = -t * std::log(b.inf_deriv);
    fam.branches.push_back({b.tau, std::min(a, c), std::max(a, c)});
  }
  double K = scheme->distortion_bound();
  if (!std::isfinite(K)) K = scheme->measured_distortion();
  fam.distortion = std::max(1.0, K);
  fam.log_B = 2 * std::abs(t) * std::log(fam.distortion);
  fam.tail = scheme_tail(*scheme, t, fam.distortion);
  fam.scheme = std::move(scheme);
  fam.periodic = new_periodic_cache();
  return fam;
}

BranchFamily synthetic_family(const std::vector<std::size_t>& tau,
                              const std::vector<double>& weights, TailEnvelope tail) {
  if (tau.size() != weights.size()) throw DomainError("synthetic family: size mismatch");
  BranchFamily fam;
  fam.t = 1.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < 1 || !(weights[i] > 0)) throw DomainError("synthetic family: bad branch");
    const double lw = std::log(weights[i]);
    fam.branches.push_back({tau[i], lw, lw});
    fam.truncation = std::max(fam.truncation, tau[i]);
  }
  fam.tail = tail;
  return fam;
}

BranchFamily geometric_family(double theta, std::size_t N) {
  if (!(theta > 0 && theta < 1) || N < 1) throw DomainError("geometric family: bad parameters");
  std::vector<std::size_t> tau;
  std::vector<double> w;
  for (std::size_t n = 1; n <= N; ++n) {
    tau.push_back(n);
    w.push_back((1 - theta) * std::pow(theta, static_cast<double>(n - 1)));
  }
  return synthetic_family(tau, w, TailEnvelope::geometric((1 - theta) / theta, theta, N + 1, true));
}

BranchFamily power_family(double p, std::size_t N, bool normalise) {
  if (!(p > 1) || N < 1) throw DomainError("power family: bad parameters");
  const double c = normalise ? 1.0 / power_series(p, 1, 0.0) : 1.0;
  std::vector<std::size_t> tau;
  std::vector<double> w;
  for (std::size_t n = 1; n <= N; ++n) {
    tau.push_back(n);
    w.push_back(c * std::pow(static_cast<double>(n), -p));
  }
  return synthetic_family(tau, w, TailEnvelope::power(c, p, N + 1, true));
}

ThermoModel shifted_model(std::shared_ptr<const BranchFamily> family, double S) {
  ThermoModel m;
  m.S = S;
  m.w_lo.reserve(family->branches.size());
  m.w_hi.reserve(family->branches.size());
  long double lo = 0, hi = 0;
  for (const auto& b : family->branches) {
    const double shift = -static_cast<double>(b.tau) * S;
    m.w_lo.push_back(std::exp(b.log_lo + shift));
    m.w_hi.push_back(std::exp(b.log_hi + shift));
    lo += m.w_lo.back();
    hi += m.w_hi.back();
  }
  m.kept_lo = static_cast<double>(lo);
  m.kept_hi = static_cast<double>(hi);
  m.tail_hi = family->tail.upper(S);
  m.tail_lo = family->tail.lower(S);
  m.family = std::move(family);
  return m;
}

ThermoModel induced_potential(std::shared_ptr<const InducingScheme> scheme, double t, double S) {
  return shifted_model(std::make_shared<const BranchFamily>(make_family(std::move(scheme), t)), S);
}

// ---------------------------------------------------------------- partition functions

namespace {

bool enumerable(const ThermoModel& m, std::size_t alphabet, std::size_t length,
                const PartitionOptions& opt) {
  if (!m.family->scheme || m.family->constant_weights()) return false;
  double count = 1;
  for (std::size_t k = 0; k < length; ++k) {
    count *= static_cast<double>(alphabet);
    if (count > static_cast<double>(opt.word_cap)) return false;
  }
  return true;
}

// log|DF^n| and total inducing time at the periodic point of each word
struct PeriodicTable {
  std::vector<double> log_deriv;
  std::vector<double> tau;
};

PeriodicTable periodic_table(const InducingScheme& s, std::optional<std::size_t> first,
                             const std::vector<std::size_t>& letters, std::size_t len) {
  PeriodicTable tab;
  if (letters.empty() && len > 0) return tab;
  std::vector<std::size_t> digit(len, 0);
  std::vector<std::size_t> seq;
  while (true) {
    seq.clear();
    if (first) seq.push_back(*first);
    for (auto d : digit) seq.push_back(letters[d]);
    std::size_t tau = 0;
    for (auto i : seq) tau += s.branches[i].tau;
    tab.log_deriv.push_back(induced_periodic_point(s, seq).log_deriv);
    tab.tau.push_back(static_cast<double>(tau));
    std::size_t k = 0;
    while (k < len && ++digit[k] == letters.size()) digit[k++] = 0;
    if (k == len) break;
  }
  return tab;
}

}  // namespace

struct PeriodicCache {
  std::mutex mu;
  // key: first letter (or npos), skipped letter (or npos), free length
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::shared_ptr<const PeriodicTable>> tables;
};

namespace {

std::shared_ptr<PeriodicCache> new_periodic_cache() { return std::make_shared<PeriodicCache>(); }

// sum over words first, rest_1..rest_len of exp(Psi) at their periodic points;
// rest letters run over all branches except `skip`
double enumerate_sum(const ThermoModel& m, std::optional<std::size_t> first,
                     std::optional<std::size_t> skip, std::size_t len) {
  const auto& s = *m.family->scheme;
  std::vector<std::size_t> letters;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!skip || i != *skip) letters.push_back(i);
  std::shared_ptr<const PeriodicTable> tab;
  if (auto* cache = m.family->periodic.get()) {
    constexpr auto none = static_cast<std::size_t>(-1);
    const auto key = std::make_tuple(first.value_or(none), skip.value_or(none), len);
    std::lock_guard lock(cache->mu);
    auto& slot = cache->tables[key];
    if (!slot) slot = std::make_shared<const PeriodicTable>(periodic_table(s, first, letters, len));
    tab = slot;
  } else {
    tab = std::make_shared<const PeriodicTable>(periodic_table(s, first, letters, len));
  }
  long double total = 0;
  for (std::size_t k = 0; k < tab->tau.size(); ++k)
    total += std::exp(-m.t() * tab->log_deriv[k] - tab->tau[k] * m.S);
  return static_cast<double>(total);
}


double ipow(double x, std::size_t n) { return std::pow(x, static_cast<double>(n)); }

}  // namespace

Bracket partition_function(const ThermoModel& m, std::size_t n, std::size_t base,
                           PartitionOptions opt) {
  if (n < 1) throw DomainError("partition function needs n >= 1");
  if (base >= m.size()) return {0.0, 0.0};
  if (enumerable(m, m.size(), n - 1, opt)) {
    const double v = enumerate_sum(m, base, std::nullopt, n - 1);
    Bracket z{v, v};
    z.hi += m.w_hi[base] * (ipow(m.sum_hi(), n - 1) - ipow(m.kept_hi, n - 1));
    z.lo += m.w_lo[base] * (ipow(m.sum_lo(), n - 1) - ipow(m.kept_lo, n - 1));
    return z;
  }
  return {m.w_lo[base] * ipow(m.sum_lo(), n - 1), m.w_hi[base] * ipow(m.sum_hi(), n - 1)};
}

Bracket partition_function_total(const ThermoModel& m, std::size_t n, PartitionOptions opt) {
  if (n < 1) throw DomainError("partition function needs n >= 1");
  if (enumerable(m, m.size(), n, opt)) {
    const double v = enumerate_sum(m, std::nullopt, std::nullopt, n);
    return {v + ipow(m.sum_lo(), n) - ipow(m.kept_lo, n), v + ipow(m.sum_hi(), n) - ipow(m.kept_hi, n)};
  }
  return {ipow(m.sum_lo(), n), ipow(m.sum_hi(), n)};
}

Bracket partition_function_star(const ThermoModel& m, std::size_t n, std::size_t base,
                                PartitionOptions opt) {
  if (n < 1) throw DomainError("partition function needs n >= 1");
  if (base >= m.size()) return {0.0, 0.0};
  long double others_lo = 0, others_hi = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (i != base) {
      others_lo += m.w_lo[i];
      others_hi += m.w_hi[i];
    }
  const double lo_all = static_cast<double>(others_lo) + m.tail_lo;
  const double hi_all = static_cast<double>(others_hi) + m.tail_hi;
  if (m.size() > 1 && enumerable(m, m.size() - 1, n - 1, opt)) {
    const double v = enumerate_sum(m, base, base, n - 1);
    return {v + m.w_lo[base] * (ipow(lo_all, n - 1) - ipow(static_cast<double>(others_lo), n - 1)),
            v + m.w_hi[base] * (ipow(hi_all, n - 1) - ipow(static_cast<double>(others_hi), n - 1))};
  }
  return {m.w_lo[base] * ipow(lo_all, n - 1), m.w_hi[base] * ipow(hi_all, n - 1)};
}

// ---------------------------------------------------------------- pressure

PressureBracket gurevich_pressure(const ThermoModel& m, std::size_t n_max,
                                  std::optional<std::size_t> base, PartitionOptions opt) {
  if (n_max < 1) throw DomainError("gurevich_pressure needs n_max >= 1");
  PressureBracket P;
  P.tail_bound = m.tail_hi;
  P.lower = m.sum_lo() > 0 ? std::log(m.sum_lo()) : -kInf;
  if (m.divergent()) {
    P.upper = kInf;
    P.infinite = true;
    return P;
  }
  P.upper = m.sum_hi() > 0 ? std::log(m.sum_hi()) : -kInf;
  if (P.upper - P.lower <= 1e-13 || !m.family->scheme || m.size() == 0) return P;
  if (base && *base >= m.size()) throw DomainError("base branch out of range");

  PressureBracket best = P;
  const double logB = m.log_B();
  for (std::size_t n = 2; n <= n_max; ++n) {
    double lo, hi;
    if (base) {
      if (!enumerable(m, m.size(), n - 1, opt)) break;
      const Bracket z = partition_function(m, n, *base, opt);
      const double k = static_cast<double>(n - 1);
      lo = (std::log(z.lo) - std::log(m.w_hi[*base]) - logB) / k;
      hi = (std::log(z.hi) - std::log(m.w_lo[*base]) + logB) / k;
    } else {
      if (!enumerable(m, m.size(), n, opt)) break;
      const Bracket z = partition_function_total(m, n, opt);
      const double k = static_cast<double>(n);
      lo = (std::log(z.lo) - logB) / k;
      hi = (std::log(z.hi) + logB) / k;
    }
    bool used = false;
    if (lo > best.lower) {
      best.lower = lo;
      used = true;
    }
    if (hi < best.upper) {
      best.upper = hi;
      used = true;
    }
    if (used) best.n_used = n;
  }
  // sampled derivative brackets can make the bounds cross; keep the safe one
  if (best.lower > best.upper + 1e-12) return P;
  return best;
}

ShiftScan pressure_vs_shift(std::shared_ptr<const BranchFamily> family,
                            const std::vector<double>& S_grid, std::size_t n_max) {
  ShiftScan out;
  for (std::size_t k = 0; k < S_grid.size(); ++k) {
    if (k > 0 && !(S_grid[k] > S_grid[k - 1])) throw DomainError("S grid must be ascending");
    out.rows.push_back({S_grid[k], gurevich_pressure(shifted_model(family, S_grid[k]), n_max)});
  }
  for (std::size_t k = 1; k < out.rows.size(); ++k) {
    const auto& a = out.rows[k - 1].P;
    const auto& b = out.rows[k].P;
    if (a.infinite || b.infinite) continue;
    if (b.mid() > a.mid() + 0.5 * (a.width() + b.width()) + 1e-12) out.monotone = false;
  }
  return out;
}

// ---------------------------------------------------------------- discriminant

namespace {

std::vector<double> level_weights(const BranchFamily& fam) {
  std::vector<double> w(fam.truncation, 0.0);
  for (const auto& b : fam.branches)
    if (b.tau >= 1 && b.tau <= w.size()) w[b.tau - 1] += std::exp(0.5 * (b.log_lo + b.log_hi));
  return w;
}

}  // namespace

Discriminant p_star_discriminant(std::shared_ptr<const BranchFamily> family,
                                 const std::vector<double>& probe) {
  Discriminant d;
  const auto& tail = family->tail;
  if (tail.kind == TailKind::none) {
    d.p_star_flag = Flag::minus_inf;
    d.p_star = -kInf;
    d.discriminant_flag = Flag::plus_inf;
    d.discriminant = kInf;
    return d;
  }
  // finiteness of the weight sum at S, from the tail model
  TailKind model = TailKind::unbounded;
  double rate = 0.0;
  if (tail.exact && (tail.kind == TailKind::geometric || tail.kind == TailKind::power)) {
    model = tail.kind;
    rate = tail.rate;
  } else {
    const auto fit = tail_classify(level_weights(*family));
    if (fit.kind == DecayKind::exponential && !fit.finite_support) {
      model = TailKind::geometric;
      rate = std::exp(-fit.rate);
    } else if (fit.kind == DecayKind::polynomial) {
      model = TailKind::power;
      rate = fit.rate;
    }
  }
  d.tail_model = model;
  if (model == TailKind::unbounded) {
    d.p_star_flag = d.discriminant_flag = Flag::inconclusive;
    d.p_star = d.discriminant = std::nan("");
    return d;
  }
  auto finite = [&](double S) {
    if (model == TailKind::geometric) return rate * std::exp(-S) < 1;
    return S > 0 || (S == 0 && rate > 1);
  };
  std::size_t k = 0;
  while (k < probe.size() && !finite(probe[k])) ++k;
  if (k == 0 || k == probe.size()) {
    d.p_star_flag = d.discriminant_flag = Flag::inconclusive;
    d.p_star = d.discriminant = std::nan("");
    return d;
  }
  double a = probe[k - 1], b = probe[k];
  while (b - a > 1e-13 * (1 + std::abs(b))) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    (finite(mid) ? b : a) = mid;
  }
  d.p_star = finite(a) ? a : b;
  if (model == TailKind::power) {
    d.p_star = 0.0;  // the only boundary a power law can have
    const auto P = gurevich_pressure(shifted_model(family, 0.0), 1);
    if (P.infinite) {
      d.discriminant_flag = Flag::inconclusive;
      d.discriminant = std::nan("");
    } else {
      d.discriminant = P.mid();
    }
  } else {
    d.discriminant_flag = Flag::plus_inf;
    d.discriminant = kInf;
  }
  return d;
}

// ---------------------------------------------------------------- recurrence

namespace {

// geometric ratio of the last half of a positive sequence; 0 once it has died out
double trend_ratio(const std::vector<double>& a) {
  if (a.empty() || a.back() <= 0) return 0.0;
  const std::size_t j = a.size() / 2;
  if (j + 1 >= a.size() || a[j] <= 0) return 1.0;
  return std::pow(a.back() / a[j], 1.0 / static_cast<double>(a.size() - 1 - j));
}

}  // namespace

RecurrenceReport recurrence_check(const ThermoModel& m, double lambda, std::size_t n_max) {
  if (!(lambda > 0) || n_max < 1) throw DomainError("recurrence_check needs lambda > 0, n_max >= 1");
  RecurrenceReport r;
  std::vector<double> a, b;
  double s1 = 0, s2 = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double scale = std::pow(lambda, -static_cast<double>(n));
    a.push_back(scale * partition_function_total(m, n).mid());
    b.push_back(static_cast<double>(n) * scale * partition_function_star(m, n, 0).mid());
    s1 += a.back();
    s2 += b.back();
    r.partial_sums.push_back(s1);
    r.star_partial_sums.push_back(s2);
  }
  constexpr double kSlack = 1e-6;
  r.recurrent = trend_ratio(a) >= 1 - kSlack;
  r.positive_recurrent = r.recurrent && trend_ratio(b) < 1 - kSlack;
  return r;
}

// ---------------------------------------------------------------- tails of the masses

TailFit tail_classify(const std::vector<double>& masses) {
  TailFit out;
  std::size_t last = masses.size();
  for (std::size_t k = 0; k < masses.size(); ++k)
    if (masses[k] > 0) last = k;
  if (last == masses.size()) return out;
  if (last + 1 < masses.size()) {
    // nothing beyond some time: finite support
    out.kind = DecayKind::exponential;
    out.rate = kInf;
    out.r2 = 1.0;
    out.finite_support = true;
    for (auto v : masses) out.points += v > 0;
    return out;
  }
  std::vector<double> n, logn, logm;
  for (std::size_t k = 0; k < masses.size(); ++k)
    if (masses[k] > 0) {
      n.push_back(static_cast<double>(k + 1));
      logn.push_back(std::log(static_cast<double>(k + 1)));
      logm.push_back(std::log(masses[k]));
    }
  out.points = n.size();
  if (n.size() < 8) return out;
  if (n.size() >= 16) {  // drop the transient first quarter
    const auto skip = static_cast<std::ptrdiff_t>(n.size() / 4);
    n.erase(n.begin(), n.begin() + skip);
    logn.erase(logn.begin(), logn.begin() + skip);
    logm.erase(logm.begin(), logm.begin() + skip);
  }
  const auto e = fit_line(n, logm);
  const auto p = fit_line(logn, logm);
  const bool expo = e.r2 >= p.r2;
  out.r2 = expo ? e.r2 : p.r2;
  out.rate = expo ? -e.slope : -p.slope;
  if (out.r2 >= 0.95) out.kind = expo ? DecayKind::exponential : DecayKind::polynomial;
  return out;
}

// ---------------------------------------------------------------- CSV

void write_shift_csv(std::ostream& out, const ShiftScan& scan) {
  out << "S,P_lower,P_upper\n";
  for (const auto& r : scan.rows) out << fmt(r.S) << ',' << fmt(r.P.lower) << ',' << fmt(r.P.upper) << '\n';
}

void write_partition_csv(std::ostream& out, const std::vector<Bracket>& z) {
  out << "n,Z_lower,Z_upper\n";
  for (std::size_t k = 0; k < z.size(); ++k) out << k + 1 << ',' << fmt(z[k].lo) << ',' << fmt(z[k].hi) << '\n';
}

void write_mass_csv(std::ostream& out, const std::vector<double>& masses) {
  out << "n,mass\n";
  for (std::size_t k = 0; k < masses.size(); ++k) out << k + 1 << ',' << fmt(masses[k]) << '\n';
}

}  // namespace itf

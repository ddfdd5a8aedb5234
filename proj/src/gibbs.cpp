#include "itf/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"

#include "itf/errors.hpp"
#include "itf/format.hpp"
#include "itf/symbolic.hpp"

namespace itf {

double GibbsSolution::log_lambda() const { return std::log(lambda); }

double GibbsSolution::next(std::size_t i, std::size_t j) const {
  return rank_one ? mass[j] : transition[i * N + j];
}

double GibbsSolution::cylinder_mass(std::span<const std::size_t> word) const {
  if (word.empty()) return 1.0;
  double m = mass.at(word[0]);
  for (std::size_t k = 1; k < word.size(); ++k) m *= next(word[k - 1], word[k]);
  return m;
}

namespace {

const InducingScheme* scheme_of(const GibbsSolution& sol) { return sol.family->scheme.get(); }

// Perron vector of a positive matrix by power iteration; transpose selects the left one
std::vector<double> perron(const std::vector<double>& A, std::size_t N, bool transpose,
                           const GibbsOptions& opt, double& lambda, double& residual,
                           std::size_t& iterations) {
  std::vector<double> v(N, 1.0 / static_cast<double>(N)), w(N);
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    if (!transpose) {
      for (std::size_t i = 0; i < N; ++i) {
        long double s = 0;
        const double* row = &A[i * N];
        for (std::size_t j = 0; j < N; ++j) s += row[j] * x[j];
        y[i] = static_cast<double>(s);
      }
    } else {
      for (std::size_t i = 0; i < N; ++i) {
        const double* row = &A[i * N];
        for (std::size_t j = 0; j < N; ++j) y[j] += row[j] * x[i];
      }
    }
  };
  for (iterations = 1; iterations <= opt.max_iterations; ++iterations) {
    apply(v, w);
    long double total = 0;
    for (double x : w) total += x;
    lambda = static_cast<double>(total);  // v sums to one
    long double diff = 0;
    for (std::size_t i = 0; i < N; ++i) {
      w[i] /= lambda;
      diff += std::abs(w[i] - v[i]);
    }
    v.swap(w);
    if (diff <= 1e-15) break;
  }
  apply(v, w);
  long double r = 0;
  for (std::size_t i = 0; i < N; ++i) r += std::abs(w[i] - lambda * v[i]);
  residual = static_cast<double>(r) / lambda;
  return v;
}

}  // namespace

GibbsSolution solve_gibbs(const ThermoModel& m, std::optional<std::size_t> N_opt,
                          GibbsOptions opt) {
  if (m.divergent()) throw InfinitePressureError("weight sum not finite at S = " + fmt(m.S));
  const std::size_t N = std::min(N_opt.value_or(m.size()), m.size());
  if (N == 0) throw InfinitePressureError("no branches kept");
  GibbsSolution sol;
  sol.family = m.family;
  sol.t = m.t();
  sol.S = m.S;
  sol.N = N;
  sol.lambda_bracket = {m.sum_lo(), m.sum_hi()};
  const auto* s = m.family->scheme.get();
  const auto& fb = m.family->branches;

  sol.rank_one = !s || m.family->constant_weights() || N > opt.refine_cap;
  if (sol.rank_one) {
    std::vector<double> w(N);
    long double total = 0;
    for (std::size_t i = 0; i < N; ++i) {
      w[i] = std::sqrt(m.w_lo[i]) * std::sqrt(m.w_hi[i]);
      total += w[i];
    }
    sol.lambda = static_cast<double>(total);
    for (std::size_t i = 0; i < N; ++i) {
      sol.mass.push_back(w[i] / sol.lambda);
      sol.conformal.push_back(w[i] / sol.lambda);
      sol.density.push_back(1.0);
      double ld;
      if (s)
        ld = 0.5 * (std::log(s->branches[i].inf_deriv) + std::log(s->branches[i].sup_deriv));
      else
        ld = sol.t != 0 ? -0.5 * (fb[i].log_lo + fb[i].log_hi) / sol.t : 0.0;
      sol.log_deriv.push_back(ld);
    }
  } else {
    // two-symbol weights at the pullback of the middle of X_j through branch i
    std::vector<double> A(N * N), LD(N * N);
    for (std::size_t i = 0; i < N; ++i) {
      const auto& b = s->branches[i];
      for (std::size_t j = 0; j < N; ++j) {
        const double ld = pull_back_log_derivative(s->map, b.word.span(), s->branches[j].domain.mid());
        LD[i * N + j] = ld;
        A[i * N + j] = std::exp(-sol.t * ld - static_cast<double>(b.tau) * m.S);
      }
    }
    double lam_r = 0, lam_l = 0, res_r = 0, res_l = 0;
    std::size_t it_r = 0, it_l = 0;
    auto r = perron(A, N, false, opt, lam_r, res_r, it_r);
    auto l = perron(A, N, true, opt, lam_l, res_l, it_l);
    sol.lambda = lam_r;
    sol.residual = std::max(res_r, res_l);
    sol.iterations = std::max(it_r, it_l);
    long double dot = 0;
    for (std::size_t i = 0; i < N; ++i) dot += l[i] * r[i];
    sol.conformal = r;
    for (std::size_t i = 0; i < N; ++i) {
      sol.density.push_back(l[i] / static_cast<double>(dot));
      sol.mass.push_back(sol.density[i] * r[i]);
    }
    sol.transition.resize(N * N);
    sol.log_deriv.assign(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      long double rowsum = 0, ld = 0;
      for (std::size_t j = 0; j < N; ++j) {
        const double p = A[i * N + j] * r[j] / (sol.lambda * r[i]);
        sol.transition[i * N + j] = p;
        rowsum += p;
        ld += p * LD[i * N + j];
      }
      sol.log_deriv[i] = static_cast<double>(ld / rowsum);
    }
  }
  // keep exact normalisation after rounding
  long double total = 0;
  for (double x : sol.mass) total += x;
  for (double& x : sol.mass) x = static_cast<double>(x / total);
  double dropped = m.tail_hi;
  for (std::size_t i = N; i < m.size(); ++i) dropped += m.w_hi[i];
  sol.dropped_weight = dropped / sol.lambda;
  return sol;
}

// ---------------------------------------------------------------- Gibbs ratio

RatioCheck gibbs_ratio_check(const GibbsSolution& sol, std::size_t depth, std::uint64_t seed) {
  if (depth < 1 || depth > 8) throw DomainError("gibbs_ratio_check depth must be in 1..8");
  constexpr double kEnumerateCap = 1e5;
  constexpr std::size_t kSamples = 2000;
  const auto* s = scheme_of(sol);
  const auto& fb = sol.family->branches;
  const double logP = sol.log_lambda();
  RatioCheck out;
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> first(sol.mass.begin(), sol.mass.end());

  auto check = [&](const std::vector<std::size_t>& w) {
    const double mu = sol.cylinder_mass(w);
    if (!(mu > 0)) return;
    std::vector<double> psi;
    if (!s) {
      double v = 0;
      for (auto i : w) v += 0.5 * (fb[i].log_lo + fb[i].log_hi) - static_cast<double>(fb[i].tau) * sol.S;
      psi.push_back(v);
    } else {
      std::size_t tau = 0;
      for (auto i : w) tau += s->branches[i].tau;
      for (double u : {0.02, 0.5, 0.98}) {
        const auto p = induced_pull_back(*s, w, s->X.lo + u * s->X.length());
        psi.push_back(-sol.t * p.log_deriv - static_cast<double>(tau) * sol.S);
      }
    }
    for (double v : psi) {
      const double r = std::log(mu) - (v - static_cast<double>(w.size()) * logP);
      out.K = std::max(out.K, std::exp(std::abs(r)));
    }
    ++out.cylinders;
  };

  for (std::size_t n = 1; n <= depth; ++n) {
    const double count = std::pow(static_cast<double>(sol.N), static_cast<double>(n));
    std::vector<std::size_t> w(n, 0);
    if (count <= kEnumerateCap) {
      while (true) {
        check(w);
        std::size_t k = 0;
        while (k < n && ++w[k] == sol.N) w[k++] = 0;
        if (k == n) break;
      }
    } else {
      out.sampled = true;
      for (std::size_t r = 0; r < kSamples; ++r) {
        w[0] = first(rng);
        for (std::size_t k = 1; k < n; ++k) {
          if (sol.rank_one) {
            w[k] = first(rng);
          } else {
            const double* row = &sol.transition[w[k - 1] * sol.N];
            std::discrete_distribution<std::size_t> d(row, row + sol.N);
            w[k] = d(rng);
          }
        }
        check(w);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- projection

bool tau_integrable(const BranchFamily& fam, double S) {
  const auto& e = fam.tail;
  switch (e.kind) {
    case TailKind::none: return true;
    case TailKind::unbounded: return false;
    case TailKind::geometric: return e.rate * std::exp(-S) < 1;
    case TailKind::power: return S > 0 || e.rate > 2;
  }
  return false;
}

namespace {

struct Projector {
  const GibbsSolution& sol;
  const InducingScheme& s;
  std::size_t depth;

  // kept branches meeting E, by position
  std::pair<std::size_t, std::size_t> range(const Interval& E) const {
    const auto& br = s.branches;
    std::size_t a = 0;
    while (a < sol.N && br[a].domain.hi <= E.lo) ++a;
    std::size_t b = a;
    while (b < sol.N && br[b].domain.lo < E.hi) ++b;
    return {a, b};
  }

  // mu_F of a subinterval Q of X_i
  Bracket inside(std::size_t i, const Interval& Q, std::size_t d) const {
    const auto& X_i = s.branches[i].domain;
    const double mi = sol.mass[i];
    if (Q.length() <= 0) return {0, 0};
    if (Q.lo <= X_i.lo + 1e-15 && Q.hi >= X_i.hi - 1e-15) return {mi, mi};
    if (d == 0) return {0, mi};
    const auto& w = s.branches[i].word;
    const double a = apply_letters(s.map, w.span(), Q.lo), b = apply_letters(s.map, w.span(), Q.hi);
    const Interval E{std::min(a, b), std::max(a, b)};
    Bracket out{0, 0};
    const auto [j0, j1] = range(E);
    for (std::size_t j = j0; j < j1; ++j) {
      const auto& X_j = s.branches[j].domain;
      const double p = mi * sol.next(i, j);
      if (E.lo <= X_j.lo && E.hi >= X_j.hi) {
        out.lo += p;
        out.hi += p;
      } else {
        const Interval part{std::max(E.lo, X_j.lo), std::min(E.hi, X_j.hi)};
        const Bracket sub = inside(j, part, d - 1);
        out.lo += p * sub.lo / sol.mass[j];
        out.hi += p * sub.hi / sol.mass[j];
      }
    }
    return out;
  }

  Bracket measure(const Interval& A) const {
    Bracket total{0, 0};
    for (std::size_t i = 0; i < sol.N; ++i) {
      const auto& b = s.branches[i];
      const auto letters = b.word.span();
      Interval J = b.domain;
      for (std::size_t k = 0; k < b.tau; ++k) {
        if (k > 0) {
          const double u = apply_letters(s.map, letters.subspan(k - 1, 1), J.lo);
          const double v = apply_letters(s.map, letters.subspan(k - 1, 1), J.hi);
          J = {std::min(u, v), std::max(u, v)};
        }
        const double lo = std::max(A.lo, J.lo), hi = std::min(A.hi, J.hi);
        if (hi <= lo) continue;
        if (lo <= J.lo && hi >= J.hi) {
          total.lo += sol.mass[i];
          total.hi += sol.mass[i];
          continue;
        }
        Interval Q = pull_back(s.map, letters.first(k), Interval{lo, hi});
        Q = {std::max(Q.lo, b.domain.lo), std::min(Q.hi, b.domain.hi)};
        const Bracket m = inside(i, Q, depth);
        total.lo += m.lo;
        total.hi += m.hi;
      }
    }
    return total;
  }
};

}  // namespace

std::vector<Bracket> project_measure(const GibbsSolution& sol, const std::vector<Interval>& targets,
                                     std::size_t depth) {
  const auto* s = scheme_of(sol);
  if (!s) throw NotApplicableError("projection needs an interval scheme");
  if (!tau_integrable(*sol.family, sol.S))
    throw NonCompatibleError("inducing time not integrable for the equilibrium measure");
  double tau_mean = 0;
  for (std::size_t i = 0; i < sol.N; ++i)
    tau_mean += static_cast<double>(s->branches[i].tau) * sol.mass[i];
  Projector p{sol, *s, depth};
  std::vector<Bracket> out;
  for (const auto& A : targets) {
    Bracket b = p.measure(A);
    b.lo = std::clamp(b.lo / tau_mean, 0.0, 1.0);
    b.hi = std::clamp(b.hi / tau_mean, 0.0, 1.0);
    out.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------- Abramov

Abramov abramov_quantities(const GibbsSolution& sol) {
  if (!tau_integrable(*sol.family, sol.S))
    throw NonCompatibleError("inducing time not integrable for the equilibrium measure");
  const auto* s = scheme_of(sol);
  const auto& fb = sol.family->branches;
  Abramov a;
  for (std::size_t i = 0; i < sol.N; ++i) {
    const double mu = sol.mass[i];
    a.tau_mean += static_cast<double>(fb[i].tau) * mu;
    a.lyap_F += mu * sol.log_deriv[i];
    if (s) {
      a.lyap_F_bracket.lo += mu * std::log(s->branches[i].inf_deriv);
      a.lyap_F_bracket.hi += mu * std::log(s->branches[i].sup_deriv);
    } else {
      a.lyap_F_bracket.lo += mu * sol.log_deriv[i];
      a.lyap_F_bracket.hi += mu * sol.log_deriv[i];
    }
  }
  a.h_F = sol.log_lambda() + sol.t * a.lyap_F + sol.S * a.tau_mean;
  a.h = a.h_F / a.tau_mean;
  a.lyap = a.lyap_F / a.tau_mean;
  a.free_energy = a.h - sol.t * a.lyap;
  return a;
}

double zero_entropy_bound(const IntervalMap& f, double t, std::size_t max_period) {
  double best = -kInf;
  std::vector<Cylinder> cyl;
  for (std::size_t p = 1; p <= max_period; ++p) {
    cyl = p == 1 ? branch_cylinders(f) : refine_step(f, cyl, kDefaultCylinderCap);
    for (const auto& c : cyl) {
      if (!c.image.contains(c.interval, kIdentifyTol)) continue;
      const auto x = fixed_point_in(f, c.word.span(), c.interval);
      if (!x) continue;
      const double ld = log_derivative_letters(f, c.word.span(), *x);
      if (!std::isfinite(ld)) continue;
      best = std::max(best, -t * ld / static_cast<double>(p));
    }
  }
  return best;
}

// ---------------------------------------------------------------- shift solve

EquilibriumResult equilibrium_shift_solve(std::shared_ptr<const BranchFamily> family, double tol,
                                          ShiftSolveOptions opt) {
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  auto P = [&](double S) { return gurevich_pressure(shifted_model(family, S), opt.n_max); };
  EquilibriumResult res;

  // S_hi: upper bracket negative; S_lo: lower bracket positive
  double S_hi = 1.0;
  bool any_finite = false;
  while (true) {
    const auto p = P(S_hi);
    any_finite = any_finite || !p.infinite;
    if (p.upper < 0) break;
    if (S_hi >= opt.S_limit) {
      if (!any_finite) throw InfinitePressureError("pressure not finite on the probed shifts");
      res.side = ShiftSide::above;
      break;
    }
    S_hi *= 2;
  }
  double S_lo = -1.0;
  while (res.side == ShiftSide::solved) {
    if (P(S_lo).lower > 0) break;
    if (S_lo <= -opt.S_limit) {
      res.side = ShiftSide::below;
      break;
    }
    S_lo *= 2;
  }
  if (res.side == ShiftSide::above) {
    res.S_star = {S_hi, kInf};
    return res;
  }
  if (res.side == ShiftSide::below) {
    res.S_star = {-kInf, S_lo};
    return res;
  }
  const double eps = tol / 100;
  // sup{S : lower > 0}
  double a = S_lo, b = S_hi;
  while (b - a > eps) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (P(m).lower > 0 ? a : b) = m;
  }
  const double lo = a;
  // inf{S : upper < 0}
  a = S_lo;
  b = S_hi;
  while (b - a > eps) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (P(m).upper < 0 ? b : a) = m;
  }
  res.S_star = {lo, std::max(lo, b)};
  double mid = res.S_star.mid();
  // a root on the edge of convergence: take the finite end
  if (shifted_model(family, mid).divergent()) mid = res.S_star.hi;
  res.at_mid = P(mid);
  res.solution = solve_gibbs(shifted_model(family, mid));
  if (family->scheme) res.zero_entropy = zero_entropy_bound(family->scheme->map, family->t, opt.zero_entropy_period);
  return res;
}

// ---------------------------------------------------------------- output

void write_gibbs_json(std::ostream& out, const GibbsSolution& sol) {
  nlohmann::ordered_json j;
  j["t"] = round9(sol.t);
  j["S"] = round9(sol.S);
  j["N"] = sol.N;
  j["lambda"] = round9(sol.lambda);
  j["lambda_bracket"] = {round9(sol.lambda_bracket.lo), round9(sol.lambda_bracket.hi)};
  j["rank_one"] = sol.rank_one;
  j["residual"] = round9(sol.residual);
  j["dropped_weight"] = round9(sol.dropped_weight);
  auto arr = [](const std::vector<double>& v) {
    auto a = nlohmann::ordered_json::array();
    for (double x : v) a.push_back(round9(x));
    return a;
  };
  j["mass"] = arr(sol.mass);
  j["conformal"] = arr(sol.conformal);
  j["density"] = arr(sol.density);
  if (const auto* s = scheme_of(sol)) {
    auto taus = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < sol.N; ++i) taus.push_back(s->branches[i].tau);
    j["tau"] = taus;
  }
  out << j.dump(2) << '\n';
}

void write_cylinder_mass_csv(std::ostream& out, const GibbsSolution& sol, std::size_t depth,
                             std::size_t cap) {
  out << "word,mass\n";
  std::size_t written = 0;
  for (std::size_t n = 1; n <= depth && written < cap; ++n) {
    std::vector<std::size_t> w(n, 0);
    while (written < cap) {
      std::string label;
      for (std::size_t k = 0; k < n; ++k) label += (k ? "." : "") + std::to_string(w[k]);
      out << label << ',' << fmt(sol.cylinder_mass(w)) << '\n';
      ++written;
      std::size_t k = n;
      while (k > 0 && ++w[k - 1] == sol.N) w[--k] = 0;
      if (k == 0) break;
    }
  }
}

}  // namespace itf

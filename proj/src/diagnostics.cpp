#include "itf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "itf/errors.hpp"
#include "itf/format.hpp"
#include "itf/symbolic.hpp"
#include "itf/thermo.hpp"

namespace itf {

std::string_view to_string(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::collet_eckmann: return "collet-eckmann";
    case GrowthVerdict::polynomial: return "polynomial";
    case GrowthVerdict::neither: return "neither";
  }
  return "?";
}

// ---------------------------------------------------------------- critical growth

CriticalGrowth classify_growth(std::vector<double> log_deriv, double order, double t0,
                               double l_max) {
  CriticalGrowth g;
  g.order = order;
  g.log_deriv = std::move(log_deriv);
  if (g.log_deriv.size() < 3) return g;
  std::vector<double> n, logn;
  for (std::size_t k = 0; k < g.log_deriv.size(); ++k) {
    n.push_back(static_cast<double>(k + 1));
    logn.push_back(std::log(static_cast<double>(k + 1)));
  }
  const auto e = fit_line(n, g.log_deriv);
  const auto p = fit_line(logn, g.log_deriv);
  if (e.r2 >= 0.9) g.exponential = e;
  if (p.r2 >= 0.9) g.polynomial = p;
  g.alpha = e.slope;
  g.beta = p.slope;
  g.beta_above_threshold = g.beta > l_max * (1 + 1 / t0) - 1;
  if (e.slope > 0 && e.r2 >= 0.99)
    g.verdict = GrowthVerdict::collet_eckmann;
  else if (g.polynomial && p.slope > 0)
    g.verdict = GrowthVerdict::polynomial;
  return g;
}

namespace {

// log|Df^n(x)| for n = 1..n_max; stops before a flat critical point
std::vector<double> log_growth(const IntervalMap& f, double x, std::size_t n_max, std::size_t& hit) {
  const auto orbit = eval_orbit(f, x, n_max);
  std::vector<double> out;
  long double acc = 0;
  hit = 0;
  for (std::size_t k = 0; k < n_max; ++k) {
    if (f.at_flat_critical(orbit[k])) {
      hit = k + 1;
      break;
    }
    acc += std::log(std::abs(f.derivative(orbit[k])));
    out.push_back(static_cast<double>(acc));
  }
  return out;
}

}  // namespace

GrowthRecord critical_orbit_growth(const IntervalMap& f, std::size_t n_max, double t0) {
  if (n_max < 20) throw DomainError("critical_orbit_growth needs n_max >= 20");
  if (!(t0 > 0 && t0 < 1)) throw DomainError("t0 must lie in (0,1)");
  GrowthRecord r;
  r.t0 = t0;
  const double l_max = f.max_order();
  r.beta_threshold = l_max * (1 + 1 / t0) - 1;
  bool all_ce = !f.crit().empty(), any_poly = false;
  for (const auto& c : f.crit()) {
    std::size_t hit = 0;
    auto ld = log_growth(f, c.image, n_max, hit);
    auto g = classify_growth(std::move(ld), c.order, t0, l_max);
    g.c = c.c;
    g.truncated = hit > 0;
    g.hit_time = hit;
    if (g.truncated) g.verdict = GrowthVerdict::neither;
    all_ce = all_ce && g.verdict == GrowthVerdict::collet_eckmann;
    any_poly = any_poly || g.verdict != GrowthVerdict::neither;
    r.points.push_back(std::move(g));
  }
  if (all_ce)
    r.verdict = GrowthVerdict::collet_eckmann;
  else if (any_poly && std::all_of(r.points.begin(), r.points.end(),
                                   [](const auto& g) { return g.verdict != GrowthVerdict::neither; }))
    r.verdict = GrowthVerdict::polynomial;
  return r;
}

// ---------------------------------------------------------------- binding periods

double gamma_n(std::size_t n, double delta_X) {
  const double l = std::log(static_cast<double>(n) + 10);
  return delta_X / (static_cast<double>(n) * l * l);
}

BindingRecord binding_series(const std::vector<double>& log_deriv, double order, double delta_X,
                             double t0, std::size_t p_U, double zeta) {
  BindingRecord b;
  b.order = order;
  b.p_U = p_U;
  const std::size_t n_max = log_deriv.size();
  double s = 0;
  std::vector<double> a(n_max + 1, 0.0);
  double last = 0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double g = gamma_n(n, delta_X);
    b.gamma.push_back(g);
    const double core = (order - 1) * std::log(g) + log_deriv[n - 1];
    last = std::exp(-t0 / order * core);
    s += last;
    b.summable.push_back(s);
    if (n >= std::max<std::size_t>(p_U, 1)) a[n] = zeta * std::exp(-core / order);
  }
  b.converged = n_max > 0 && last < 1e-8;
  // sum over strings (p_1..p_s) with total m, by c_m = sum_p a_p c_{m-p}
  std::vector<double> c(n_max + 1, 0.0);
  c[0] = 1;
  double total = 0;
  for (std::size_t m = 1; m <= n_max; ++m) {
    for (std::size_t p = 1; p <= m; ++p) c[m] += a[p] * c[m - p];
    total += c[m];
    b.bound_sums.push_back(total);
  }
  b.bound_below_one = total <= 1;
  return b;
}

namespace {

// x on the given side of c with |f(x) - f(c)| = eps, or the end of the branch
double ball_edge(const IntervalMap& f, double c, double eps, Side side) {
  const auto& br = f.branch(f.branch_at(c, side));
  const double fc = br(c);
  double far = side == Side::left ? br.interval.lo : br.interval.hi;
  if (std::abs(br(far) - fc) < eps) return far;
  double near = c;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (near + far);
    if (m == near || m == far) break;
    (std::abs(br(m) - fc) < eps ? near : far) = m;
  }
  return 0.5 * (near + far);
}

double crit_distance(const IntervalMap& f, double y) {
  double d = kInf;
  for (const auto& c : f.crit()) d = std::min(d, std::abs(y - c.c));
  return d;
}

}  // namespace

Interval critical_neighbourhood(const IntervalMap& f, const CriticalPoint& c, double eps) {
  if (!(eps > 0)) throw DomainError("critical neighbourhood needs eps > 0");
  return {ball_edge(f, c.c, eps, Side::left), ball_edge(f, c.c, eps, Side::right)};
}

std::vector<BindingRecord> binding_analysis(const IntervalMap& f, double eps, double delta_X,
                                            std::size_t n_max, double t0, BindingOptions opt) {
  if (!(eps > 0) || !(delta_X > 0) || n_max < 1) throw DomainError("binding_analysis: bad parameters");
  std::vector<BindingRecord> out;
  for (const auto& c : f.crit()) {
    if (!c.flat()) continue;
    std::size_t hit = 0;
    const auto ld = log_growth(f, c.image, n_max, hit);
    const Interval U = critical_neighbourhood(f, c, eps);
    const auto corbit = eval_orbit(f, c.c, n_max);
    std::size_t p_U = n_max + 1;
    std::vector<double> Fp(n_max, std::nan(""));
    for (std::size_t g = 0; g < opt.grid; ++g) {
      const double x = U.lo + (static_cast<double>(g) + 0.5) / static_cast<double>(opt.grid) * U.length();
      if (x == c.c) continue;
      const auto xorbit = eval_orbit(f, x, n_max);
      std::size_t p = 0;
      for (std::size_t k = 1; k <= n_max; ++k)
        if (std::abs(xorbit[k] - corbit[k]) >= gamma_n(k, delta_X) * crit_distance(f, corbit[k])) {
          p = k;
          break;
        }
      if (p == 0) continue;  // still bound at the horizon
      p_U = std::min(p_U, p);
      try {
        const double d = std::exp(log_derivative_along(f, x, p));
        Fp[p - 1] = std::isnan(Fp[p - 1]) ? d : std::min(Fp[p - 1], d);
      } catch (const CriticalOrbitError&) {
      }
    }
    auto rec = binding_series(ld, c.order, delta_X, t0, p_U, opt.zeta);
    rec.c = c.c;
    rec.U = U;
    rec.F_prime = std::move(Fp);
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------- distortion and variation

KoebeReport koebe_check(const InducingScheme& s) {
  KoebeReport r;
  r.measured = s.measured_distortion();
  r.bound = s.koebe_bound();
  r.ok = r.measured <= r.bound * (1 + 1e-12);
  return r;
}

VariationRecord variation_decay(const InducingScheme& s, double t, std::size_t n_max) {
  if (n_max < 1 || n_max > 8) throw DomainError("variation_decay needs n_max in 1..8");
  VariationRecord r;
  const std::size_t N = s.branches.size();
  if (N == 0) return r;
  double min_inf = kInf, v1 = 0, L1 = 0;
  for (const auto& b : s.branches) {
    min_inf = std::min(min_inf, b.inf_deriv);
    v1 = std::max(v1, std::abs(t) * (std::log(b.sup_deriv) - std::log(b.inf_deriv)));
    L1 = std::max(L1, b.domain.length());
  }
  r.reference_rate = 1 / min_inf;
  r.V.push_back(v1);

  // log|DF_i| as a function of the image point, per branch
  constexpr int kGrid = 33;
  std::vector<double> slope(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const auto w = s.branches[i].word.span();
    double prev = 0;
    for (int k = 0; k < kGrid; ++k) {
      const double y = s.X.lo + s.X.length() * k / (kGrid - 1);
      const double ld = pull_back_log_derivative(s.map, w, y);
      if (k > 0) slope[i] = std::max(slope[i], std::abs(ld - prev) / (s.X.length() / (kGrid - 1)));
      prev = ld;
    }
  }
  double L = L1;  // bound on (n-1)-cylinder length
  for (std::size_t n = 2; n <= n_max; ++n) {
    const double count = std::pow(static_cast<double>(N), static_cast<double>(n));
    double V = 0;
    if (count <= 2e4) {
      std::vector<std::size_t> w(n, 0);
      while (true) {
        double lo = kInf, hi = -kInf;
        for (double y : {s.X.lo, s.X.mid(), s.X.hi}) {
          const auto z = induced_pull_back(s, std::span<const std::size_t>(w).subspan(1), y).x;
          const double ld = pull_back_log_derivative(s.map, s.branches[w[0]].word.span(), z);
          lo = std::min(lo, ld);
          hi = std::max(hi, ld);
        }
        V = std::max(V, std::abs(t) * (hi - lo));
        std::size_t k = 0;
        while (k < n && ++w[k] == N) w[k++] = 0;
        if (k == n) break;
      }
    } else {
      r.exact = false;
      for (std::size_t i = 0; i < N; ++i) V = std::max(V, std::abs(t) * slope[i] * L);
    }
    r.V.push_back(std::min(V, r.V.back()));  // cylinders are nested
    L *= r.reference_rate;
  }
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < r.V.size(); ++k)
    if (r.V[k] > 1e-300) {
      xs.push_back(static_cast<double>(k + 1));
      ys.push_back(std::log(r.V[k]));
    }
  if (xs.size() >= 3) {
    r.fit = fit_line(xs, ys);
    r.rate = std::exp(r.fit->slope);
    r.summable_trend = r.rate < 1;
  } else {
    r.summable_trend = std::all_of(r.V.begin() + std::min<std::size_t>(1, r.V.size()), r.V.end(),
                                   [](double v) { return v <= 1e-300; });
  }
  return r;
}

// ---------------------------------------------------------------- expansion off U

namespace {

bool in_any(const std::vector<Interval>& U, double x) {
  for (const auto& u : U)
    if (x > u.lo + 1e-12 && x < u.hi - 1e-12) return true;
  return false;
}

}  // namespace

ExpansionReport mane_expansion(const IntervalMap& f, const std::vector<Interval>& U,
                               std::size_t n_max, std::size_t samples, std::uint64_t seed,
                               std::size_t k_min) {
  ExpansionReport r;
  r.lambda1 = kInf;
  r.b = kInf;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(f.domain().lo, f.domain().hi);
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = u(rng);
    if (in_any(U, x)) continue;
    const auto orbit = eval_orbit(f, x, n_max);
    long double acc = 0;
    std::size_t k = 0;
    bool critical = false;
    for (; k < n_max && !in_any(U, orbit[k]); ++k) {
      if (f.at_flat_critical(orbit[k])) {
        critical = true;
        break;
      }
      acc += std::log(std::abs(f.derivative(orbit[k])));
    }
    if (critical) continue;
    const bool entered = k < n_max || in_any(U, orbit[n_max]);
    if (entered && k > 0) r.b = std::min(r.b, static_cast<double>(std::exp(acc)));
    if (k >= k_min) {
      r.lambda1 = std::min(r.lambda1, static_cast<double>(acc) / static_cast<double>(k));
      ++r.segments;
    }
  }
  r.positive = r.segments > 0 && r.lambda1 > 0 && r.b > 0;
  return r;
}

NiceReport nice_check(const IntervalMap& f, const std::vector<Interval>& U, std::size_t n_max) {
  NiceReport r;
  for (const auto& u : U)
    for (double e : {u.lo, u.hi}) {
      const auto orbit = eval_orbit(f, e, n_max);
      for (std::size_t n = 1; n <= n_max; ++n) {
        if (in_any(U, orbit[n])) {
          if (!r.offending || n < *r.offending) r.offending = n;
          r.nice = false;
          break;
        }
        // back on an earlier point: the rest of the orbit repeats
        if (std::any_of(orbit.begin(), orbit.begin() + n,
                        [&](double y) { return std::abs(y - orbit[n]) <= 1e-12; }))
          break;
      }
    }
  return r;
}

// ---------------------------------------------------------------- CSV

void write_growth_csv(std::ostream& out, const CriticalGrowth& g) {
  out << "n,abs_Df\n";
  for (std::size_t k = 0; k < g.log_deriv.size(); ++k) out << k + 1 << ',' << fmt(std::exp(g.log_deriv[k])) << '\n';
}

void write_binding_csv(std::ostream& out, const BindingRecord& b) {
  out << "n,gamma,partial_sum\n";
  for (std::size_t k = 0; k < b.gamma.size(); ++k)
    out << k + 1 << ',' << fmt(b.gamma[k]) << ',' << fmt(b.summable[k]) << '\n';
}

void write_variation_csv(std::ostream& out, const VariationRecord& v) {
  out << "n,V\n";
  for (std::size_t k = 0; k < v.V.size(); ++k) out << k + 1 << ',' << fmt(v.V[k]) << '\n';
}

}  // namespace itf

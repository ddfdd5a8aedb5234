#include "itf/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "itf/diagnostics.hpp"
#include "itf/errors.hpp"
#include "itf/format.hpp"
#include "itf/gibbs.hpp"
#include "itf/hofbauer.hpp"
#include "itf/map_spec.hpp"
#include "itf/thermo.hpp"

namespace itf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

// ---------------------------------------------------------------- config

void ScanConfig::validate() const {
  if (!(t_min < t_max)) throw SchemaError("t-min", "must be below t-max");
  if (steps < 2) throw SchemaError("steps", "need at least 2");
  if (!(tol > 0)) throw SchemaError("tol", "must be positive");
  if (!(delta > 0)) throw SchemaError("delta", "must be positive");
  if (cap && *cap < 1) throw SchemaError("cap", "must be at least 1");
  if (depth < 1) throw SchemaError("depth", "must be at least 1");
}

double ScanConfig::t_at(std::size_t k) const {
  if (k + 1 == steps) return t_max;
  return t_min + (t_max - t_min) * static_cast<double>(k) / static_cast<double>(steps - 1);
}

std::shared_ptr<const InducingScheme> choose_scheme(const IntervalMap& f, const ScanConfig& c) {
  SchemeChoice how = c.scheme;
  if (how == SchemeChoice::automatic)
    how = f.piecewise_affine() ? SchemeChoice::tower_first_return : SchemeChoice::extendible;
  if (how == SchemeChoice::tower_first_return) {
    if (f.piecewise_affine() && f.full_branches() && c.scheme == SchemeChoice::automatic)
      return std::make_shared<const InducingScheme>(
          first_return_scheme(build_tower(f, 2), {0, Word{}}, 1));
    XhatDescriptor x = c.xhat;
    if (c.xhat_word)
      x.cylinder = parse_word(*c.xhat_word, f);
    else if (c.scheme == SchemeChoice::automatic)
      x = {0, Word{{0}}};
    return std::make_shared<const InducingScheme>(
        first_return_scheme(build_tower(f, c.depth), x, c.cap.value_or(10)));
  }
  Interval X;
  if (c.X) {
    X = *c.X;
  } else {
    // the cylinder around 0.3, deepened until its margin sits inside the core
    // spanned by the first two critical images
    double lo = f.crit().empty() ? f.domain().lo : kInf, hi = f.crit().empty() ? f.domain().hi : -kInf;
    for (const auto& cp : f.crit())
      for (double y : {cp.image, f(cp.image)}) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    const Interval core{lo, hi};
    for (std::size_t d = 3; d <= 12; ++d) {
      const auto cyl = cylinder_of(f, itinerary(f, 0.3, d));
      if (!cyl) throw DomainError("no cylinder around 0.3");
      X = cyl->interval;
      if (core.contains(X.scaled(c.delta), 1e-12)) break;
    }
  }
  auto s = extendible_return_scheme(f, X, c.delta, c.cap.value_or(14));
  if (s.branches.empty()) throw NumericError("inducing scheme has no branches below the cap");
  return std::make_shared<const InducingScheme>(std::move(s));
}

// ---------------------------------------------------------------- scan

CurveRow pressure_row(std::shared_ptr<const InducingScheme> scheme, double t, double tol) {
  CurveRow row;
  row.t = t;
  row.p_lo = row.p_hi = row.tail_rate = row.tau_mean = row.lyap = row.entropy = kNaN;
  row.zero_entropy = zero_entropy_bound(scheme->map, t);
  try {
    const auto fam = std::make_shared<const BranchFamily>(make_family(scheme, t));
    const auto res = equilibrium_shift_solve(fam, tol);
    row.p_lo = res.S_star.lo;
    row.p_hi = res.S_star.hi;
    if (res.side != ShiftSide::solved) {
      row.error = res.side == ShiftSide::above ? "pressure above the shift limit"
                                               : "pressure below the shift limit";
      return row;
    }
    const auto& sol = res.solution;
    std::size_t len = std::max(scheme->truncation, scheme->max_tau());
    std::vector<double> masses(len, 0.0);
    for (std::size_t i = 0; i < sol.N; ++i) masses[fam->branches[i].tau - 1] += sol.mass[i];
    if (fam->tail.kind == TailKind::none) masses.push_back(0.0);  // nothing escapes
    const auto tail = tail_classify(masses);
    row.tail_kind = std::string(to_string(tail.kind));
    row.tail_rate = tail.rate;
    const auto a = abramov_quantities(sol);
    row.tau_mean = a.tau_mean;
    row.lyap = a.lyap;
    row.entropy = a.h;
  } catch (const NumericError& e) {
    row.error = e.what();
  }
  return row;
}

PressureCurve scan_pressure(const ScanConfig& config) {
  config.validate();
  const auto f = load_map(config.map);
  const auto scheme = choose_scheme(f, config);
  PressureCurve curve;
  curve.map = f.name();
  curve.rows.resize(config.steps);
  std::size_t workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, config.steps);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < config.steps;)
      curve.rows[k] = pressure_row(scheme, config.t_at(k), config.tol);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const PressureCurve& curve) {
  out << "t,p_lo,p_hi,zero_entropy,tail_kind,tail_rate,tau_mean,lyap,entropy\n";
  for (const auto& r : curve.rows)
    out << fmt(r.t) << ',' << fmt(r.p_lo) << ',' << fmt(r.p_hi) << ',' << fmt(r.zero_entropy) << ','
        << r.tail_kind << ',' << fmt(r.tail_rate) << ',' << fmt(r.tau_mean) << ',' << fmt(r.lyap)
        << ',' << fmt(r.entropy) << '\n';
}

// ---------------------------------------------------------------- phase transitions

std::string_view to_string(SmoothnessVerdict v) {
  switch (v) {
    case SmoothnessVerdict::smooth: return "smooth";
    case SmoothnessVerdict::transition: return "transition";
    case SmoothnessVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

PhaseReport detect_phase_transition(const PressureCurve& curve) {
  PhaseReport rep;
  std::vector<double> t, mid, width, ze;
  for (const auto& r : curve.rows)
    if (std::isfinite(r.p_lo) && std::isfinite(r.p_hi)) {
      t.push_back(r.t);
      mid.push_back(0.5 * (r.p_lo + r.p_hi));
      width.push_back(r.p_hi - r.p_lo);
      ze.push_back(r.zero_entropy);
    }
  const std::size_t n = t.size();
  if (n < 5) return rep;

  std::vector<double> d(n, 0.0), ad;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    // second difference, normalised to a uniform grid
    const double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
    const double h = 0.5 * (h1 + h2);
    d[i] = h * ((mid[i + 1] - mid[i]) / h2 - (mid[i] - mid[i - 1]) / h1);
    ad.push_back(std::abs(d[i]));
  }
  std::nth_element(ad.begin(), ad.begin() + static_cast<std::ptrdiff_t>(ad.size() / 2), ad.end());
  const double median = ad[ad.size() / 2];
  std::vector<bool> flag(n, false);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double noise = width[i - 1] + 2 * width[i] + width[i + 1];
    const double floor = 1e-9 * std::max(1.0, std::abs(mid[i]));
    flag[i] = std::abs(d[i]) > 5 * noise + floor && std::abs(d[i]) > 10 * median;
  }
  auto fit_side = [&](std::size_t from, std::size_t to) {  // inclusive
    std::vector<double> x(t.begin() + static_cast<std::ptrdiff_t>(from),
                          t.begin() + static_cast<std::ptrdiff_t>(to + 1));
    std::vector<double> y(mid.begin() + static_cast<std::ptrdiff_t>(from),
                          mid.begin() + static_cast<std::ptrdiff_t>(to + 1));
    return fit_line(x, y);
  };
  for (std::size_t i = 1; i + 1 < n;) {
    if (!flag[i]) {
      ++i;
      continue;
    }
    std::size_t a = i, b = i;
    while (b + 2 < n && flag[b + 1]) ++b;
    // lines through the points on either side of the flagged run
    const std::size_t lo = a >= 3 ? a - 3 : 0, hi = std::min(n - 1, b + 3);
    const auto L = fit_side(lo, a), R = fit_side(b, hi);
    double k = 0.5 * (t[a] + t[b]);
    if (std::abs(L.slope - R.slope) > 1e-300) k = (R.intercept - L.intercept) / (L.slope - R.slope);
    rep.kinks.push_back(std::clamp(k, t[a - 1], t[b + 1]));
    i = b + 1;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!std::isfinite(ze[i - 1]) || !std::isfinite(ze[i])) continue;
    const double g0 = ze[i - 1] - mid[i - 1], g1 = ze[i] - mid[i];
    const bool up = g0 < -width[i - 1] && g1 > width[i];
    const bool down = g0 > width[i - 1] && g1 < -width[i];
    if (up || down) rep.zero_entropy_crossings.push_back(t[i - 1] + (t[i] - t[i - 1]) * g0 / (g0 - g1));
  }
  rep.verdict = rep.kinks.empty() && rep.zero_entropy_crossings.empty() ? SmoothnessVerdict::smooth
                                                                        : SmoothnessVerdict::transition;
  return rep;
}

// ---------------------------------------------------------------- oracle

namespace {

// power iteration on the block of M over one irreducible class, shifted by I
// so the block is aperiodic; the final estimate is taken on M itself
double class_radius(const std::vector<double>& M, std::size_t n, const std::vector<std::size_t>& cls) {
  const std::size_t m = cls.size();
  std::vector<double> x(m, 1.0 / static_cast<double>(m)), y(m);
  auto apply = [&](const std::vector<double>& v, std::size_t i) {
    double s = 0;
    for (std::size_t j = 0; j < m; ++j) s += M[cls[i] * n + cls[j]] * v[j];
    return s;
  };
  for (std::size_t it = 0; it < 1'000'000; ++it) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += (y[i] = x[i] + apply(x, i));
    double diff = 0;
    for (std::size_t i = 0; i < m; ++i) {
      y[i] /= s;
      diff = std::max(diff, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (it > 10 && diff <= 1e-16) break;
  }
  double mx = 0, sx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += apply(x, i);
    sx += x[i];
  }
  return mx / sx;
}

}  // namespace

double markov_oracle(const IntervalMap& f, double t) {
  if (!f.piecewise_affine()) throw NotApplicableError(f.name() + " is not piecewise affine");
  constexpr double tol = 1e-12;
  constexpr std::size_t kMaxPoints = 512;
  auto cmp = [](double a, double b) { return a < b - tol; };
  std::set<double, decltype(cmp)> pts(cmp);
  pts.insert(f.domain().lo);
  pts.insert(f.domain().hi);
  for (const auto& b : f.branches()) {
    pts.insert(b.interval.lo);
    pts.insert(b.interval.hi);
  }
  // close the partition under images of its points
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<double> now(pts.begin(), pts.end());
    for (const auto& b : f.branches())
      for (double p : now)
        if (b.interval.contains(p, tol) && pts.insert(b(std::clamp(p, b.interval.lo, b.interval.hi))).second)
          grew = true;
    if (pts.size() > kMaxPoints) throw NotApplicableError(f.name() + " has no finite Markov partition");
  }
  const std::vector<double> p(pts.begin(), pts.end());
  const std::size_t n = p.size() - 1;
  std::vector<double> M(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    const Interval atom{p[a], p[a + 1]};
    const auto& br = f.branch(f.branch_at(atom.mid()));
    const Interval img = br.apply(atom);
    const double w = std::pow(std::abs(br.derivative(atom.mid())), -t);
    for (std::size_t b = 0; b < n; ++b)
      if (img.contains(Interval{p[b], p[b + 1]}, tol)) M[a * n + b] = w;
  }
  // spectral radius is the largest over the irreducible classes; iterating
  // class by class avoids the slow convergence of Jordan blocks
  std::vector<char> reach(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) reach[a * n + b] = M[a * n + b] > 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      if (reach[a * n + k])
        for (std::size_t b = 0; b < n; ++b) reach[a * n + b] |= reach[k * n + b];
  std::vector<bool> done(n, false);
  double best = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (done[a] || !reach[a * n + a]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t b = 0; b < n; ++b)
      if (reach[a * n + b] && reach[b * n + a]) {
        cls.push_back(b);
        done[b] = true;
      }
    best = std::max(best, class_radius(M, n, cls));
  }
  if (!(best > 0)) throw NumericError("zero spectral radius");
  const double r = std::log(best);
  return std::abs(r) < 1e-15 ? 0.0 : r;
}

// ---------------------------------------------------------------- command line

namespace {

struct Opts {
  std::string map = "markov_golden";
  double t = 1.0;
  double t_min = 0.0, t_max = 1.0;
  std::size_t steps = 11;
  std::size_t depth = 5;
  double delta = 0.5;
  std::optional<std::size_t> cap;
  double tol = 1e-10;
  std::string out, dot, json;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Opts& o) {
  sub->add_option("--map", o.map, "fixture name, kind:param, or map spec file");
  sub->add_option("--depth", o.depth, "tower depth R");
  sub->add_option("--delta", o.delta, "extension margin of extendible returns");
  sub->add_option("--cap", o.cap, "inducing time cap T");
  sub->add_option("--tol", o.tol, "shift bracket tolerance");
  sub->add_option("--out", o.out, "CSV output path");
  sub->add_option("--dot", o.dot, "DOT output path");
  sub->add_option("--json", o.json, "JSON output path");
  sub->add_option("--seed", o.seed, "seed for sampled diagnostics");
}

ScanConfig to_config(const Opts& o) {
  ScanConfig c;
  c.map = o.map;
  c.depth = o.depth;
  c.delta = o.delta;
  c.cap = o.cap;
  c.tol = o.tol;
  c.t_min = o.t_min;
  c.t_max = o.t_max;
  c.steps = o.steps;
  return c;
}

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw SchemaError("output", "cannot write '" + path + "'");
  return f;
}

std::string fixed9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v == 0.0 ? 0.0 : v);
  return buf;
}

void cmd_tower(const Opts& o, std::ostream& out) {
  const auto f = load_map(o.map);
  const auto tw = build_tower(f, o.depth);
  const auto prim = closed_primitive_subgraph(tw);
  out << "map " << f.name() << "\n";
  out << "nodes " << tw.real_nodes().size() << "\n";
  out << "edges " << tw.edge_count() << "\n";
  out << "complete " << (tw.complete ? "true" : "false") << "\n";
  out << "closed_primitive " << (prim.closed ? std::to_string(prim.closed->size()) : "none") << "\n";
  if (!o.dot.empty()) open_file(o.dot) << tower_to_dot(tw);
  if (!o.json.empty()) open_file(o.json) << tower_to_json(tw);
}

void cmd_induce(const Opts& o, std::ostream& out) {
  const auto f = load_map(o.map);
  auto c = to_config(o);
  c.validate();
  const auto s = choose_scheme(f, c);
  const auto v = validate_scheme(*s);
  out << "map " << f.name() << "\n";
  out << "origin " << s->origin_desc << "\n";
  out << "X " << fmt(s->X.lo) << ' ' << fmt(s->X.hi) << "\n";
  out << "branches " << s->branches.size() << "\n";
  out << "max_tau " << s->max_tau() << "\n";
  out << "escaping_mass " << fmt(s->escaping_mass_bound) << "\n";
  out << "distortion " << fmt(s->measured_distortion()) << "\n";
  out << "koebe_bound " << fmt(s->koebe_bound()) << "\n";
  out << "valid " << (v.pass ? "true" : "false") << "\n";
  if (!o.out.empty()) {
    auto file = open_file(o.out);
    write_scheme_csv(file, *s);
  }
}

void cmd_pressure(const Opts& o, std::ostream& out) {
  const auto f = load_map(o.map);
  auto c = to_config(o);
  c.validate();
  const auto s = choose_scheme(f, c);
  const auto fam = std::make_shared<const BranchFamily>(make_family(s, o.t));
  const auto res = equilibrium_shift_solve(fam, o.tol);
  out << "map " << f.name() << "\n";
  out << "t " << fmt(o.t) << "\n";
  out << "P+_lower " << fmt(res.S_star.lo) << "\n";
  out << "P+_upper " << fmt(res.S_star.hi) << "\n";
  out << "zero_entropy " << fmt(res.zero_entropy) << "\n";
  if (res.side != ShiftSide::solved) {
    out << "side " << (res.side == ShiftSide::above ? "above" : "below") << "\n";
    throw NumericError("shift root not bracketed within the probe limit");
  }
  out << "lambda " << fmt(res.solution.lambda) << "\n";
  try {
    const auto a = abramov_quantities(res.solution);
    out << "tau_mean " << fmt(a.tau_mean) << "\n";
    out << "lyap " << fmt(a.lyap) << "\n";
    out << "entropy " << fmt(a.h) << "\n";
  } catch (const NonCompatibleError&) {
    out << "tau_mean inf\n";
  }
  if (!o.json.empty()) {
    auto file = open_file(o.json);
    write_gibbs_json(file, res.solution);
  }
  if (!o.out.empty()) {
    auto file = open_file(o.out);
    write_cylinder_mass_csv(file, res.solution, 3);
  }
}

void cmd_scan(const Opts& o, std::ostream& out, std::ostream& err) {
  const auto curve = scan_pressure(to_config(o));
  const auto rep = detect_phase_transition(curve);
  if (o.out.empty()) {
    write_curve_csv(out, curve);
  } else {
    auto file = open_file(o.out);
    write_curve_csv(file, curve);
    out << "rows " << curve.rows.size() << "\n";
  }
  std::ostream& note = o.out.empty() ? err : out;
  note << "smoothness " << to_string(rep.verdict) << "\n";
  for (double k : rep.kinks) note << "kink " << fmt(k) << "\n";
  for (double k : rep.zero_entropy_crossings) note << "zero_entropy_crossing " << fmt(k) << "\n";
  for (const auto& r : curve.rows)
    if (!r.error.empty()) note << "row t=" << fmt(r.t) << ": " << r.error << "\n";
}

void cmd_diagnose(const Opts& o, std::ostream& out) {
  const auto f = load_map(o.map);
  auto c = to_config(o);
  c.validate();
  const double t0 = o.t > 0 && o.t < 1 ? o.t : 0.9;
  constexpr std::size_t n_max = 40;
  constexpr double eps = 0.05;
  nlohmann::ordered_json js;
  js["map"] = f.name();

  const auto g = critical_orbit_growth(f, n_max, t0);
  out << "growth " << to_string(g.verdict) << " beta_threshold " << fmt(g.beta_threshold) << "\n";
  for (const auto& p : g.points) {
    out << "  c " << fmt(p.c) << " alpha " << fmt(p.alpha) << " beta " << fmt(p.beta) << ' '
        << to_string(p.verdict) << (p.truncated ? " truncated" : "") << "\n";
    js["growth"].push_back({{"c", round9(p.c)}, {"alpha", round9(p.alpha)}, {"beta", round9(p.beta)},
                            {"verdict", to_string(p.verdict)}, {"truncated", p.truncated}});
  }

  std::vector<Interval> U;
  for (const auto& cp : f.crit()) U.push_back(critical_neighbourhood(f, cp, eps));
  const auto s = choose_scheme(f, c);
  for (const auto& b : binding_analysis(f, eps, o.delta * s->X.length(), n_max, t0)) {
    out << "binding c " << fmt(b.c) << " p_U " << b.p_U << " summable " << fmt(b.summable.back())
        << (b.converged ? " converged" : " not-converged") << " bound_sum " << fmt(b.bound_sums.back())
        << "\n";
    js["binding"].push_back({{"c", round9(b.c)}, {"p_U", b.p_U}, {"converged", b.converged},
                             {"summable", round9(b.summable.back())}});
  }
  const auto k = koebe_check(*s);
  out << "koebe measured " << fmt(k.measured) << " bound " << fmt(k.bound) << (k.ok ? " ok" : " violated")
      << "\n";
  js["koebe"] = {{"measured", round9(k.measured)}, {"bound", round9(k.bound)}, {"ok", k.ok}};
  const auto v = variation_decay(*s, o.t, 4);
  out << "variation";
  for (double x : v.V) out << ' ' << fmt(x);
  out << (v.summable_trend ? " summable-trend" : " no-trend") << "\n";
  js["variation"] = v.V;
  if (!U.empty()) {
    const auto m = mane_expansion(f, U, 100, 2000, o.seed);
    out << "expansion lambda1 " << fmt(m.lambda1) << " b " << fmt(m.b) << (m.positive ? " positive" : " not-positive")
        << "\n";
    const auto nice = nice_check(f, U, n_max);
    out << "nice " << (nice.nice ? "true" : "false");
    if (nice.offending) out << " at " << *nice.offending;
    out << "\n";
    js["expansion"] = {{"lambda1", round9(m.lambda1)}, {"b", round9(m.b)}, {"positive", m.positive}};
    js["nice"] = nice.nice;
  }
  if (!o.out.empty() && !g.points.empty()) {
    auto file = open_file(o.out);
    write_growth_csv(file, g.points[0]);
  }
  if (!o.json.empty()) open_file(o.json) << js.dump(2) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"thermodynamic formalism for piecewise-monotone interval maps", "itf"};
  app.require_subcommand(1);
  Opts o;
  auto* tower = app.add_subcommand("tower", "build the Hofbauer tower");
  auto* induce = app.add_subcommand("induce", "build and validate an inducing scheme");
  auto* pressure = app.add_subcommand("pressure", "solve for the pressure at one t");
  auto* scan = app.add_subcommand("scan", "pressure curve over a t grid");
  auto* diagnose = app.add_subcommand("diagnose", "hypothesis diagnostics");
  auto* oracle = app.add_subcommand("oracle", "Markov matrix pressure");
  for (auto* sub : {tower, induce, pressure, scan, diagnose, oracle}) add_common(sub, o);
  for (auto* sub : {pressure, diagnose, oracle}) sub->add_option("--t", o.t, "potential parameter");
  scan->add_option("--t-min", o.t_min);
  scan->add_option("--t-max", o.t_max);
  scan->add_option("--steps", o.steps);

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
      !app.get_subcommand_no_throw(args[0])) {
    err << "unknown subcommand '" << args[0] << "'\n" << app.help();
    return 2;
  }
  std::vector<const char*> argv{"itf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  try {
    if (tower->parsed()) cmd_tower(o, out);
    if (induce->parsed()) cmd_induce(o, out);
    if (pressure->parsed()) cmd_pressure(o, out);
    if (scan->parsed()) cmd_scan(o, out, err);
    if (diagnose->parsed()) cmd_diagnose(o, out);
    if (oracle->parsed()) out << fixed9(markov_oracle(load_map(o.map), o.t)) << "\n";
  } catch (const SchemaError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NotApplicableError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace itf

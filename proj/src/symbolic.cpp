#include "itf/symbolic.hpp"

#include <cmath>

#include "itf/errors.hpp"
#include "itf/format.hpp"

namespace itf {

std::string to_string(const Word& w, const IntervalMap& f) {
  bool single = true;
  for (const auto& b : f.branches()) single = single && b.label.size() == 1;
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!single && i > 0) s += ',';
    s += f.branch(w[i]).label;
  }
  return s;
}

Word parse_word(const std::string& text, const IntervalMap& f) {
  Word w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == ',' || text[pos] == ' ') {
      ++pos;
      continue;
    }
    bool found = false;
    // longest label first
    std::size_t best = 0, best_len = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto& l = f.branch(i).label;
      if (l.size() > best_len && text.compare(pos, l.size(), l) == 0) {
        best = i;
        best_len = l.size();
        found = true;
      }
    }
    if (!found) throw SchemaError("word", "unknown letter in '" + text + "'");
    w.letters.push_back(static_cast<Letter>(best));
    pos += best_len;
  }
  return w;
}

double apply_letters(const IntervalMap& f, std::span<const Letter> w, double x) {
  long double xe = x;
  for (Letter a : w) xe = f.branch(a).formula->value_ext(xe);
  return static_cast<double>(xe);
}

double log_derivative_letters(const IntervalMap& f, std::span<const Letter> w, double x) {
  long double acc = 0.0L, xe = x;
  for (Letter a : w) {
    const auto& b = *f.branch(a).formula;
    acc += logl(fabsl(b.derivative_ext(xe)));
    xe = b.value_ext(xe);
  }
  return static_cast<double>(acc);
}

double pull_back(const IntervalMap& f, std::span<const Letter> w, double y) {
  long double ye = y;
  for (std::size_t k = w.size(); k-- > 0;) ye = f.branch(w[k]).formula->inverse_ext(ye);
  return static_cast<double>(ye);
}

double pull_back_log_derivative(const IntervalMap& f, std::span<const Letter> w, double y,
                                double* x) {
  long double ye = y, prod = 1.0L, acc = 0.0L;
  for (std::size_t k = w.size(); k-- > 0;) {
    const auto& b = *f.branch(w[k]).formula;
    ye = b.inverse_ext(ye);
    prod *= fabsl(b.derivative_ext(ye));
    if (prod > 1e300L || prod < 1e-300L) {
      acc += logl(prod);
      prod = 1.0L;
    }
  }
  if (x) *x = static_cast<double>(ye);
  return static_cast<double>(acc + logl(prod));
}

Interval pull_back(const IntervalMap& f, std::span<const Letter> w, const Interval& j) {
  return hull(pull_back(f, w, j.lo), pull_back(f, w, j.hi));
}

std::vector<Cylinder> branch_cylinders(const IntervalMap& f) {
  std::vector<Cylinder> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& b = f.branch(i);
    out.push_back({Word{{static_cast<Letter>(i)}}, b.interval, b.image(), b.orientation});
  }
  return out;
}

std::vector<Cylinder> refine_step(const IntervalMap& f, const std::vector<Cylinder>& cyl,
                                  std::size_t cap) {
  std::vector<Cylinder> out;
  std::vector<Cylinder> children;
  for (const auto& c : cyl) {
    children.clear();
    for (std::size_t b = 0; b < f.size(); ++b) {
      const auto& br = f.branch(b);
      const auto k = intersect(c.image, br.interval, kSnapTol);
      if (!k) continue;
      Cylinder child;
      child.word = c.word;
      child.word.letters.push_back(static_cast<Letter>(b));
      child.interval = pull_back(f, c.word.span(), *k);
      if (!(child.interval.length() > 0)) continue;
      child.image = br.apply(*k);
      child.orientation = c.orientation * br.orientation;
      children.push_back(std::move(child));
    }
    // along the image the children come in branch order; flip if f^n reverses
    if (c.orientation < 0) std::reverse(children.begin(), children.end());
    for (auto& ch : children) {
      if (out.size() >= cap) throw ResourceError("cylinder cap exceeded", out.size());
      out.push_back(std::move(ch));
    }
  }
  return out;
}

std::vector<Cylinder> refine(const IntervalMap& f, std::size_t n, std::size_t cap) {
  if (n == 0) throw DomainError("refine needs depth n >= 1");
  auto cyl = branch_cylinders(f);
  if (cyl.size() > cap) throw ResourceError("cylinder cap exceeded", cyl.size());
  for (std::size_t k = 1; k < n; ++k) cyl = refine_step(f, cyl, cap);
  return cyl;
}

Word itinerary(const IntervalMap& f, double x, std::size_t n, std::optional<Side> side) {
  Word w;
  x = f.snap(x);
  for (std::size_t k = 0; k < n; ++k) {
    if (!side && f.on_breakpoint(x)) throw AmbiguityError(k, x);
    const std::size_t b = f.branch_at(x, side.value_or(Side::right));
    w.letters.push_back(static_cast<Letter>(b));
    x = f(x, side.value_or(Side::right));
  }
  return w;
}

std::uint64_t count_laps(const std::vector<Cylinder>& cyl) {
  if (cyl.empty()) return 0;
  std::uint64_t laps = 1;
  for (std::size_t i = 1; i < cyl.size(); ++i) {
    const auto& a = cyl[i - 1];
    const auto& b = cyl[i];
    bool joined = a.orientation == b.orientation;
    if (joined) {
      // monotone across the junction, jumps in the same direction allowed
      joined = a.orientation > 0 ? a.image.hi <= b.image.lo + kIdentifyTol
                                 : a.image.lo >= b.image.hi - kIdentifyTol;
    }
    if (!joined) ++laps;
  }
  return laps;
}

LapsRecord laps_entropy(const IntervalMap& f, std::size_t n_max, std::size_t cap) {
  if (n_max < 1) throw DomainError("laps_entropy needs n_max >= 1");
  LapsRecord rec;
  auto cyl = branch_cylinders(f);
  std::vector<double> h;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1) cyl = refine_step(f, cyl, cap);
    rec.laps.push_back(count_laps(cyl));
    h.push_back(std::log(static_cast<double>(rec.laps.back())) / static_cast<double>(n));
  }
  rec.h_top_estimate = h.back();
  rec.cauchy_diff = h.size() > 1 ? std::abs(h[h.size() - 1] - h[h.size() - 2]) : 0.0;
  return rec;
}

std::optional<Cylinder> cylinder_of(const IntervalMap& f, const Word& w) {
  if (w.empty()) return std::nullopt;
  for (Letter a : w.letters)
    if (a >= f.size()) throw DomainError("letter outside the branch range");
  Interval j = f.branch(w[0]).image();
  int orient = f.branch(w[0]).orientation;
  for (std::size_t k = 1; k < w.size(); ++k) {
    const auto& br = f.branch(w[k]);
    const auto cut = intersect(j, br.interval, kSnapTol);
    if (!cut) return std::nullopt;
    j = br.apply(*cut);
    orient *= br.orientation;
  }
  Cylinder c{w, pull_back(f, w.span(), j), j, orient};
  if (!(c.interval.length() > 0)) return std::nullopt;
  return c;
}

std::optional<double> fixed_point_in(const IntervalMap& f, std::span<const Letter> w,
                                     const Interval& j) {
  auto g = [&](double x) { return apply_letters(f, w, x) - x; };
  double a = j.lo, b = j.hi;
  double ga = g(a), gb = g(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if ((ga > 0) == (gb > 0)) return std::nullopt;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double gm = g(m);
    if (gm == 0.0) return m;
    if ((gm > 0) == (ga > 0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  if (b - a > 1e-13) throw NumericError("periodic point bisection did not converge");
  return 0.5 * (a + b);
}

std::optional<PeriodicPoint> periodic_point(const IntervalMap& f, const Word& w) {
  const auto c = cylinder_of(f, w);
  if (!c) return std::nullopt;
  if (!c->image.contains(c->interval, kIdentifyTol)) return std::nullopt;
  const auto x = fixed_point_in(f, w.span(), c->interval);
  if (!x) return std::nullopt;
  return PeriodicPoint{*x, std::exp(log_derivative_letters(f, w.span(), *x))};
}

void write_cylinders_csv(std::ostream& out, const std::vector<Cylinder>& cyl,
                         const IntervalMap& f) {
  out << "word,lo,hi,image_lo,image_hi\n";
  for (const auto& c : cyl)
    out << to_string(c.word, f) << ',' << fmt(c.interval.lo) << ',' << fmt(c.interval.hi) << ','
        << fmt(c.image.lo) << ',' << fmt(c.image.hi) << '\n';
}

}  // namespace itf

#include "itf/inducing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "itf/errors.hpp"
#include "itf/format.hpp"

namespace itf {

double koebe_bound(double delta) {
  if (!(delta > 0)) return std::numeric_limits<double>::infinity();
  return (1.0 + 2.0 * delta) / (delta * delta) + 1.0;
}

std::size_t InducingScheme::max_tau() const {
  std::size_t m = 0;
  for (const auto& b : branches) m = std::max(m, b.tau);
  return m;
}

double InducingScheme::measured_distortion() const {
  double k = 1.0;
  for (const auto& b : branches) k = std::max(k, b.sup_deriv / b.inf_deriv);
  return k;
}

double InducingScheme::koebe_bound() const { return itf::koebe_bound(delta); }

double InducingScheme::distortion_bound() const {
  return delta > 0 ? koebe_bound() : measured_distortion();
}

double induced_apply(const InducingScheme& s, std::size_t i, double x) {
  return apply_letters(s.map, s.branches[i].word.span(), x);
}

double induced_log_derivative(const InducingScheme& s, std::size_t i, double x) {
  return log_derivative_letters(s.map, s.branches[i].word.span(), x);
}

namespace {

// |DF| bracket sampled at pullbacks of evenly spaced points of X
void bracket_derivative(const IntervalMap& f, const Interval& X, SchemeBranch& b, int samples) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double y = X.lo + X.length() * k / (samples - 1);
    const double x = pull_back(f, b.word.span(), y);
    const double d = std::exp(log_derivative_letters(f, b.word.span(), x));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  b.inf_deriv = lo;
  b.sup_deriv = hi;
}

void finish(InducingScheme& s, const std::vector<double>& covered_at, int samples) {
  std::sort(s.branches.begin(), s.branches.end(),
            [](const SchemeBranch& a, const SchemeBranch& b) { return a.domain.lo < b.domain.lo; });
  for (auto& b : s.branches) bracket_derivative(s.map, s.X, b, samples);
  s.escaping_by_time.assign(s.truncation + 1, s.X.length());
  double acc = 0.0;
  for (std::size_t n = 1; n <= s.truncation; ++n) {
    acc += covered_at[n];
    s.escaping_by_time[n] = std::max(0.0, s.X.length() - acc);
  }
  s.escaping_mass_bound = s.escaping_by_time.back();
  // rounding leftovers of an exhausted scheme
  if (s.escaping_mass_bound <= 1e-13 * s.X.length()) {
    for (auto& e : s.escaping_by_time)
      if (e <= 1e-13 * s.X.length()) e = 0.0;
    s.escaping_mass_bound = 0.0;
  }
}

bool relatively_compact(const Interval& C, const Interval& D, const Interval& I) {
  auto end_ok = [&](double c, double d_end) {
    if (std::abs(c - d_end) > kIdentifyTol) return true;
    // touching the node boundary is only allowed on the boundary of I itself
    return std::abs(c - I.lo) <= kIdentifyTol || std::abs(c - I.hi) <= kIdentifyTol;
  };
  return D.contains(C, kIdentifyTol) && end_ok(C.lo, D.lo) && end_ok(C.hi, D.hi);
}

}  // namespace

InducingScheme first_return_scheme(const HofbauerTower& tower, const XhatDescriptor& xhat,
                                   std::size_t T, SchemeOptions opt) {
  const IntervalMap& f = tower.map;
  if (T < 1) throw DomainError("time cap T must be >= 1");
  if (xhat.node >= tower.nodes.size() || tower.nodes[xhat.node].frontier)
    throw DomainError("tower domain " + std::to_string(xhat.node) + " is not inside the truncation");
  const Interval D = tower.nodes[xhat.node].interval;
  Interval C = D;
  if (!xhat.cylinder.empty()) {
    const auto cyl = cylinder_of(f, xhat.cylinder);
    if (!cyl) throw DomainError("empty cylinder " + to_string(xhat.cylinder, f));
    const auto cut = intersect(D, cyl->interval, kSnapTol);
    if (!cut) throw DomainError("cylinder misses the tower domain");
    C = *cut;
  }
  if (!relatively_compact(C, D, f.domain()))
    throw DomainError("C = [" + fmt(C.lo) + "," + fmt(C.hi) + "] is not compactly inside [" +
                      fmt(D.lo) + "," + fmt(D.hi) + "]");

  InducingScheme s{f, C, {}, 0.0, SchemeOrigin::tower_first_return, "", T, 0.0, {}, 0, 0.0};
  s.origin_desc = "first return to node " + std::to_string(xhat.node) + " [" + fmt(D.lo) + "," +
                  fmt(D.hi) + "]" +
                  (xhat.cylinder.empty() ? "" : " cut by " + to_string(xhat.cylinder, f));

  struct Piece {
    Word word;
    Interval image;   // f^k of the points still travelling
    Interval domain;  // the tower domain they sit in
  };
  std::vector<Piece> pieces{{Word{}, C, D}};
  std::vector<double> covered_at(T + 1, 0.0);
  const double min_len = 1e-15 * C.length();
  for (std::size_t k = 1; k <= T && !pieces.empty(); ++k) {
    std::vector<Piece> next;
    for (const auto& p : pieces) {
      for (std::size_t b = 0; b < f.size(); ++b) {
        const auto& br = f.branch(b);
        const auto img = intersect(p.image, br.interval, kSnapTol);
        if (!img) continue;
        const auto dom = intersect(p.domain, br.interval, kSnapTol);
        Piece q{p.word, br.apply(*img), br.apply(*dom)};
        q.word.letters.push_back(static_cast<Letter>(b));
        if (!q.domain.contains(C, kIdentifyTol)) {
          next.push_back(std::move(q));
          continue;
        }
        // back in X^: the part over C returns, the rest travels on
        if (const auto ret = intersect(q.image, C, min_len)) {
          const Interval xi = pull_back(f, q.word.span(), *ret);
          if (ret->approx_equal(C, kIdentifyTol)) {
            s.branches.push_back({xi, k, q.word, xi, 0.0, 0.0});
            covered_at[k] += xi.length();
          } else {
            s.partial_return_mass += xi.length();
          }
        }
        for (const Interval side : {Interval{q.image.lo, std::min(q.image.hi, C.lo)},
                                    Interval{std::max(q.image.lo, C.hi), q.image.hi}}) {
          if (side.length() > min_len) next.push_back({q.word, side, q.domain});
        }
      }
    }
    if (next.size() > opt.piece_cap) throw ResourceError("first-return piece cap exceeded", next.size());
    pieces = std::move(next);
  }
  finish(s, covered_at, opt.derivative_samples);
  return s;
}

InducingScheme extendible_return_scheme(const IntervalMap& f, const Interval& X, double delta,
                                        std::size_t T, SchemeOptions opt) {
  if (T < 1) throw DomainError("time cap T must be >= 1");
  if (!(delta > 0)) throw DomainError("delta must be positive");
  if (!(X.length() > 0) || !f.domain().contains(X, kSnapTol))
    throw DomainError("X must be a nonempty subinterval of the domain");
  const Interval Y = X.scaled(delta);
  if (!f.domain().contains(Y, kIdentifyTol))
    throw DomainError("scaled neighbourhood [" + fmt(Y.lo) + "," + fmt(Y.hi) +
                      "] escapes the domain");

  InducingScheme s{f, X, {}, delta, SchemeOrigin::delta_extendible, "", T, 0.0, {}, 0, 0.0};
  s.origin_desc = "first " + fmt(delta) + "-extendible return to [" + fmt(X.lo) + "," +
                  fmt(X.hi) + "]";
  std::map<double, double> accepted;  // lo -> hi, disjoint
  auto covered_length = [&](const Interval& J) {
    double len = 0.0;
    auto it = accepted.upper_bound(J.lo);
    if (it != accepted.begin()) --it;
    for (; it != accepted.end() && it->first < J.hi; ++it)
      len += std::max(0.0, std::min(J.hi, it->second) - std::max(J.lo, it->first));
    return len;
  };
  auto overlaps = [&](const Interval& K) {
    const double tol = 1e-14 * X.length();
    auto it = accepted.upper_bound(K.lo);
    if (it != accepted.begin()) --it;
    for (; it != accepted.end() && it->first < K.hi; ++it)
      if (std::min(K.hi, it->second) - std::max(K.lo, it->first) > tol) return true;
    return false;
  };

  std::vector<double> covered_at(T + 1, 0.0);
  std::vector<Cylinder> cyl = branch_cylinders(f);
  for (std::size_t j = 1; j <= T; ++j) {
    if (j > 1) cyl = refine_step(f, cyl, opt.piece_cap);
    std::vector<Cylinder> keep;
    for (auto& z : cyl) {
      const auto zx = intersect(z.interval, X, kSnapTol);
      if (!zx) continue;
      if (z.image.contains(Y, kIdentifyTol)) {
        const Interval K = pull_back(f, z.word.span(), X);
        if (X.contains(K, kIdentifyTol) && K.length() > 0) {
          if (overlaps(K)) {
            ++s.rejected_overlaps;
          } else {
            const Interval ext = pull_back(f, z.word.span(), Y);
            s.branches.push_back({K, j, z.word, ext, 0.0, 0.0});
            accepted[K.lo] = K.hi;
            covered_at[j] += K.length();
          }
        }
      }
      if (covered_length(*zx) < zx->length() * (1.0 - 1e-12)) keep.push_back(std::move(z));
    }
    cyl = std::move(keep);
    if (cyl.empty()) break;
  }
  finish(s, covered_at, opt.derivative_samples);
  return s;
}

ValidationReport validate_scheme(const InducingScheme& s) {
  ValidationReport r;
  r.bound = s.koebe_bound();
  r.branches.resize(s.branches.size());
  const double X = s.X.length();
  for (std::size_t i = 0; i < s.branches.size(); ++i) {
    const auto& b = s.branches[i];
    auto& c = r.branches[i];
    const double a = induced_apply(s, i, b.domain.lo), z = induced_apply(s, i, b.domain.hi);
    const Interval img = hull(a, z);
    c.onto_error = (std::abs(img.lo - s.X.lo) + std::abs(img.hi - s.X.hi)) / X;
    c.onto = c.onto_error <= 1e-9 && s.X.contains(b.domain, 1e-12 * X);
    c.distortion = b.sup_deriv / b.inf_deriv;
    c.distortion_ok = b.inf_deriv > 0 && c.distortion <= r.bound;
    r.worst_distortion = std::max(r.worst_distortion, c.distortion);
  }
  // branches are ordered by left endpoint; check each against its successors
  std::vector<std::size_t> order(s.branches.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return s.branches[a].domain.lo < s.branches[b].domain.lo;
  });
  for (std::size_t p = 0; p < order.size(); ++p)
    for (std::size_t q = p + 1; q < order.size(); ++q) {
      const auto& A = s.branches[order[p]].domain;
      const auto& B = s.branches[order[q]].domain;
      if (B.lo >= A.hi) break;
      if (const auto ov = intersect(A, B, 1e-14 * X)) {
        r.overlaps.push_back({order[p], order[q], *ov});
        r.branches[order[p]].disjoint = false;
        r.branches[order[q]].disjoint = false;
      }
    }
  for (const auto& c : r.branches) r.pass = r.pass && c.pass();
  return r;
}

void write_scheme_csv(std::ostream& out, const InducingScheme& s) {
  out << "i,lo,hi,tau,inf_DF,sup_DF,ext_lo,ext_hi\n";
  for (std::size_t i = 0; i < s.branches.size(); ++i) {
    const auto& b = s.branches[i];
    out << i << ',' << fmt(b.domain.lo) << ',' << fmt(b.domain.hi) << ',' << b.tau << ','
        << fmt(b.inf_deriv) << ',' << fmt(b.sup_deriv) << ',' << fmt(b.extension.lo) << ','
        << fmt(b.extension.hi) << '\n';
  }
}

InducedPullback induced_pull_back(const InducingScheme& s, std::span<const std::size_t> seq,
                                  double y) {
  InducedPullback out{y, 0.0};
  long double sum = 0;
  for (std::size_t k = seq.size(); k-- > 0;) {
    sum += pull_back_log_derivative(s.map, s.branches.at(seq[k]).word.span(), out.x, &out.x);
  }
  out.log_deriv = static_cast<double>(sum);
  return out;
}

InducedPullback induced_periodic_point(const InducingScheme& s, std::span<const std::size_t> seq) {
  double x = s.X.mid();
  for (int it = 0; it < 400; ++it) {
    double y = x;
    for (std::size_t k = seq.size(); k-- > 0;) y = pull_back(s.map, s.branches.at(seq[k]).word.span(), y);
    const bool done = std::abs(y - x) <= 1e-16;
    x = y;
    if (done) break;
  }
  return induced_pull_back(s, seq, x);
}

}  // namespace itf

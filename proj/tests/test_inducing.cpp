#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "itf/errors.hpp"
#include "itf/inducing.hpp"
#include "itf/map_spec.hpp"

using namespace itf;

namespace {

InducingScheme golden_scheme(std::size_t T = 10) {
  const auto g = load_map("markov_golden");
  return first_return_scheme(build_tower(g, 5), {0, parse_word("A", g)}, T);
}

// the 3-cylinder of quad4 containing 0.3
Interval quad_x() {
  const auto q = load_map("quad4");
  return cylinder_of(q, itinerary(q, 0.3, 3))->interval;
}

// first return time to C along the lifted orbit (x, D), brute force
std::size_t lifted_return_time(const IntervalMap& f, double x, Interval D, const Interval& C,
                               std::size_t cap) {
  for (std::size_t j = 1; j <= cap; ++j) {
    const auto& br = f.branch(f.branch_at(x));
    D = br.apply(*intersect(D, br.interval));
    x = br(x);
    if (D.contains(C, 1e-12) && x > C.lo && x < C.hi) return j;
  }
  return 0;
}

}  // namespace

TEST_CASE("golden first-return scheme") {
  const auto s = golden_scheme();
  REQUIRE(s.branches.size() == 2);
  CHECK(s.branches[0].domain.approx_equal({0, 4.0 / 9}, 1e-14));
  CHECK(s.branches[0].tau == 1);
  CHECK(s.branches[0].inf_deriv == doctest::Approx(1.5));
  CHECK(s.branches[0].sup_deriv == doctest::Approx(1.5));
  CHECK(s.branches[1].domain.approx_equal({4.0 / 9, 2.0 / 3}, 1e-14));
  CHECK(s.branches[1].tau == 2);
  CHECK(s.branches[1].inf_deriv == doctest::Approx(3.0));
  CHECK(s.escaping_mass_bound == 0.0);
  const auto r = validate_scheme(s);
  CHECK(r.pass);
  for (const auto& b : r.branches) CHECK(b.distortion == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tent first return to L") {
  const auto t = load_map("tent2");
  const auto s = first_return_scheme(build_tower(t, 3), {0, parse_word("L", t)}, 3);
  REQUIRE(!s.branches.empty());
  CHECK(s.branches.front().domain.approx_equal({0, 0.25}, 1e-14));
  CHECK(s.branches.front().tau == 1);
  CHECK(s.escaping_mass_bound <= 0.125 * s.X.length() + 1e-15);
  // every covered length per return time matches sampled first returns
  const int N = 40000;
  std::vector<double> sampled(4, 0.0);
  for (int i = 0; i < N; ++i) {
    const double x = 0.5 * (i + 0.5) / N;
    const std::size_t r = lifted_return_time(t, x, {0, 1}, s.X, 3);
    if (r) sampled[r] += 0.5 / N;
  }
  std::vector<double> got(4, 0.0);
  for (const auto& b : s.branches) got[b.tau] += b.domain.length();
  for (int n = 1; n <= 3; ++n) CHECK(got[n] == doctest::Approx(sampled[n]).epsilon(1e-3));
}

TEST_CASE("first-return preconditions") {
  const auto g = load_map("markov_golden");
  const auto tower = build_tower(g, 5);
  // [4/9,2/3] touches the right end of [0,2/3] inside the interval
  CHECK_THROWS_AS(first_return_scheme(tower, {1, parse_word("AB", g)}, 5), DomainError);
  CHECK_THROWS_AS(first_return_scheme(tower, {7, Word{}}, 5), DomainError);
  const auto stubby = build_tower(g, 0);
  CHECK_THROWS_AS(first_return_scheme(stubby, {1, Word{}}, 5), DomainError);
  CHECK_THROWS_AS(first_return_scheme(tower, {0, parse_word("A", g)}, 0), DomainError);
}

TEST_CASE("first-return branches never revisit X^ early") {
  for (const char* name : {"tent2", "markov_golden", "quad4", "cheb3", "quadratic:3.83"}) {
    const auto f = load_map(name);
    const auto tower = build_tower(f, 12);
    const auto s = first_return_scheme(tower, {0, Word{{0}}}, 8);
    for (const auto& b : s.branches) {
      for (double u : {0.25, 0.5, 0.75}) {
        const double x = b.domain.lo + u * b.domain.length();
        CHECK(lifted_return_time(f, x, tower.nodes[0].interval, s.X, b.tau) == b.tau);
      }
    }
  }
}

TEST_CASE("extendible scheme preconditions") {
  const auto g = load_map("markov_golden");
  CHECK_THROWS_AS(extendible_return_scheme(g, {0, 4.0 / 9}, 0.25, 12), DomainError);
  const auto q = load_map("quad4");
  const auto two = cylinder_of(q, itinerary(q, 0.3, 2))->interval;
  CHECK_THROWS_AS(extendible_return_scheme(q, two, 0.5, 14), DomainError);
  CHECK_THROWS_AS(extendible_return_scheme(q, quad_x(), 0.0, 14), DomainError);
}

TEST_CASE("golden extendible scheme") {
  const auto g = load_map("markov_golden");
  const Interval X{4.0 / 9, 2.0 / 3};
  const auto s = extendible_return_scheme(g, X, 0.25, 12);
  REQUIRE(s.branches.size() > 2);
  const Interval Y = X.scaled(0.25);
  CHECK(Y.length() == doctest::Approx(1.5 * X.length()));
  for (std::size_t i = 0; i < s.branches.size(); ++i) {
    const auto& b = s.branches[i];
    const Interval img = hull(apply_letters(g, b.word.span(), b.extension.lo),
                              apply_letters(g, b.word.span(), b.extension.hi));
    CHECK(img.approx_equal(Y, 1e-10));
    CHECK(b.extension.contains(b.domain));
    CHECK(b.extension.length() > b.domain.length());
  }
  CHECK(validate_scheme(s).pass);
}

TEST_CASE("tent extendible scheme is distortion free") {
  const auto s = extendible_return_scheme(load_map("tent2"), {0.25, 0.5}, 0.5, 8);
  REQUIRE(!s.branches.empty());
  for (const auto& b : s.branches) CHECK(b.sup_deriv / b.inf_deriv == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(validate_scheme(s).pass);
}

TEST_CASE("quadratic extendible scheme obeys Koebe") {
  const auto s = extendible_return_scheme(load_map("quad4"), quad_x(), 0.5, 14);
  CHECK(s.branches.size() > 20);
  CHECK(s.koebe_bound() == doctest::Approx(9.0));
  const auto r = validate_scheme(s);
  CHECK(r.pass);
  CHECK(r.worst_distortion <= 9.0);
  CHECK(r.worst_distortion > 1.0);
  CHECK(s.escaping_mass_bound < 0.5 * s.X.length());
}

TEST_CASE("full-branch property") {
  std::vector<InducingScheme> schemes = {golden_scheme()};
  schemes.push_back(extendible_return_scheme(load_map("quad4"), quad_x(), 0.5, 12));
  schemes.push_back(extendible_return_scheme(load_map("cheb3"), {0.3, 0.4}, 0.5, 9));
  for (const auto& s : schemes)
    for (std::size_t i = 0; i < s.branches.size(); ++i) {
      const auto& b = s.branches[i];
      const Interval img = hull(induced_apply(s, i, b.domain.lo), induced_apply(s, i, b.domain.hi));
      CHECK(std::abs(img.lo - s.X.lo) + std::abs(img.hi - s.X.hi) <= 1e-9 * s.X.length());
    }
}

TEST_CASE("coverage improves with T") {
  const auto q = load_map("quad4");
  double prev = q.domain().length();
  for (std::size_t T = 2; T <= 12; T += 2) {
    const auto s = extendible_return_scheme(q, quad_x(), 0.5, T);
    CHECK(s.escaping_mass_bound <= prev + 1e-15);
    prev = s.escaping_mass_bound;
    for (std::size_t n = 1; n <= T; ++n) CHECK(s.escaping_by_time[n] <= s.escaping_by_time[n - 1]);
  }
  const auto t = load_map("tent2");
  prev = 1.0;
  for (std::size_t T = 1; T <= 8; ++T) {
    const auto s = first_return_scheme(build_tower(t, 2), {0, parse_word("L", t)}, T);
    CHECK(s.escaping_mass_bound <= prev + 1e-15);
    prev = s.escaping_mass_bound;
  }
}

TEST_CASE("koebe bound") {
  CHECK(koebe_bound(0.5) == doctest::Approx(9.0));
  CHECK(koebe_bound(1.0) == doctest::Approx(4.0));
  CHECK(std::isinf(koebe_bound(0.0)));
}

TEST_CASE("corrupted scheme fails validation with the overlap") {
  auto s = golden_scheme();
  s.branches[1].domain.lo = 0.4;  // now overlaps [0,4/9]
  const auto r = validate_scheme(s);
  CHECK_FALSE(r.pass);
  REQUIRE(r.overlaps.size() == 1);
  CHECK(r.overlaps[0].overlap.approx_equal({0.4, 4.0 / 9}, 1e-14));
  CHECK_FALSE(r.branches[1].onto);
}

TEST_CASE("scheme csv") {
  std::ostringstream out;
  write_scheme_csv(out, golden_scheme());
  CHECK(out.str() ==
        "i,lo,hi,tau,inf_DF,sup_DF,ext_lo,ext_hi\n"
        "0,0,0.444444444,1,1.5,1.5,0,0.444444444\n"
        "1,0.444444444,0.666666667,2,3,3,0.444444444,0.666666667\n");
}

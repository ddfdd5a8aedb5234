#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "itf/errors.hpp"
#include "itf/thermo.hpp"

using namespace itf;
using fixtures::family;

namespace {

const double kGolden = std::log((1 + std::sqrt(5.0)) / 2);

std::shared_ptr<const BranchFamily> two_branch(double p, double q) {
  return fixtures::share(synthetic_family({1, 1}, {p, q}));
}

}  // namespace

TEST_CASE("induced weights on the golden scheme") {
  const auto s = fixtures::golden();
  const auto m1 = induced_potential(s, 1.0, 0.0);
  REQUIRE(m1.size() == 2);
  CHECK(m1.w_lo[0] == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(m1.w_lo[1] == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(m1.w_hi[0] - m1.w_lo[0] <= 1e-15);
  CHECK(m1.w_hi[1] - m1.w_lo[1] <= 1e-15);
  CHECK(m1.tail_hi == 0.0);

  const auto m0 = induced_potential(s, 0.0, 0.0);
  CHECK(m0.w_lo[0] == 1.0);
  CHECK(m0.w_hi[1] == 1.0);
}

TEST_CASE("weight brackets on the quadratic scheme stay within the distortion constant") {
  const auto m = induced_potential(fixtures::quad(), 1.0, 0.1);
  CHECK(m.distortion() == doctest::Approx(9.0));
  REQUIRE(m.size() > 20);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m.w_lo[i] <= m.w_hi[i]);
    CHECK(m.w_hi[i] / m.w_lo[i] <= 9.0);
  }
  // negative t flips the bracket orientation but keeps lo <= hi
  const auto neg = induced_potential(fixtures::quad(), -0.5, 0.0);
  for (std::size_t i = 0; i < neg.size(); ++i) CHECK(neg.w_lo[i] <= neg.w_hi[i]);
  CHECK(neg.divergent());
}

TEST_CASE("partition function examples") {
  const auto m = induced_potential(fixtures::golden(), 1.0, 0.0);
  const auto z1 = partition_function(m, 1, 0);
  CHECK(z1.lo == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(z1.hi == doctest::Approx(2.0 / 3).epsilon(1e-12));
  const auto z2 = partition_function_total(m, 2);
  CHECK(z2.lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(z2.hi == doctest::Approx(1.0).epsilon(1e-12));
  const auto none = partition_function(m, 1, 7);
  CHECK(none.lo == 0.0);
  CHECK(none.hi == 0.0);
  CHECK_THROWS_AS(partition_function(m, 0, 0), DomainError);
}

TEST_CASE("first-passage partition function") {
  const auto m = induced_potential(fixtures::golden(), 1.0, 0.0);
  CHECK(partition_function_star(m, 1, 0).mid() == doctest::Approx(2.0 / 3));
  const double p = 0.3, q = 0.7;
  const auto w = shifted_model(two_branch(p, q), 0.0);
  CHECK(partition_function_star(w, 2, 0).mid() == doctest::Approx(p * q));
  CHECK(partition_function_star(w, 3, 0).mid() == doctest::Approx(p * q * q));
}

TEST_CASE("periodic-point enumeration agrees with brute force on the quadratic scheme") {
  const auto m = induced_potential(fixtures::quad(), 1.0, 0.0);
  // Z_1 sums one fixed point per branch, each weight within its bracket
  const auto z = partition_function_total(m, 1);
  CHECK(z.lo >= m.kept_lo * (1 - 1e-12));
  CHECK(z.lo <= m.kept_hi * (1 + 1e-12));
  const auto zb = partition_function(m, 2, 3);
  CHECK(zb.lo >= m.w_lo[3] * m.kept_lo * (1 - 1e-12));
  CHECK(zb.lo <= m.w_hi[3] * m.kept_hi * (1 + 1e-12));
}

TEST_CASE("Gurevich pressure examples") {
  const auto g1 = gurevich_pressure(induced_potential(fixtures::golden(), 1.0, 0.0), 6);
  CHECK(std::abs(g1.lower) <= 1e-12);
  CHECK(std::abs(g1.upper) <= 1e-12);
  CHECK(g1.width() <= 1e-12);
  const auto g0 = gurevich_pressure(induced_potential(fixtures::golden(), 0.0, 0.0), 6);
  CHECK(g0.mid() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (double t : {-1.0, 0.3, 1.0, 2.0}) {
    const auto p = gurevich_pressure(induced_potential(fixtures::trivial("tent2"), t, 0.0), 6);
    CHECK(p.lower == doctest::Approx((1 - t) * std::log(2.0)).epsilon(1e-12));
    CHECK(p.upper == doctest::Approx((1 - t) * std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("divergent weight sums are flagged") {
  const auto fam = fixtures::share(geometric_family(0.5, 10));
  const auto p = gurevich_pressure(shifted_model(fam, -1.0), 4);
  CHECK(p.infinite);
  CHECK(p.upper == kInf);
  CHECK(!gurevich_pressure(shifted_model(fam, -0.5), 4).infinite);
}

TEST_CASE("pressure against the shift") {
  const auto fam = family(fixtures::golden(), 1.0);
  const auto scan = pressure_vs_shift(fam, {0.0, 0.1, 0.2, 1.0, 10.0, 100.0});
  CHECK(scan.monotone);
  CHECK(scan.rows[0].P.mid() == doctest::Approx(0.0));
  const double expect = std::log(2.0 / 3 * std::exp(-0.1) + 1.0 / 3 * std::exp(-0.2));
  CHECK(scan.rows[1].P.mid() == doctest::Approx(expect).epsilon(1e-12));
  for (std::size_t k = 1; k < scan.rows.size(); ++k) CHECK(scan.rows[k].P.mid() < scan.rows[k - 1].P.mid());
  CHECK(scan.rows.back().P.mid() < -90);

  const auto at_golden = pressure_vs_shift(family(fixtures::golden(), 0.0), {kGolden});
  CHECK(at_golden.rows[0].P.lower <= 1e-12);
  CHECK(at_golden.rows[0].P.upper >= -1e-12);
  CHECK_THROWS_AS(pressure_vs_shift(fam, {0.2, 0.1}), DomainError);
}

TEST_CASE("p* and the discriminant") {
  const auto finite = p_star_discriminant(family(fixtures::golden(), 1.0), {-1.0, 0.0, 1.0});
  CHECK(finite.p_star_flag == Flag::minus_inf);
  CHECK(finite.discriminant_flag == Flag::plus_inf);

  const auto geo = p_star_discriminant(fixtures::share(geometric_family(0.5, 30)), {-2.0, -1.0, 0.0, 1.0});
  CHECK(geo.p_star_flag == Flag::finite);
  CHECK(geo.p_star == doctest::Approx(std::log(0.5)).epsilon(1e-9));
  CHECK(geo.discriminant_flag == Flag::plus_inf);

  const auto pw = p_star_discriminant(fixtures::share(power_family(2.0, 40, false)), {-1.0, -0.5, 0.5});
  CHECK(pw.p_star == 0.0);
  CHECK(pw.discriminant_flag == Flag::finite);
  CHECK(pw.discriminant == doctest::Approx(std::log(std::numbers::pi * std::numbers::pi / 6)).epsilon(1e-9));

  const auto off_grid = p_star_discriminant(fixtures::share(geometric_family(0.5, 30)), {0.0, 1.0});
  CHECK(off_grid.p_star_flag == Flag::inconclusive);
}

TEST_CASE("recurrence trends") {
  const auto g = induced_potential(fixtures::golden(), 1.0, 0.0);
  const auto r = recurrence_check(g, 1.0, 6);
  REQUIRE(r.partial_sums.size() == 6);
  for (std::size_t n = 0; n < 6; ++n) CHECK(r.partial_sums[n] == doctest::Approx(n + 1.0));
  CHECK(r.recurrent);
  CHECK(r.positive_recurrent);
  CHECK(r.heuristic);

  const auto st = recurrence_check(shifted_model(two_branch(0.4, 0.6), 0), 1.0, 6);
  CHECK(st.partial_sums.back() == doctest::Approx(6.0));
  CHECK(st.recurrent);

  const auto sub = recurrence_check(shifted_model(two_branch(0.3, 0.6), 0), 1.0, 6);
  CHECK(!sub.recurrent);
  CHECK(sub.partial_sums.back() < 0.9 / 0.1);
}

TEST_CASE("tail classification") {
  std::vector<double> geo, pw;
  for (int n = 1; n <= 12; ++n) geo.push_back(std::pow(0.5, n));
  for (int n = 1; n <= 20; ++n) pw.push_back(std::pow(n, -3.0));
  const auto e = tail_classify(geo);
  CHECK(e.kind == DecayKind::exponential);
  CHECK(e.rate == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  CHECK(e.r2 == doctest::Approx(1.0));
  const auto p = tail_classify(pw);
  CHECK(p.kind == DecayKind::polynomial);
  CHECK(std::abs(p.rate - 3) <= 0.01);
  std::vector<double> finite(20, 0.0);
  finite[0] = 2.0 / 3;
  finite[1] = 1.0 / 3;
  const auto f = tail_classify(finite);
  CHECK(f.kind == DecayKind::exponential);
  CHECK(f.finite_support);
  CHECK(tail_classify({0.5, 0.25, 0.125}).kind == DecayKind::inconclusive);
  CHECK(tail_classify({}).kind == DecayKind::inconclusive);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> noise;
  for (int n = 0; n < 20; ++n) noise.push_back(u(rng));
  CHECK(tail_classify(noise).kind == DecayKind::inconclusive);
}

TEST_CASE("almost subadditivity on three fixtures") {
  const std::vector<ThermoModel> models = {
      induced_potential(fixtures::golden(), 0.5, 0.2),
      induced_potential(fixtures::trivial("markov_full"), 0.7, 0.0),
      induced_potential(fixtures::quad(), 0.95, 0.05),
  };
  for (const auto& m : models) {
    std::vector<Bracket> logz(9);
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto z = partition_function_total(m, n);
      logz[n] = {std::log(z.lo), std::log(z.hi)};
    }
    for (std::size_t a = 1; a < 8; ++a)
      for (std::size_t b = 1; a + b <= 8; ++b)
        CHECK(logz[a].lo + logz[b].lo <= logz[a + b].hi + m.log_B() + 1e-12);
  }
}

TEST_CASE("base independence of the pressure bracket") {
  const auto m = induced_potential(fixtures::quad(), 1.0, 0.0);
  const auto all = gurevich_pressure(m, 4);
  for (std::size_t base : {0u, 5u, 40u}) {
    const auto p = gurevich_pressure(m, 4, base);
    CHECK(p.lower <= all.upper + 1e-12);
    CHECK(all.lower <= p.upper + 1e-12);
    CHECK(p.lower <= p.upper);
  }
}

TEST_CASE("constant weights give full-shift exactness") {
  const std::vector<double> w = {0.1, 0.25, 0.4, 0.05};
  const auto m = shifted_model(fixtures::share(synthetic_family({1, 2, 3, 1}, w)), 0.0);
  const double W = 0.8;
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto z = partition_function_total(m, n);
    CHECK(z.lo == doctest::Approx(std::pow(W, n)).epsilon(1e-13));
    CHECK(z.hi == doctest::Approx(std::pow(W, n)).epsilon(1e-13));
  }
  const auto P = gurevich_pressure(m, 6);
  CHECK(std::abs(P.lower - std::log(W)) <= 1e-12);
  CHECK(std::abs(P.upper - std::log(W)) <= 1e-12);
}

TEST_CASE("geometric families: negative p* and exponential tails together") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> theta(0.2, 0.8);
  for (int k = 0; k < 25; ++k) {
    const double th = theta(rng);
    const auto fam = fixtures::share(geometric_family(th, 40));
    const auto d = p_star_discriminant(fam, {-3.0, -2.0, -1.0, -0.1, 0.0});
    std::vector<double> masses;
    for (const auto& b : fam->branches) masses.push_back(std::exp(b.log_lo));
    const auto tf = tail_classify(masses);
    CHECK(d.p_star < 0);
    CHECK(tf.kind == DecayKind::exponential);
    CHECK(d.p_star == doctest::Approx(std::log(th)).epsilon(1e-9));
  }
}

TEST_CASE("tail envelopes") {
  const auto g = TailEnvelope::geometric(1.0, 0.5, 3, true);
  CHECK(g.upper(0.0) == doctest::Approx(0.25));  // 1/8 + 1/16 + ...
  CHECK(!g.finite(std::log(0.5)));
  const auto p = TailEnvelope::power(1.0, 2.0, 1, true);
  CHECK(p.upper(0.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-12));
  double direct = 0;
  for (int n = 1; n < 200000; ++n) direct += std::exp(-0.01 * n) / (double(n) * n);
  CHECK(p.upper(0.01) == doctest::Approx(direct).epsilon(1e-10));
  const auto q = TailEnvelope::power(1.0, 1.5, 5, true);
  double d2 = 0;
  for (int n = 5; n < 400000; ++n) d2 += std::exp(-0.001 * n) * std::pow(n, -1.5);
  CHECK(q.upper(0.001) == doctest::Approx(d2).epsilon(1e-9));
  CHECK(TailEnvelope::unbounded(4).upper(3.0) == kInf);
  CHECK(TailEnvelope{}.upper(-5.0) == 0.0);
}

TEST_CASE("CSV emitters") {
  std::ostringstream a, b, c;
  ShiftScan scan;
  scan.rows.push_back({0.5, PressureBracket{-0.25, 0.125, 0, 0, false}});
  write_shift_csv(a, scan);
  CHECK(a.str() == "S,P_lower,P_upper\n0.5,-0.25,0.125\n");
  write_partition_csv(b, {{1, 2}, {0.5, 1.0 / 3}});
  CHECK(b.str() == "n,Z_lower,Z_upper\n1,1,2\n2,0.5,0.333333333\n");
  write_mass_csv(c, {0.75, 0.25});
  CHECK(c.str() == "n,mass\n1,0.75\n2,0.25\n");
}

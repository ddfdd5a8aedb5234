#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "itf/errors.hpp"
#include "itf/hofbauer.hpp"
#include "itf/map_spec.hpp"

using namespace itf;

namespace {

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

// reachability by Floyd-Warshall over non-frontier nodes; components are
// classes of mutual reachability with a cycle through them
std::vector<std::vector<std::size_t>> oracle_closed_components(const HofbauerTower& t) {
  const std::size_t n = t.nodes.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  std::vector<bool> leaks_out(n, false);
  for (const auto& e : t.edges) {
    if (t.nodes[e.to].frontier) leaks_out[e.from] = true;
    else reach[e.from][e.to] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] || t.nodes[i].frontier || !reach[i][i]) continue;
    std::vector<std::size_t> comp;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j] && reach[j][i]) {
        comp.push_back(j);
        seen[j] = true;
      }
    // closed: everything reachable from it stays in it, and nothing leaks to stubs
    bool closed = true;
    for (std::size_t v : comp) {
      if (leaks_out[v]) closed = false;
      for (std::size_t w = 0; w < n; ++w)
        if (reach[v][w] && std::find(comp.begin(), comp.end(), w) == comp.end()) closed = false;
    }
    if (closed) out.push_back(comp);
  }
  return out;
}

}  // namespace

TEST_CASE("tower examples") {
  const auto tent = build_tower(load_map("tent2"), 5);
  CHECK(tent.nodes.size() == 1);
  CHECK(tent.edges.size() == 2);
  CHECK(tent.complete);

  const auto g = load_map("markov_golden");
  const auto gold = build_tower(g, 5);
  REQUIRE(gold.nodes.size() == 2);
  CHECK(gold.edges.size() == 3);
  CHECK(gold.complete);
  CHECK(gold.nodes[1].interval.approx_equal({0, 2.0 / 3}, 1e-15));
  CHECK(gold.nodes[1].level == 1);
  CHECK(to_string(gold.nodes[1].witnesses.front(), g) == "B");
  auto has_edge = [&](std::size_t a, const char* l, std::size_t b) {
    return std::any_of(gold.edges.begin(), gold.edges.end(), [&](const TowerEdge& e) {
      return e.from == a && e.to == b && g.branch(e.letter).label == l;
    });
  };
  CHECK(has_edge(0, "A", 0));
  CHECK(has_edge(0, "B", 1));
  CHECK(has_edge(1, "A", 0));

  const auto quad = build_tower(load_map("quad4"), 5);
  CHECK(quad.nodes.size() == 1);
  CHECK(quad.complete);
}

TEST_CASE("generic quadratic towers do not complete") {
  const auto t = build_tower(load_map("quadratic:3.83"), 12);
  CHECK_FALSE(t.complete);
  CHECK(t.nodes.size() > 3);
  for (const auto& d : t.nodes) CHECK(d.level <= 13);
}

TEST_CASE("node cap") {
  CHECK_THROWS_AS(build_tower(load_map("quadratic:3.83"), 30, {3}), ResourceError);
  TowerOptions opt;
  opt.node_cap = 3;
  opt.throw_on_cap = false;
  const auto t = build_tower(load_map("quadratic:3.83"), 30, opt);
  CHECK(t.capped);
  CHECK_FALSE(t.complete);
  CHECK(t.nodes.size() == 3);
}

TEST_CASE("paths from the base count cylinders") {
  auto names = builtin_map_names();
  names.push_back("quadratic:3.83");
  names.push_back("tent:1.7");
  for (const auto& name : names) {
    const auto f = load_map(name);
    const auto t = build_tower(f, 10);
    const auto counts = path_counts(t, 10);
    auto cyl = branch_cylinders(f);
    for (std::size_t n = 1; n <= 10; ++n) {
      if (n > 1) cyl = refine_step(f, cyl);
      CHECK_MESSAGE(counts[n] == static_cast<double>(cyl.size()), name << " n=" << n);
    }
  }
}

TEST_CASE("markov property of edges") {
  for (const char* name : {"markov_golden", "absorbing", "quadratic:3.83", "cheb3"}) {
    const auto f = load_map(name);
    const auto t = build_tower(f, 8);
    for (std::size_t v : t.real_nodes()) {
      double succ_len = 0, image_len = 0;
      for (const auto& e : t.edges)
        if (e.from == v) succ_len += t.nodes[e.to].interval.length();
      for (const auto& b : f.branches())
        if (auto cut = intersect(t.nodes[v].interval, b.interval, kSnapTol))
          image_len += b.apply(*cut).length();
      CHECK(succ_len == doctest::Approx(image_len).epsilon(1e-10));
    }
  }
}

TEST_CASE("markov maps give complete towers with breakpoint-orbit endpoints") {
  for (const char* name : {"markov_golden", "markov_full", "absorbing", "period2"}) {
    const auto f = load_map(name);
    const auto t = build_tower(f, 6);
    CHECK(t.complete);
    std::vector<double> pts;
    for (const auto& b : f.branches()) {
      pts.push_back(b(b.interval.lo));
      pts.push_back(b(b.interval.hi));
      pts.push_back(b.interval.lo);
      pts.push_back(b.interval.hi);
    }
    for (const auto& d : t.nodes) {
      auto near = [&](double x) {
        return std::any_of(pts.begin(), pts.end(), [&](double p) { return std::abs(p - x) < 1e-12; });
      };
      CHECK(near(d.interval.lo));
      CHECK(near(d.interval.hi));
    }
  }
}

TEST_CASE("closed primitive subgraph") {
  const auto gold = closed_primitive_subgraph(build_tower(load_map("markov_golden"), 5));
  REQUIRE(gold.closed);
  CHECK(*gold.closed == std::vector<std::size_t>{0, 1});
  CHECK(gold.components.size() == 1);
  CHECK(gold.components[0].period == 1);

  const auto tent = closed_primitive_subgraph(build_tower(load_map("tent2"), 5));
  REQUIRE(tent.closed);
  CHECK(*tent.closed == std::vector<std::size_t>{0});

  // [0,1/2] absorbs; the base keeps a self loop but leaks into it
  const auto abs_t = build_tower(load_map("absorbing"), 6);
  const auto ab = closed_primitive_subgraph(abs_t);
  REQUIRE(ab.closed);
  REQUIRE(ab.closed->size() == 1);
  CHECK(abs_t.nodes[ab.closed->front()].interval.approx_equal({0, 0.5}, 1e-15));
  REQUIRE(ab.components.size() == 2);
  CHECK(std::count_if(ab.components.begin(), ab.components.end(),
                      [](const TowerComponent& c) { return !c.closed; }) == 1);

  // two intervals swapped by f: closed but of period 2
  const auto p2t = build_tower(load_map("period2"), 6);
  const auto p2 = closed_primitive_subgraph(p2t);
  REQUIRE(p2.closed);
  CHECK(p2.closed->size() == 2);
  CHECK(p2.components.size() == 1);
  CHECK(p2.components[0].period == 2);
}

TEST_CASE("closed components agree with a reachability oracle") {
  auto names = builtin_map_names();
  names.push_back("quadratic:3.83");
  for (const auto& name : names) {
    const auto t = build_tower(load_map(name), 9);
    const auto sub = closed_primitive_subgraph(t);
    const auto oracle = oracle_closed_components(t);
    std::vector<std::vector<std::size_t>> got;
    for (const auto& c : sub.components)
      if (c.closed) got.push_back(c.nodes);
    std::sort(got.begin(), got.end());
    auto want = oracle;
    std::sort(want.begin(), want.end());
    CHECK_MESSAGE(got == want, name);
    CHECK(sub.closed.has_value() == (want.size() == 1));
  }
}

TEST_CASE("dot output") {
  const auto gold = tower_to_dot(build_tower(load_map("markov_golden"), 5));
  CHECK(count_of(gold, ":[") == 2);
  CHECK(count_of(gold, "->") == 3);
  CHECK(gold.find("n1 [label=\"L1:[0,0.666666667]\"") != std::string::npos);
  CHECK(count_of(gold, "fillcolor") == 2);

  const auto tent = tower_to_dot(build_tower(load_map("tent2"), 5));
  CHECK(count_of(tent, ":[") == 1);
  CHECK(count_of(tent, "->") == 2);

  const auto empty = tower_to_dot(build_tower(load_map("markov_golden"), 0));
  CHECK(count_of(empty, ":[") == 1);
  CHECK(count_of(empty, "->") == 1);  // base self loop; the stub is not drawn
}

TEST_CASE("json dump") {
  const auto j = nlohmann::json::parse(tower_to_json(build_tower(load_map("markov_golden"), 5)));
  CHECK(j["nodes"].size() == 2);
  CHECK(j["edges"].size() == 3);
  CHECK(j["complete"] == true);
  CHECK(j["nodes"][1]["hi"].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-9));
}

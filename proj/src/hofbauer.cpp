#include "itf/hofbauer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "itf/errors.hpp"
#include "itf/format.hpp"

namespace itf {

std::optional<std::size_t> HofbauerTower::find(const Interval& j, double tol) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].interval.approx_equal(j, tol)) return i;
  return std::nullopt;
}

std::vector<std::size_t> HofbauerTower::real_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!nodes[i].frontier) out.push_back(i);
  return out;
}

std::size_t HofbauerTower::edge_count() const {
  return std::count_if(edges.begin(), edges.end(), [&](const TowerEdge& e) {
    return !nodes[e.from].frontier && !nodes[e.to].frontier;
  });
}

namespace {

// identification table keyed by left endpoint
class NodeIndex {
 public:
  std::optional<std::size_t> find(const Interval& j, const std::vector<TowerDomain>& nodes) const {
    for (auto it = by_lo_.lower_bound(j.lo - kIdentifyTol);
         it != by_lo_.end() && it->first <= j.lo + kIdentifyTol; ++it)
      if (nodes[it->second].interval.approx_equal(j, kIdentifyTol)) return it->second;
    return std::nullopt;
  }
  void add(const Interval& j, std::size_t id) { by_lo_.emplace(j.lo, id); }

 private:
  std::multimap<double, std::size_t> by_lo_;
};

}  // namespace

HofbauerTower build_tower(const IntervalMap& f, std::size_t R, TowerOptions opt) {
  HofbauerTower t{f, {}, {}, R, false, false};
  NodeIndex index;
  t.nodes.push_back({f.domain(), 0, {Word{}}, false});
  index.add(f.domain(), 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    const TowerDomain d = t.nodes[id];
    for (std::size_t b = 0; b < f.size(); ++b) {
      const auto& br = f.branch(b);
      const auto cut = intersect(d.interval, br.interval, kSnapTol);
      if (!cut) continue;
      const Interval img = br.apply(*cut);
      Word w = d.witnesses.front();
      w.letters.push_back(static_cast<Letter>(b));
      std::size_t to;
      if (auto hit = index.find(img, t.nodes)) {
        to = *hit;
        auto& wit = t.nodes[to].witnesses;
        if (wit.size() < opt.max_witnesses) wit.push_back(std::move(w));
      } else {
        if (t.nodes.size() >= opt.node_cap) {
          t.capped = true;
          if (opt.throw_on_cap) throw ResourceError("tower node cap exceeded", t.nodes.size());
          return t;
        }
        to = t.nodes.size();
        const bool stub = d.level + 1 > R;
        t.nodes.push_back({img, d.level + 1, {std::move(w)}, stub});
        index.add(img, to);
        if (!stub) queue.push_back(to);
      }
      t.edges.push_back({id, static_cast<Letter>(b), to});
    }
  }
  t.complete = std::none_of(t.nodes.begin(), t.nodes.end(),
                            [](const TowerDomain& n) { return n.frontier; });
  return t;
}

PrimitiveSubgraph closed_primitive_subgraph(const HofbauerTower& t) {
  const std::size_t n = t.nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : t.edges) adj[e.from].push_back(e.to);

  // Tarjan, iterative
  std::vector<long> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack, comp_of(n, 0);
  std::vector<std::vector<std::size_t>> comps;
  long counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0 || t.nodes[root].frontier) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < adj[v].size()) {
        const std::size_t w = adj[v][i++];
        if (t.nodes[w].frontier) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp_of[w] = comps.size();
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }

  PrimitiveSubgraph out;
  out.truncation_relative = !t.complete;
  std::vector<std::size_t> closed_ids;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    bool self_loop = false, leaves = false;
    for (std::size_t v : comp)
      for (std::size_t w : adj[v]) {
        if (w == v) self_loop = true;
        if (t.nodes[w].frontier || comp_of[w] != c) leaves = true;
      }
    if (comp.size() == 1 && !self_loop) continue;
    // period from BFS depths inside the component
    std::map<std::size_t, long> depth{{comp.front(), 0}};
    std::deque<std::size_t> q{comp.front()};
    std::size_t g = 0;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      for (std::size_t w : adj[v]) {
        if (t.nodes[w].frontier || comp_of[w] != c) continue;
        auto it = depth.find(w);
        if (it == depth.end()) {
          depth[w] = depth[v] + 1;
          q.push_back(w);
        } else {
          g = std::gcd(g, static_cast<std::size_t>(std::abs(depth[v] + 1 - it->second)));
        }
      }
    }
    out.components.push_back({comp, !leaves, g});
    if (!leaves) closed_ids.push_back(out.components.size() - 1);
  }
  if (closed_ids.size() == 1) out.closed = out.components[closed_ids.front()].nodes;
  return out;
}

std::vector<double> path_counts(const HofbauerTower& t, std::size_t n_max) {
  std::vector<double> counts{1.0};
  std::vector<double> cur(t.nodes.size(), 0.0);
  cur[0] = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::vector<double> next(t.nodes.size(), 0.0);
    for (const auto& e : t.edges) next[e.to] += cur[e.from];
    counts.push_back(std::accumulate(next.begin(), next.end(), 0.0));
    cur = std::move(next);
  }
  return counts;
}

std::string tower_to_dot(const HofbauerTower& t) {
  const auto sub = closed_primitive_subgraph(t);
  std::vector<bool> in_e(t.nodes.size(), false);
  if (sub.closed)
    for (std::size_t v : *sub.closed) in_e[v] = true;
  std::ostringstream out;
  out << "digraph tower {\n";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& d = t.nodes[i];
    if (d.frontier) continue;
    out << "  n" << i << " [label=\"L" << d.level << ":[" << fmt(d.interval.lo) << ","
        << fmt(d.interval.hi) << "]\"";
    if (in_e[i]) out << ", style=filled, fillcolor=lightblue";
    out << "];\n";
  }
  for (const auto& e : t.edges) {
    if (t.nodes[e.from].frontier || t.nodes[e.to].frontier) continue;
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << t.map.branch(e.letter).label
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string tower_to_json(const HofbauerTower& t) {
  nlohmann::json j;
  j["map"] = t.map.name();
  j["R"] = t.R;
  j["complete"] = t.complete;
  j["nodes"] = nlohmann::json::array();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& d = t.nodes[i];
    nlohmann::json wit = nlohmann::json::array();
    for (const auto& w : d.witnesses) wit.push_back(to_string(w, t.map));
    j["nodes"].push_back({{"id", i},
                          {"lo", round9(d.interval.lo)},
                          {"hi", round9(d.interval.hi)},
                          {"level", d.level},
                          {"frontier", d.frontier},
                          {"witnesses", wit}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& e : t.edges)
    j["edges"].push_back(
        {{"from", e.from}, {"letter", t.map.branch(e.letter).label}, {"to", e.to}});
  return j.dump(2);
}

}  // namespace itf

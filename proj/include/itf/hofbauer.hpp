#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "itf/interval_map.hpp"
#include "itf/symbolic.hpp"

namespace itf {

struct TowerDomain {
  Interval interval;
  std::size_t level = 0;        // shortest path length from the base
  std::vector<Word> witnesses;  // words w with f^n(C_w) = interval; the BFS path first
  bool frontier = false;        // first reached past the truncation, never expanded
};

struct TowerEdge {
  std::size_t from = 0;
  Letter letter = 0;
  std::size_t to = 0;
};

struct HofbauerTower {
  IntervalMap map;
  std::vector<TowerDomain> nodes;  // nodes[0] is the base
  std::vector<TowerEdge> edges;
  std::size_t R = 0;
  bool complete = false;  // no frontier stubs: the closed-up graph is the whole tower
  bool capped = false;    // stopped by the node cap

  std::optional<std::size_t> find(const Interval& j, double tol = kIdentifyTol) const;
  std::vector<std::size_t> real_nodes() const;  // non-frontier
  std::size_t edge_count() const;               // edges between non-frontier nodes
};

struct TowerOptions {
  std::size_t node_cap = 100000;
  bool throw_on_cap = true;
  std::size_t max_witnesses = 4;
};

// BFS from the base. Nodes of level <= R are expanded; images first seen
// beyond R become frontier stubs.
HofbauerTower build_tower(const IntervalMap& f, std::size_t R, TowerOptions opt = {});

struct TowerComponent {
  std::vector<std::size_t> nodes;
  bool closed = false;      // no edge leaves it (edges into stubs count as leaving)
  std::size_t period = 0;   // gcd of cycle lengths; 1 means aperiodic
};

struct PrimitiveSubgraph {
  std::optional<std::vector<std::size_t>> closed;  // the unique closed component
  std::vector<TowerComponent> components;          // every nontrivial component
  bool truncation_relative = false;                // tower incomplete
};

PrimitiveSubgraph closed_primitive_subgraph(const HofbauerTower& t);

// number of length-n paths from the base, n = 0..n_max
std::vector<double> path_counts(const HofbauerTower& t, std::size_t n_max);

std::string tower_to_dot(const HofbauerTower& t);
std::string tower_to_json(const HofbauerTower& t);

}  // namespace itf

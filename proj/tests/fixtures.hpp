#pragma once

#include <memory>

#include "itf/inducing.hpp"
#include "itf/map_spec.hpp"
#include "itf/thermo.hpp"

namespace fixtures {

inline std::shared_ptr<const itf::InducingScheme> share(itf::InducingScheme s) {
  return std::make_shared<const itf::InducingScheme>(std::move(s));
}

// first return to the A-cylinder lifted over the golden tower
inline std::shared_ptr<const itf::InducingScheme> golden(std::size_t T = 10) {
  const auto g = itf::load_map("markov_golden");
  return share(itf::first_return_scheme(itf::build_tower(g, 5), {0, itf::parse_word("A", g)}, T));
}

// tau = 1 on every branch of a full-branch map
inline std::shared_ptr<const itf::InducingScheme> trivial(const std::string& name) {
  const auto f = itf::load_map(name);
  return share(itf::first_return_scheme(itf::build_tower(f, 2), {0, itf::Word{}}, 1));
}

// first delta-extendible returns to the 3-cylinder of quad4 containing 0.3
inline std::shared_ptr<const itf::InducingScheme> quad(std::size_t T = 14, double delta = 0.5) {
  const auto q = itf::load_map("quad4");
  const auto X = itf::cylinder_of(q, itf::itinerary(q, 0.3, 3))->interval;
  return share(itf::extendible_return_scheme(q, X, delta, T));
}

inline std::shared_ptr<const itf::BranchFamily> family(std::shared_ptr<const itf::InducingScheme> s,
                                                       double t) {
  return std::make_shared<const itf::BranchFamily>(itf::make_family(std::move(s), t));
}

inline std::shared_ptr<const itf::BranchFamily> share(itf::BranchFamily f) {
  return std::make_shared<const itf::BranchFamily>(std::move(f));
}

}  // namespace fixtures

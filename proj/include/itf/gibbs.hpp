#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "itf/thermo.hpp"

namespace itf {

struct GibbsSolution {
  std::shared_ptr<const BranchFamily> family;
  double t = 0.0;
  double S = 0.0;
  std::size_t N = 0;       // kept branches
  double lambda = 1.0;     // leading eigenvalue of the truncated operator
  Bracket lambda_bracket;  // [sum w-, sum w+] including the tail
  std::vector<double> mass;       // mu_F(X_i)
  std::vector<double> conformal;  // m(X_i), summing to 1
  std::vector<double> density;    // rho on X_i, with sum rho_i m_i = 1
  std::vector<double> transition; // row-major P_ij, empty for the rank-one solve
  std::vector<double> log_deriv;  // log|DF| on X_i averaged against the transition
  bool rank_one = true;
  double residual = 0.0;          // relative eigen-residual
  std::size_t iterations = 0;
  double dropped_weight = 0.0;    // tail weight over lambda
  double log_lambda() const;
  double next(std::size_t i, std::size_t j) const;  // P_ij
  double cylinder_mass(std::span<const std::size_t> word) const;
};

struct GibbsOptions {
  std::size_t refine_cap = 1500;  // largest N for the two-symbol refinement
  double residual_tol = 1e-12;
  std::size_t max_iterations = 20000;
};

GibbsSolution solve_gibbs(const ThermoModel& m, std::optional<std::size_t> N = std::nullopt,
                          GibbsOptions opt = {});

struct RatioCheck {
  double K = 1.0;
  std::size_t cylinders = 0;
  bool sampled = false;
};
RatioCheck gibbs_ratio_check(const GibbsSolution& sol, std::size_t depth, std::uint64_t seed = 1);

// mu(A) for the projected measure; lower/upper from the cylinder depth reached
std::vector<Bracket> project_measure(const GibbsSolution& sol, const std::vector<Interval>& targets,
                                     std::size_t depth = 12);

bool tau_integrable(const BranchFamily& fam, double S);

struct Abramov {
  double tau_mean = 0.0;
  double lyap_F = 0.0;
  Bracket lyap_F_bracket;
  double h_F = 0.0;
  double h = 0.0;
  double lyap = 0.0;
  double free_energy = 0.0;
};
Abramov abramov_quantities(const GibbsSolution& sol);

// max over periodic orbits of period <= max_period of -t times their exponent
double zero_entropy_bound(const IntervalMap& f, double t, std::size_t max_period = 8);

struct ShiftSolveOptions {
  std::size_t n_max = 6;
  double S_limit = 256.0;
  std::size_t zero_entropy_period = 8;
};

enum class ShiftSide { solved, above, below };  // above: only P >= S_star.hi is known

struct EquilibriumResult {
  Bracket S_star;
  ShiftSide side = ShiftSide::solved;
  GibbsSolution solution;
  PressureBracket at_mid;
  double zero_entropy = -kInf;
};
EquilibriumResult equilibrium_shift_solve(std::shared_ptr<const BranchFamily> family, double tol,
                                          ShiftSolveOptions opt = {});

void write_gibbs_json(std::ostream& out, const GibbsSolution& sol);
// every kept word up to the given length, or as many as fit under the cap
void write_cylinder_mass_csv(std::ostream& out, const GibbsSolution& sol, std::size_t depth,
                             std::size_t cap = 100'000);

}  // namespace itf

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cara/oracles.hpp"

namespace cara {

struct CaraProblem {
  oracles::Lmo* oracle = nullptr;
  std::vector<double> u;   // target point
  double p = 2.0;          // norm parameter, finite, >= 2
  double radius = 1.0;     // every vertex has |v|_p <= radius
  double epsilon = 0.1;
};

struct CombinationEntry {
  int vertex_id = -1;
  double weight = 0.0;
};

struct SparseCombination {
  std::vector<CombinationEntry> entries;  // consolidated, first-seen order
  double residual_norm = 0.0;
  double p = 2.0;
  long iterations = 0;
  long oracle_calls = 0;
  double total_mass = 0.0;  // 1 for the plain solver, 2(1 - 2^-beta) boosted
};

struct SolveOptions {
  // Fail with convergence_error if the final residual exceeds epsilon
  // (for callers asserting the target lies in the hull).
  bool assert_membership = false;
  // Stop as soon as a periodic residual check passes.
  bool early_exit = true;
  // Replaces the ceil(4 (p-1) radius^2 / eps^2) iteration budget.
  std::optional<long> iteration_override;
  // Residual checks run every this many iterations; 0 means ceil(T/16).
  long checkpoint_interval = 0;
  // Adds checkpoints at t = 1, 2, 4, 8, ... in addition to the interval.
  bool geometric_checkpoints = false;
  // Extra caller hook at each checkpoint: (t, current weighted vertex
  // average); returning true stops the run.
  std::function<bool(long, const std::vector<double>&)> checkpoint;
};

// Iteration budget ceil(4 (p-1) radius^2 / eps^2).
long iteration_budget(double p, double radius, double epsilon);

// Mirror descent on the saddle-point dual of min_{x in simplex} |Vx - u|_p
// with the l_q map, q = p/(p-1): each iteration asks the oracle for the
// vertex minimizing y.v and averages the chosen vertices. The residual is
// at most OPT + epsilon, with OPT = 0 whenever u lies in the hull.
SparseCombination approx_caratheodory(const CaraProblem& prob, const SolveOptions& opts = {});

// Halving scheme for targets whose inner l_p ball of radius r is known to
// lie inside the polytope: ceil(log2(r/eps)) rounds at per-round precision
// r/2, round i weighted 2^{-(i-1)}. Total mass 2(1 - 2^-beta); requires
// vertices in the unit ball.
SparseCombination boosted_caratheodory(const CaraProblem& prob, double r);

// Boosted variant on the translated family v - u with target 0, then
// weights renormalized to sum to one. Requires r >= 2 eps.
SparseCombination recentered_caratheodory(const CaraProblem& prob, double r);

// |sum_j w_j v_j - u|_p with vertices resolved through the oracle;
// summation is sequential in entry order.
double lp_residual(const SparseCombination& comb, const oracles::Lmo& oracle,
                   std::span<const double> u, double p);

}  // namespace cara

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cara/submodular_oracle.hpp"

namespace cara::sfm {

struct MinNormResult {
  std::vector<double> x;  // point in the base polyhedron
  double wolfe_gap = 0.0;
  std::vector<int> minimizer_set;
  double minimizer_value = 0.0;
  long iterations = 0;
  long oracle_calls = 0;  // linear-minimization calls, gap checks included
  bool converged = false;
  std::vector<std::pair<long, double>> gap_history;  // (iteration, gap) at checkpoints
};

// Minimum-norm point in the base polyhedron via the sparse-combination
// solver with target 0 and p = 2 (vertex norms are bounded by sqrt(n)*F).
// The Wolfe gap x.(x - z) is evaluated at geometrically spaced checkpoints
// plus every ceil(iter_cap/64) iterations, one extra oracle call each;
// the run stops once it reaches gap_target.
MinNormResult min_norm_point(const SubmodularOracle& f, double gap_target, long iter_cap);

// Evaluates f on the n+1 ascending-order prefixes of x (empty set
// included) and returns the best, ties to the smaller set.
std::pair<std::vector<int>, double> fujishige_round(const std::vector<double>& x,
                                                    const SubmodularOracle& f);

enum class MinimizeMode { exact, additive };

// Exact mode needs integer-valued f and uses the additive slack 1/2;
// additive mode takes the slack k. Gap target (k/n)^2, iteration cap
// ceil(4 n F^2 (n/k)^4).
MinNormResult submodular_minimize(SubmodularOracle& f, MinimizeMode mode,
                                  double k_additive = 1.0);

}  // namespace cara::sfm

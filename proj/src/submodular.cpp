#include "cara/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cara/caratheodory.hpp"
#include "cara/errors.hpp"
#include "cara/oracles.hpp"
#include "cara/rng.hpp"

namespace cara::sfm {

SubmodularOracle::SubmodularOracle(int ground_size, EvalFn eval,
                                   std::optional<double> max_marginal)
    : n_(ground_size), raw_(std::move(eval)) {
  if (n_ < 1) throw input_error("submodular oracle: ground set must be nonempty");
  if (!raw_) throw input_error("submodular oracle: missing evaluation function");
  offset_ = raw_({});
  if (!std::isfinite(offset_)) throw numeric_error("submodular oracle: f(empty) is not finite");

  if (n_ <= 12) {
    // Spot-check f(S) + f(T) >= f(S u T) + f(S n T) on random pairs.
    Rng rng(0x5f3759df);
    auto set_of = [this](uint64_t mask) {
      std::vector<int> s;
      for (int i = 0; i < n_; ++i)
        if (mask & (1ull << i)) s.push_back(i);
      return s;
    };
    for (int t = 0; t < 64; ++t) {
      const uint64_t a = rng.next_u64() & ((1ull << n_) - 1);
      const uint64_t b = rng.next_u64() & ((1ull << n_) - 1);
      const double lhs = raw_(set_of(a)) + raw_(set_of(b));
      const double rhs = raw_(set_of(a | b)) + raw_(set_of(a & b));
      if (lhs < rhs - 1e-9)
        throw input_error("submodular oracle: the function failed a submodularity spot check");
    }
  }

  if (max_marginal) {
    if (!(*max_marginal >= 0.0)) throw input_error("submodular oracle: F must be nonnegative");
    max_marginal_ = *max_marginal;
    return;
  }
  if (n_ > 16)
    throw input_error("submodular oracle: max marginal F must be supplied for ground sets > 16");
  // Exact scan over all subsets.
  const int total = 1 << n_;
  std::vector<double> table(total);
  std::vector<int> set;
  for (int mask = 0; mask < total; ++mask) {
    set.clear();
    for (int i = 0; i < n_; ++i)
      if (mask & (1 << i)) set.push_back(i);
    table[mask] = raw_(set);
  }
  double f_max = 0.0;
  for (int mask = 1; mask < total; ++mask)
    for (int i = 0; i < n_; ++i)
      if (mask & (1 << i))
        f_max = std::max(f_max, std::abs(table[mask] - table[mask ^ (1 << i)]));
  max_marginal_ = f_max;
}

double SubmodularOracle::eval(const std::vector<int>& set) const {
  ++queries_;
  const double value = raw_(set) - offset_;
  if (!std::isfinite(value)) throw numeric_error("submodular oracle returned a non-finite value");
  if (require_integer_ && std::abs(value - std::round(value)) > 1e-9)
    throw input_error("submodular minimize (exact): function is not integer-valued");
  return value;
}

MinNormResult min_norm_point(const SubmodularOracle& f, double gap_target, long iter_cap) {
  if (!(gap_target > 0.0)) throw input_error("min_norm_point: gap target must be positive");
  if (iter_cap < 1) throw input_error("min_norm_point: iteration cap must be >= 1");

  const int n = f.ground_size();
  oracles::SubmodularBaseOracle lmo(f);

  double radius = std::sqrt(static_cast<double>(n)) * f.max_marginal();
  if (radius <= 0.0) radius = 1.0;  // constant functions: the polytope is {0}

  CaraProblem prob;
  prob.oracle = &lmo;
  prob.u.assign(n, 0.0);
  prob.p = 2.0;
  prob.radius = radius;
  prob.epsilon = std::sqrt(gap_target);

  MinNormResult result;
  double last_gap = std::numeric_limits<double>::infinity();
  long last_gap_t = -1;
  std::vector<double> last_x;

  SolveOptions opts;
  opts.early_exit = false;
  opts.iteration_override = iter_cap;
  opts.checkpoint_interval = std::max<long>(1, (iter_cap + 63) / 64);
  opts.geometric_checkpoints = true;
  opts.checkpoint = [&](long t, const std::vector<double>& avg) {
    const int id = lmo.minimize(avg);
    const std::vector<double>& z = lmo.vertex(id);
    double xx = 0.0, xz = 0.0;
    for (int i = 0; i < n; ++i) xx += avg[i] * avg[i];
    for (int i = 0; i < n; ++i) xz += avg[i] * z[i];
    last_gap = xx - xz;
    last_gap_t = t;
    last_x = avg;
    result.gap_history.emplace_back(t, last_gap);
    return last_gap <= gap_target;
  };

  const SparseCombination comb = approx_caratheodory(prob, opts);

  result.iterations = comb.iterations;
  result.oracle_calls = lmo.calls();
  if (last_gap_t != comb.iterations) {
    // Cap hit between checkpoints: measure the gap at the final average.
    std::vector<double> avg(n, 0.0);
    for (const CombinationEntry& e : comb.entries) {
      const std::vector<double>& v = lmo.vertex(e.vertex_id);
      for (int i = 0; i < n; ++i) avg[i] += e.weight * v[i];
    }
    const int id = lmo.minimize(avg);
    const std::vector<double>& z = lmo.vertex(id);
    double xx = 0.0, xz = 0.0;
    for (int i = 0; i < n; ++i) xx += avg[i] * avg[i];
    for (int i = 0; i < n; ++i) xz += avg[i] * z[i];
    last_gap = xx - xz;
    last_x = avg;
    result.oracle_calls = lmo.calls();
    result.gap_history.emplace_back(comb.iterations, last_gap);
  }
  result.x = std::move(last_x);
  result.wolfe_gap = last_gap;
  result.converged = last_gap <= gap_target;
  return result;
}

std::pair<std::vector<int>, double> fujishige_round(const std::vector<double>& x,
                                                    const SubmodularOracle& f) {
  const int n = f.ground_size();
  if (static_cast<int>(x.size()) != n) throw input_error("fujishige_round: dimension mismatch");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] < x[b]; });

  std::vector<int> best_set;
  double best_value = f.eval({});
  std::vector<int> prefix;
  prefix.reserve(n);
  for (int e : order) {
    prefix.insert(std::lower_bound(prefix.begin(), prefix.end(), e), e);
    const double value = f.eval(prefix);
    if (value < best_value) {  // strict: ties stay with the smaller set
      best_value = value;
      best_set = prefix;
    }
  }
  return {best_set, best_value};
}

MinNormResult submodular_minimize(SubmodularOracle& f, MinimizeMode mode, double k_additive) {
  const int n = f.ground_size();
  const double k = mode == MinimizeMode::exact ? 0.5 : k_additive;
  if (!(k > 0.0)) throw input_error("submodular_minimize: additive slack must be positive");
  f.require_integer(mode == MinimizeMode::exact);

  const double gap_target = (k / n) * (k / n);
  const double ff = f.max_marginal();
  double cap = std::ceil(4.0 * n * ff * ff * std::pow(n / k, 4.0));
  if (!(cap >= 1.0)) cap = 1.0;
  if (cap > 9e18) throw input_error("submodular_minimize: iteration cap overflows");

  MinNormResult result = min_norm_point(f, gap_target, static_cast<long>(cap));
  auto [set, value] = fujishige_round(result.x, f);
  result.minimizer_set = std::move(set);
  result.minimizer_value = value;
  return result;
}

}  // namespace cara::sfm

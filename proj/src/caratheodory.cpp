#include "cara/caratheodory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "cara/errors.hpp"
#include "cara/mirror.hpp"

namespace cara {

namespace {

void validate_problem(const CaraProblem& prob) {
  if (prob.oracle == nullptr) throw input_error("caratheodory: missing oracle");
  if (!(prob.p >= 2.0) || !std::isfinite(prob.p))
    throw input_error("caratheodory: p must be finite and >= 2");
  if (!(prob.epsilon > 0.0)) throw input_error("caratheodory: epsilon must be positive");
  if (!(prob.radius > 0.0) || !std::isfinite(prob.radius))
    throw input_error("caratheodory: radius must be positive and finite");
  if (static_cast<int>(prob.u.size()) != prob.oracle->dim())
    throw input_error("caratheodory: target dimension does not match the oracle");
  for (double x : prob.u)
    if (!std::isfinite(x)) throw input_error("caratheodory: target has non-finite entries");
}

// Weighted vertex average of the selections so far, sequential per entry.
std::vector<double> materialize(const std::vector<int>& order,
                                const std::map<int, long>& counts, long t,
                                const oracles::Lmo& oracle) {
  std::vector<double> avg(oracle.dim(), 0.0);
  for (int id : order) {
    const double w = static_cast<double>(counts.at(id)) / static_cast<double>(t);
    const std::vector<double>& v = oracle.vertex(id);
    for (size_t i = 0; i < avg.size(); ++i) avg[i] += w * v[i];
  }
  return avg;
}

}  // namespace

long iteration_budget(double p, double radius, double epsilon) {
  const double t = std::ceil(4.0 * (p - 1.0) * radius * radius / (epsilon * epsilon));
  if (!(t >= 1.0) || t > 9e18) throw input_error("caratheodory: iteration budget out of range");
  return static_cast<long>(t);
}

SparseCombination approx_caratheodory(const CaraProblem& prob, const SolveOptions& opts) {
  validate_problem(prob);
  oracles::Lmo& oracle = *prob.oracle;
  const int d = oracle.dim();
  const double p = prob.p;
  const double radius = prob.radius;

  const long budget = opts.iteration_override ? *opts.iteration_override
                                              : iteration_budget(p, radius, prob.epsilon);
  if (budget < 1) throw input_error("caratheodory: iteration budget must be >= 1");

  // The scaled problem (vertices and target divided by radius) has
  // gradients u/radius - v/radius of l_p norm at most 2 when the target
  // sits inside the vertex ball; otherwise widen the Lipschitz bound.
  const double target_norm = mirror::lq_norm(prob.u, p);
  const double rho = std::max(2.0, 1.0 + target_norm / radius);

  mirror::MirrorMapSpec map = mirror::lq_mirror_map(d, p);

  std::vector<int> first_seen;
  std::map<int, long> counts;
  const long calls_before = oracle.calls();

  mirror::SubgradFn subgrad = [&](const std::vector<double>& y) {
    const int id = oracle.minimize(y);
    const std::vector<double>& v = oracle.vertex(id);
    if (mirror::lq_norm(v, p) > radius * (1.0 + 1e-9))
      throw contract_error("oracle returned a vertex outside the declared radius");
    auto [it, inserted] = counts.try_emplace(id, 0);
    if (inserted) first_seen.push_back(id);
    ++it->second;
    mirror::Subgrad sg;
    sg.tag = id;
    sg.g.resize(d);
    for (int i = 0; i < d; ++i) sg.g[i] = (prob.u[i] - v[i]) / radius;
    return sg;
  };

  const long interval = opts.checkpoint_interval > 0
                            ? opts.checkpoint_interval
                            : std::max<long>(1, (budget + 15) / 16);
  long next_geometric = 1;

  auto entries_of = [&](long t) {
    std::vector<CombinationEntry> entries;
    entries.reserve(first_seen.size());
    for (int id : first_seen)
      entries.push_back({id, static_cast<double>(counts.at(id)) / static_cast<double>(t)});
    return entries;
  };

  mirror::StepCallback on_step = [&](long t, int) {
    bool at_checkpoint = (t % interval == 0) || t == budget;
    if (opts.geometric_checkpoints && t == next_geometric) {
      at_checkpoint = true;
      next_geometric *= 2;
    }
    if (!at_checkpoint) return false;
    if (opts.early_exit) {
      SparseCombination probe;
      probe.entries = entries_of(t);
      if (lp_residual(probe, oracle, prob.u, p) <= prob.epsilon) return true;
    }
    if (opts.checkpoint) {
      const std::vector<double> avg = materialize(first_seen, counts, t, oracle);
      if (opts.checkpoint(t, avg)) return true;
    }
    return false;
  };

  const mirror::DescentTrace trace = mirror::mirror_descent(map, subgrad, rho, budget, on_step);

  SparseCombination result;
  result.p = p;
  result.iterations = trace.iterations;
  result.oracle_calls = oracle.calls() - calls_before;
  result.entries = entries_of(trace.iterations);
  double mass = 0.0;
  for (const CombinationEntry& e : result.entries) mass += e.weight;
  result.total_mass = mass;
  result.residual_norm = lp_residual(result, oracle, prob.u, p);

  if (opts.assert_membership && result.residual_norm > prob.epsilon)
    throw convergence_error(
        "caratheodory: residual " + std::to_string(result.residual_norm) + " exceeds target " +
        std::to_string(prob.epsilon) + " after " + std::to_string(trace.iterations) +
        " iterations over " + std::to_string(result.entries.size()) + " vertices");
  return result;
}

SparseCombination boosted_caratheodory(const CaraProblem& prob, double r) {
  validate_problem(prob);
  if (!(r > 0.0) || r > 1.0) throw input_error("boosted: inner radius must lie in (0, 1]");
  if (!(prob.epsilon < r)) throw input_error("boosted: epsilon must be smaller than r");
  if (prob.radius > 1.0 + 1e-9)
    throw input_error("boosted: vertices must lie in the unit l_p ball");

  const long beta = static_cast<long>(std::ceil(std::log2(r / prob.epsilon)));
  oracles::Lmo& oracle = *prob.oracle;
  const int d = oracle.dim();

  std::vector<double> e = prob.u;  // e_0 = u
  std::vector<int> first_seen;
  std::map<int, double> weights;
  long iterations = 0;
  long calls = 0;
  double round_scale = 1.0;  // 2^{-(i-1)}

  for (long i = 1; i <= beta; ++i) {
    CaraProblem sub;
    sub.oracle = prob.oracle;
    sub.u = e;
    sub.p = prob.p;
    sub.radius = 1.0;
    sub.epsilon = r / 2.0;
    const SparseCombination xi = approx_caratheodory(sub);
    iterations += xi.iterations;
    calls += xi.oracle_calls;

    std::vector<double> vx(d, 0.0);
    for (const CombinationEntry& entry : xi.entries) {
      const std::vector<double>& v = oracle.vertex(entry.vertex_id);
      for (int k = 0; k < d; ++k) vx[k] += entry.weight * v[k];
      auto [it, inserted] = weights.try_emplace(entry.vertex_id, 0.0);
      if (inserted) first_seen.push_back(entry.vertex_id);
      it->second += round_scale * entry.weight;
    }

    for (int k = 0; k < d; ++k) e[k] = 2.0 * (e[k] - vx[k]);
    if (mirror::lq_norm(e, prob.p) > r * (1.0 + 1e-6))
      throw contract_error(
          "boosted: round residual left the inner ball; the inner-ball assumption does not hold");
    round_scale *= 0.5;
  }

  SparseCombination result;
  result.p = prob.p;
  result.iterations = iterations;
  result.oracle_calls = calls;
  result.entries.reserve(first_seen.size());
  double mass = 0.0;
  for (int id : first_seen) {
    result.entries.push_back({id, weights.at(id)});
    mass += weights.at(id);
  }
  result.total_mass = mass;
  result.residual_norm = lp_residual(result, oracle, prob.u, prob.p);
  return result;
}

namespace {

// Same vertex family shifted by -u; ids are shared with the base oracle.
class TranslatedOracle : public oracles::Lmo {
 public:
  TranslatedOracle(oracles::Lmo& base, std::vector<double> shift)
      : Lmo(base.dim()), base_(base), shift_(std::move(shift)) {}

  const std::vector<double>& vertex(int id) const override {
    auto it = cache_.find(id);
    if (it == cache_.end()) {
      const std::vector<double>& v = base_.vertex(id);
      std::vector<double> t(v.size());
      for (size_t i = 0; i < v.size(); ++i) t[i] = v[i] - shift_[i];
      it = cache_.emplace(id, std::move(t)).first;
    }
    return it->second;
  }

 protected:
  int do_minimize(std::span<const double> c) override {
    // argmin c.(v - u) = argmin c.v: the shift only offsets the objective.
    return base_.minimize(c);
  }

 private:
  oracles::Lmo& base_;
  std::vector<double> shift_;
  mutable std::map<int, std::vector<double>> cache_;
};

}  // namespace

SparseCombination recentered_caratheodory(const CaraProblem& prob, double r) {
  validate_problem(prob);
  if (!(r >= 2.0 * prob.epsilon)) throw input_error("recentered: requires r >= 2 epsilon");

  oracles::Lmo& oracle = *prob.oracle;
  if (std::optional<int> hit = oracle.find_vertex(prob.u)) {
    SparseCombination result;
    result.p = prob.p;
    result.entries.push_back({*hit, 1.0});
    result.total_mass = 1.0;
    result.iterations = 0;
    result.residual_norm = lp_residual(result, oracle, prob.u, prob.p);
    return result;
  }

  TranslatedOracle translated(oracle, prob.u);
  CaraProblem shifted;
  shifted.oracle = &translated;
  shifted.u.assign(prob.u.size(), 0.0);
  shifted.p = prob.p;
  shifted.radius = 1.0;
  shifted.epsilon = prob.epsilon;
  SparseCombination boosted = boosted_caratheodory(shifted, r);

  SparseCombination result;
  result.p = prob.p;
  result.iterations = boosted.iterations;
  result.oracle_calls = boosted.oracle_calls;
  const double mass = boosted.total_mass;
  result.entries.reserve(boosted.entries.size());
  double renorm_sum = 0.0;
  for (const CombinationEntry& e : boosted.entries) {
    result.entries.push_back({e.vertex_id, e.weight / mass});
    renorm_sum += e.weight / mass;
  }
  result.total_mass = renorm_sum;
  result.residual_norm = lp_residual(result, oracle, prob.u, prob.p);
  return result;
}

double lp_residual(const SparseCombination& comb, const oracles::Lmo& oracle,
                   std::span<const double> u, double p) {
  std::vector<double> sum(u.size(), 0.0);
  for (const CombinationEntry& e : comb.entries) {
    const std::vector<double>& v = oracle.vertex(e.vertex_id);
    if (v.size() != u.size()) throw input_error("lp_residual: vertex dimension mismatch");
    for (size_t i = 0; i < sum.size(); ++i) sum[i] += e.weight * v[i];
  }
  for (size_t i = 0; i < sum.size(); ++i) sum[i] -= u[i];
  return mirror::lq_norm(sum, p);
}

}  // namespace cara

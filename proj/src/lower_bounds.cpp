#include "cara/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cara/errors.hpp"
#include "cara/kernels.hpp"
#include "cara/mirror.hpp"
#include "cara/rng.hpp"

namespace cara::lb {

SignMatrix sylvester(int n) {
  if (n < 1 || (n & (n - 1)) != 0 || n > (1 << 16))
    throw input_error("sylvester: n must be a power of two, at most 2^16");
  SignMatrix h;
  h.n = n;
  h.a.assign(static_cast<size_t>(n) * n, 0);
  h.at(0, 0) = 1;
  for (int len = 1; len < n; len <<= 1) {
    for (int i = 0; i < len; ++i)
      for (int j = 0; j < len; ++j) {
        const int8_t x = h.at(i, j);
        h.at(i, j + len) = x;
        h.at(i + len, j) = x;
        h.at(i + len, j + len) = static_cast<int8_t>(-x);
      }
  }
  return h;
}

HadamardInstance hadamard_instance(int n, double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw input_error("hadamard instance: p must be >= 2");
  HadamardInstance inst;
  inst.n = n;
  inst.p = p;
  inst.h = sylvester(n);
  const double scale = 1.0 / std::pow(static_cast<double>(n), 1.0 / p);
  inst.v = Matrix(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) inst.v.at(i, j) = inst.h.at(i, j) * scale;
  inst.u.assign(n, 0.0);
  inst.u[0] = scale;

  // The uniform mixture of columns must reproduce the target.
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += inst.v.at(i, j) / n;
    if (std::abs(s - inst.u[i]) > 1e-12)
      throw contract_error("hadamard instance: uniform mixture drifted from e_1 / n^{1/p}");
  }
  return inst;
}

HadamardCertificate hadamard_sparsity_certificate(const HadamardInstance& inst,
                                                  const SparseCombination& comb) {
  std::vector<double> sum(inst.n, 0.0);
  int k = 0;
  for (const CombinationEntry& e : comb.entries) {
    if (e.vertex_id < 0 || e.vertex_id >= inst.n)
      throw input_error("hadamard certificate: vertex id out of range");
    if (e.weight == 0.0) continue;
    ++k;
    for (int i = 0; i < inst.n; ++i) sum[i] += e.weight * inst.v.at(i, e.vertex_id);
  }
  for (int i = 0; i < inst.n; ++i) sum[i] -= inst.u[i];

  HadamardCertificate cert;
  cert.k = k;
  cert.residual = mirror::lq_norm(sum, inst.p);
  if (k == 0) {
    cert.bound_ok = true;  // empty combination: nothing to certify
    return cert;
  }
  cert.bound_ok = cert.residual * cert.residual >= 1.0 / k - 1.0 / inst.n - 1e-9;
  return cert;
}

RandomSignInstance random_sign_instance(int n, uint64_t seed, double p, double epsilon) {
  if (n < 1) throw input_error("random sign instance: n must be positive");
  if (!(p >= 2.0) || !std::isfinite(p)) throw input_error("random sign instance: p must be >= 2");
  if (!(epsilon > 0.0)) throw input_error("random sign instance: epsilon must be positive");
  RandomSignInstance inst;
  inst.n = n;
  inst.seed = seed;
  inst.p = p;
  inst.epsilon = epsilon;
  inst.a.n = n;
  inst.a.a.resize(static_cast<size_t>(n) * n);
  kernels::sign_matrix_fill(seed, n, inst.a.a);
  return inst;
}

std::vector<int> good_rows(const SignMatrix& a, const std::vector<int>& s, double eps) {
  if (s.empty()) throw input_error("good_rows: the column set must be nonempty");
  for (int j : s)
    if (j < 0 || j >= a.n) throw input_error("good_rows: column index out of range");
  std::vector<int> counts(a.n, 0);
  kernels::row_plus_counts(a.a, a.n, s, counts);
  const double threshold = (0.5 + eps) * static_cast<double>(s.size());
  std::vector<int> rows;
  for (int i = 0; i < a.n; ++i)
    if (static_cast<double>(counts[i]) > threshold) rows.push_back(i);  // strictly more
  return rows;
}

double adversarial_value(const RandomSignInstance& inst, const std::vector<int>& s) {
  const std::vector<int> rows = good_rows(inst.a, s, inst.epsilon);
  if (rows.empty()) return 0.0;
  const double r = static_cast<double>(rows.size());
  const double q = inst.p / (inst.p - 1.0);
  const double y_entry = std::pow(r, -1.0 / q);
  const double v_scale = std::pow(static_cast<double>(inst.n), -1.0 / inst.p);

  double best = std::numeric_limits<double>::infinity();
  for (int j : s) {
    long col_sum = 0;
    for (int i : rows) col_sum += inst.a.at(i, j);
    best = std::min(best, v_scale * y_entry * static_cast<double>(col_sum));
  }
  return best;
}

std::vector<double> apply_v(const RandomSignInstance& inst, std::span<const int> cols,
                            std::span<const double> weights) {
  if (cols.size() != weights.size()) throw input_error("apply_v: size mismatch");
  const double v_scale = std::pow(static_cast<double>(inst.n), -1.0 / inst.p);
  std::vector<double> out(inst.n, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    double s = 0.0;
    for (size_t t = 0; t < cols.size(); ++t) s += weights[t] * inst.a.at(i, cols[t]);
    out[i] = v_scale * s;
  }
  return out;
}

AdversarialReport adversarial_sweep_one(int n, uint64_t seed, double p, double eps, int k,
                                        int num_samples) {
  if (k < 1 || k > n) throw input_error("adversarial sweep: need 1 <= k <= n");
  const RandomSignInstance inst = random_sign_instance(n, seed, p, eps);

  // Auxiliary draws start far past the n^2 counters used by the matrix.
  Rng aux(seed, uint64_t{1} << 40);
  std::set<int> chosen;
  while (static_cast<int>(chosen.size()) < k)
    chosen.insert(static_cast<int>(aux.next_below(static_cast<uint64_t>(n))));
  const std::vector<int> s(chosen.begin(), chosen.end());

  AdversarialReport rep;
  rep.seed = seed;
  rep.n = n;
  rep.p = p;
  rep.epsilon = eps;
  rep.k = k;
  const std::vector<int> rows = good_rows(inst.a, s, eps);
  rep.good_row_count = static_cast<int>(rows.size());
  rep.good_row_frequency = static_cast<double>(rows.size()) / n;
  rep.value = adversarial_value(inst, s);
  rep.prediction = eps * std::pow(static_cast<double>(rows.size()) / n, 1.0 / p);

  double min_norm = std::numeric_limits<double>::infinity();
  for (int t = 0; t < num_samples; ++t) {
    std::vector<double> w(k);
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      w[j] = -std::log(1.0 - aux.next_double());
      total += w[j];
    }
    for (double& x : w) x /= total;
    const double norm = mirror::lq_norm(apply_v(inst, s, w), p);
    min_norm = std::min(min_norm, norm);
    if (norm < rep.value - 1e-9) ++rep.violations;
  }
  rep.min_sampled_norm = num_samples > 0 ? min_norm : 0.0;
  return rep;
}

std::vector<AdversarialReport> adversarial_sweep(int n, uint64_t base_seed, int count, double p,
                                                 double eps, int k, int num_samples) {
  if (count < 1) throw input_error("adversarial sweep: need at least one seed");
  if (k < 1 || k > n) throw input_error("adversarial sweep: need 1 <= k <= n");
  std::vector<AdversarialReport> reports(count);
  std::exception_ptr first_error = nullptr;
  const bool par = kernels::parallel_enabled();
#pragma omp parallel for schedule(dynamic) if (par)
  for (int s = 0; s < count; ++s) {
    try {
      reports[s] =
          adversarial_sweep_one(n, base_seed + static_cast<uint64_t>(s), p, eps, k, num_samples);
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return reports;
}

}  // namespace cara::lb

#include "cara/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cara/errors.hpp"
#include "cara/kernels.hpp"
#include "cara/mirror.hpp"
#include "cara/oracles.hpp"
#include "cara/rng.hpp"

namespace cara::svm {

double SvmProblem::eta() const {
  return std::min(1.0, 2.0 / (nu * static_cast<double>(size())));
}

namespace {

double dot_cols(const Matrix& points, int i, int j) {
  return dot(points.col(i), points.col(j));
}

double sqdist_cols(const Matrix& points, int i, int j) {
  double s = 0.0;
  auto a = points.col(i), b = points.col(j);
  for (size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

int data_size(const KernelSpec& spec, const Matrix& points) {
  return spec.kind == KernelKind::precomputed ? spec.precomputed.cols : points.cols;
}

}  // namespace

double kernel_entry(const KernelSpec& spec, const Matrix& points, int i, int j) {
  switch (spec.kind) {
    case KernelKind::linear:
      return dot_cols(points, i, j);
    case KernelKind::poly_homogeneous:
      return std::pow(dot_cols(points, i, j), spec.degree);
    case KernelKind::poly_inhomogeneous:
      return std::pow(1.0 + dot_cols(points, i, j), spec.degree);
    case KernelKind::rbf:
      return std::exp(-sqdist_cols(points, i, j) / (2.0 * spec.sigma * spec.sigma));
    case KernelKind::sigmoid:
      return std::tanh(spec.alpha * dot_cols(points, i, j) + spec.c);
    case KernelKind::precomputed:
      return spec.precomputed.at(i, j);
  }
  throw input_error("kernel_entry: unknown kernel kind");
}

std::vector<double> kernel_apply(const KernelSpec& spec, const Matrix& points,
                                 std::span<const double> z) {
  const int n = data_size(spec, points);
  if (static_cast<int>(z.size()) != n) throw input_error("kernel_apply: dimension mismatch");

  std::vector<double> out(n, 0.0);
  if (spec.kind == KernelKind::linear) {
    const int d = points.rows;
    std::vector<double> h(d, 0.0);
    const bool par =
        kernels::parallel_enabled() && static_cast<long>(d) * n >= (1 << 14);
    // h_k = sum_i z_i x_i[k]: parallel over components, sequential over i.
#pragma omp parallel for schedule(static) if (par)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += z[i] * points.at(k, i);
      h[k] = s;
    }
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < n; ++i) out[i] = dot(points.col(i), h) + spec.shift * z[i];
  } else {
    const bool par =
        kernels::parallel_enabled() && static_cast<long>(n) * n >= (1 << 12);
    // Row at a time, entries computed on the fly; each row reduction is
    // sequential in j, so the parallel split stays bit-identical.
#pragma omp parallel for schedule(static) if (par)
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += kernel_entry(spec, points, i, j) * z[j];
      out[i] = s + spec.shift * z[i];
    }
  }
  for (double x : out)
    if (!std::isfinite(x)) throw numeric_error("kernel_apply: non-finite product entry");
  return out;
}

double ktilde_norm(const KernelSpec& spec, const Matrix& points, std::span<const double> z) {
  const std::vector<double> kz = kernel_apply(spec, points, z);
  const double r = dot(z, std::span<const double>(kz));
  if (r < -1e-9)
    throw contract_error("ktilde_norm: negative quadratic form, the kernel matrix is not PSD");
  return std::sqrt(std::max(0.0, r));
}

std::vector<double> svm_mirror_gradient(const KernelSpec& spec, const Matrix& points,
                                        std::span<const double> z) {
  std::vector<double> kz = kernel_apply(spec, points, z);
  const double r = dot(z, std::span<const double>(kz));
  if (r < -1e-9)
    throw contract_error("svm_mirror_gradient: negative quadratic form, kernel is not PSD");
  const double norm = std::sqrt(std::max(0.0, r));
  const double clip = norm > 1.0 ? 1.0 / norm : 1.0;
  for (double& x : kz) x *= clip;
  return kz;
}

double spectral_bound(const KernelSpec& spec, const Matrix& points, int n, bool refine) {
  auto max_sqnorm = [&]() {
    double m = 0.0;
    for (int i = 0; i < points.cols; ++i) m = std::max(m, dot_cols(points, i, i));
    return m;
  };
  switch (spec.kind) {
    case KernelKind::linear:
      return n * max_sqnorm();
    case KernelKind::poly_homogeneous:
      return n * std::pow(max_sqnorm(), spec.degree);
    case KernelKind::poly_inhomogeneous:
      return n * std::pow(1.0 + max_sqnorm(), spec.degree);
    case KernelKind::rbf:
    case KernelKind::sigmoid:
      return static_cast<double>(n);
    case KernelKind::precomputed: {
      double trace = 0.0;
      for (int i = 0; i < n; ++i) trace += spec.precomputed.at(i, i);
      if (!refine) return trace;
      // |K^{2^t}|_F^{1/2^t} decreases toward the spectral norm of a
      // symmetric K, so a few squarings tighten the trace bound at n^3
      // cost each. The running matrix is kept Frobenius-normalized, with
      // the factored-out scale tracked in log space.
      Matrix a = spec.precomputed;
      double best = trace;
      double log_scale = 0.0;  // a == K^{2^t} / exp(log_scale)
      for (int round = 1; round <= 5; ++round) {
        Matrix b(n, n);
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += a.at(i, k) * a.at(k, j);
            b.at(i, j) = s;
          }
        double fro = 0.0;
        for (double x : b.data) fro += x * x;
        fro = std::sqrt(fro);
        if (fro == 0.0) return 0.0;
        log_scale = 2.0 * log_scale + std::log(fro);
        best = std::min(best, std::exp(log_scale / std::pow(2.0, round)));
        for (double& x : b.data) x /= fro;
        a = std::move(b);
      }
      return best;
    }
  }
  throw input_error("spectral_bound: unknown kernel kind");
}

namespace {

void validate_problem(const SvmProblem& prob) {
  const int n = prob.size();
  if (n < 2) throw input_error("svm: need at least two points");
  if (!(prob.nu > 0.0 && prob.nu <= 1.0)) throw input_error("svm: nu must lie in (0, 1]");
  if (!(prob.eps > 0.0)) throw input_error("svm: eps must be positive");
  int pos = 0, neg = 0;
  for (int label : prob.labels) {
    if (label > 0)
      ++pos;
    else if (label < 0)
      ++neg;
    else
      throw input_error("svm: labels must be +1 or -1");
  }
  if (pos == 0 || neg == 0) throw input_error("svm: both classes must be nonempty");
  const double eta = prob.eta();
  if (eta * pos < 1.0 - 1e-12 || eta * neg < 1.0 - 1e-12)
    throw input_error("svm: eta * class size < 1, the feasible set is empty");
  if (prob.kernel.kind == KernelKind::precomputed) {
    if (prob.kernel.precomputed.rows != n || prob.kernel.precomputed.cols != n)
      throw input_error("svm: precomputed kernel must be n x n");
    const Matrix& k = prob.kernel.precomputed;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(k.at(i, j) - k.at(j, i)) > 1e-9)
          throw input_error("svm: precomputed kernel is not symmetric");
    // Sampled 3x3 principal minors must be PSD: every principal
    // subdeterminant nonnegative up to tolerance.
    Rng rng(0x5bd1e995);
    const int triples = 8;
    for (int t = 0; t < triples; ++t) {
      int idx[3];
      idx[0] = static_cast<int>(rng.next_below(n));
      idx[1] = static_cast<int>(rng.next_below(n));
      idx[2] = static_cast<int>(rng.next_below(n));
      for (int a = 0; a < 3; ++a)
        if (k.at(idx[a], idx[a]) < -1e-9)
          throw input_error("svm: precomputed kernel has a negative diagonal entry");
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          const double det2 = k.at(idx[a], idx[a]) * k.at(idx[b], idx[b]) -
                              k.at(idx[a], idx[b]) * k.at(idx[b], idx[a]);
          if (det2 < -1e-6) throw input_error("svm: a sampled 2x2 principal minor is negative");
        }
      const double a00 = k.at(idx[0], idx[0]), a01 = k.at(idx[0], idx[1]),
                   a02 = k.at(idx[0], idx[2]), a11 = k.at(idx[1], idx[1]),
                   a12 = k.at(idx[1], idx[2]), a22 = k.at(idx[2], idx[2]);
      const double det3 = a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) +
                          a02 * (a01 * a12 - a11 * a02);
      if (det3 < -1e-6) throw input_error("svm: a sampled 3x3 principal minor is negative");
    }
  } else {
    if (prob.points.cols != n) throw input_error("svm: labels/points size mismatch");
  }
}

// lambda . Ktilde lambda over the support only.
double sparse_objective(const KernelSpec& spec, const Matrix& points,
                        const std::vector<double>& lambda) {
  std::vector<int> support;
  for (size_t i = 0; i < lambda.size(); ++i)
    if (lambda[i] != 0.0) support.push_back(static_cast<int>(i));
  double s = 0.0;
  for (int a : support)
    for (int b : support) {
      double k = kernel_entry(spec, points, a, b);
      if (a == b) k += spec.shift;
      s += lambda[a] * k * lambda[b];
    }
  return s;
}

}  // namespace

SvmResult nu_svm_train(const SvmProblem& prob, std::optional<long> iterations_override) {
  validate_problem(prob);
  const int n = prob.size();
  const double eta = prob.eta();
  const double eps = prob.eps;

  KernelSpec spec = prob.kernel;
  spec.shift = eps / 2.0;

  const double kbound = spectral_bound(spec, prob.points, n, prob.refine_spectral);
  const double rho = 2.0 * std::sqrt(eta);
  const double sigma = std::max(2.0 / eps, kbound + eps / 2.0);
  const double diameter = 0.5;

  long iterations;
  if (iterations_override) {
    iterations = *iterations_override;
  } else {
    const double t = std::ceil(2.0 * diameter * sigma * rho * rho / (eps * eps));
    if (t > 9e18) throw input_error("svm: iteration count overflows");
    iterations = static_cast<long>(t);
  }

  mirror::MirrorMapSpec map;
  map.dim = n;
  map.sigma = sigma;
  map.diameter = diameter;
  map.dual_gradient = [&](const std::vector<double>& z) {
    return svm_mirror_gradient(spec, prob.points, z);
  };

  const int max_nnz = 2 * static_cast<int>(std::ceil(1.0 / eta));
  oracles::VertexStore store;
  std::vector<int> first_seen;
  std::map<int, long> counts;
  std::map<int, double> objective_by_id;
  int best_id = -1;
  double best_obj = std::numeric_limits<double>::infinity();

  mirror::SubgradFn subgrad = [&](const std::vector<double>& y) {
    std::vector<double> lambda = oracles::rch_oracle(y, prob.labels, eta);
    int nnz = 0;
    double sq = 0.0;
    for (double x : lambda) {
      if (x != 0.0) ++nnz;
      sq += x * x;
    }
    if (nnz > max_nnz) throw contract_error("svm: subgradient support exceeds 2*ceil(1/eta)");
    if (std::sqrt(sq) > rho + 1e-12)
      throw contract_error("svm: subgradient 2-norm exceeds 2*sqrt(eta)");

    const int id = store.intern(lambda);
    auto [it, inserted] = counts.try_emplace(id, 0);
    if (inserted) {
      first_seen.push_back(id);
      const double obj = sparse_objective(spec, prob.points, lambda);
      objective_by_id.emplace(id, obj);
      if (obj < best_obj) {
        best_obj = obj;
        best_id = id;
      }
    }
    ++it->second;
    mirror::Subgrad sg;
    sg.tag = id;
    sg.g.resize(n);
    for (int i = 0; i < n; ++i) sg.g[i] = -lambda[i];
    return sg;
  };

  const mirror::DescentTrace trace = mirror::mirror_descent(map, subgrad, rho, iterations);

  // Average rebuilt from per-vertex counts, sequentially in first-seen order.
  std::vector<double> average(n, 0.0);
  for (int id : first_seen) {
    const double w = static_cast<double>(counts.at(id)) / static_cast<double>(trace.iterations);
    const std::vector<double>& v = store.get(id);
    for (int i = 0; i < n; ++i) average[i] += w * v[i];
  }
  const std::vector<double> k_avg = kernel_apply(spec, prob.points, average);
  const double avg_obj = dot(std::span<const double>(average), std::span<const double>(k_avg));

  SvmResult result;
  result.iterations = trace.iterations;
  result.spectral_bound = kbound;
  result.average_objective = avg_obj;
  if (best_id >= 0 && best_obj < avg_obj) {
    result.lambda = store.get(best_id);
    result.objective = best_obj;
    result.from_average = false;
  } else {
    result.lambda = average;
    result.objective = avg_obj;
    result.from_average = true;
  }
  result.knorm = std::sqrt(std::max(0.0, result.objective));
  for (double x : result.lambda)
    if (x != 0.0) ++result.nnz_lambda;
  return result;
}

double decision_score(const SvmResult& result, const KernelSpec& spec, const Matrix& points,
                      std::span<const double> query) {
  if (spec.kind == KernelKind::precomputed)
    throw input_error("decision_score: precomputed kernels cannot score new points");
  if (static_cast<int>(query.size()) != points.rows)
    throw input_error("decision_score: query dimension mismatch");
  Matrix extended(points.rows, points.cols + 1);
  extended.data.assign(points.data.begin(), points.data.end());
  extended.data.insert(extended.data.end(), query.begin(), query.end());
  double s = 0.0;
  for (int i = 0; i < points.cols; ++i)
    s += result.lambda[i] * kernel_entry(spec, extended, i, points.cols);
  return s;
}

}  // namespace cara::svm

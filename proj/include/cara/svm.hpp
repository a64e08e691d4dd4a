#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cara/matrix.hpp"

namespace cara::svm {

enum class KernelKind {
  linear,
  poly_homogeneous,
  poly_inhomogeneous,
  rbf,
  sigmoid,
  precomputed,
};

struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  int degree = 2;       // polynomial kernels
  double sigma = 1.0;   // rbf width
  double alpha = 1.0;   // sigmoid slope
  double c = 0.0;       // sigmoid offset
  Matrix precomputed;   // n x n, kind == precomputed
  double shift = 0.0;   // regularization added to the diagonal (eps/2)
};

// Training data: points are columns (d x n); labels are +-1.
struct SvmProblem {
  Matrix points;
  std::vector<int> labels;
  KernelSpec kernel;
  double nu = 1.0;
  double eps = 0.1;
  bool refine_spectral = false;  // tighter bound for precomputed kernels

  int size() const { return static_cast<int>(labels.size()); }
  // Per-coordinate cap of the restricted hulls; capped at 1 where the
  // constraint goes inactive.
  double eta() const;
};

struct SvmResult {
  std::vector<double> lambda;  // reported iterate, a point of S_eta
  double objective = 0.0;      // lambda . Ktilde lambda
  double knorm = 0.0;
  long iterations = 0;
  double spectral_bound = 0.0;
  int nnz_lambda = 0;
  bool from_average = true;
  double average_objective = 0.0;
};

// Single kernel entry k(x_i, x_j), shift excluded.
double kernel_entry(const KernelSpec& spec, const Matrix& points, int i, int j);

// Ktilde z = K z + shift * z without materializing K (except precomputed).
// The linear kernel uses the two-pass form h = sum_i z_i x_i, out_i = x_i.h.
std::vector<double> kernel_apply(const KernelSpec& spec, const Matrix& points,
                                 std::span<const double> z);

// sqrt(z . Ktilde z); a radicand below -1e-9 reports a non-PSD kernel.
double ktilde_norm(const KernelSpec& spec, const Matrix& points, std::span<const double> z);

// grad omega*(z) = Ktilde z * min(1, 1 / |z|_Ktilde); one kernel product.
std::vector<double> svm_mirror_gradient(const KernelSpec& spec, const Matrix& points,
                                        std::span<const double> z);

// Upper bound on |K| from the kernel-specific trace bounds; for
// precomputed kernels optionally tightened by Frobenius bounds of
// repeated squarings.
double spectral_bound(const KernelSpec& spec, const Matrix& points, int n, bool refine);

// Mirror descent over the Ktilde^{-1}-ball with the capped-hull oracle:
// rho = 2 sqrt(eta), sigma = max(2/eps, |K| + eps/2), D = 1/2,
// T = ceil(2 D sigma rho^2 / eps^2). Returns the better of the averaged
// iterate and the best single iterate by objective.
SvmResult nu_svm_train(const SvmProblem& prob, std::optional<long> iterations_override = {});

// sum_i lambda_i k(x_i, query); no bias term, shift excluded.
double decision_score(const SvmResult& result, const KernelSpec& spec, const Matrix& points,
                      std::span<const double> query);

}  // namespace cara::svm

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cara/caratheodory.hpp"
#include "cara/matrix.hpp"

namespace cara::lb {

// Row-major +-1 matrix.
struct SignMatrix {
  int n = 0;
  std::vector<int8_t> a;

  int8_t at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  int8_t& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
};

// Doubling construction H_1 = [1], H_2n = [[H, H], [H, -H]].
// n must be a power of two, at most 2^16.
SignMatrix sylvester(int n);

// Columns of H / n^{1/p} with target e_1 / n^{1/p} (the uniform mixture of
// all columns).
struct HadamardInstance {
  int n = 0;
  double p = 2.0;
  SignMatrix h;
  Matrix v;
  std::vector<double> u;
};

HadamardInstance hadamard_instance(int n, double p);

struct HadamardCertificate {
  int k = 0;             // support size
  double residual = 0.0; // achieved l_p residual
  bool bound_ok = false; // residual^2 >= 1/k - 1/n - 1e-9
};

// Checks the sparsity-accuracy inequality on a combination whose vertex
// ids are column indices of the instance.
HadamardCertificate hadamard_sparsity_certificate(const HadamardInstance& inst,
                                                  const SparseCombination& comb);

// A is filled from the counter RNG (entry (i,j) at counter i*n+j);
// V = n^{-1/p} A is implicit.
struct RandomSignInstance {
  int n = 0;
  uint64_t seed = 0;
  double p = 2.0;
  double epsilon = 0.0;
  SignMatrix a;
};

RandomSignInstance random_sign_instance(int n, uint64_t seed, double p, double epsilon);

// Rows with strictly more than (1/2 + eps) * |s| entries equal to +1 in
// the columns of s.
std::vector<int> good_rows(const SignMatrix& a, const std::vector<int>& s, double eps);

// Value of the adversarial dual point y (mass r^{-1/q} on the good rows):
// min over j in s of (y^T V)_j, a lower bound on |Vx|_p for every x
// supported on s. Zero when no good rows exist.
double adversarial_value(const RandomSignInstance& inst, const std::vector<int>& s);

// V x for a combination supported on the given columns.
std::vector<double> apply_v(const RandomSignInstance& inst, std::span<const int> cols,
                            std::span<const double> weights);

// One Monte Carlo run: random support of size k, good-row statistics and
// a certification sweep over random supported points.
struct AdversarialReport {
  uint64_t seed = 0;
  int n = 0;
  double p = 2.0;
  double epsilon = 0.0;
  int k = 0;
  int good_row_count = 0;
  double good_row_frequency = 0.0;
  double value = 0.0;
  double prediction = 0.0;  // eps * (r/n)^{1/p}
  double min_sampled_norm = 0.0;
  int violations = 0;  // sampled |Vx|_p below value - 1e-9
};

AdversarialReport adversarial_sweep_one(int n, uint64_t seed, double p, double eps, int k,
                                        int num_samples);

// Runs seeds base_seed .. base_seed+count-1, parallel across seeds when the
// kernel switch allows; each seed is sequential and the result order is
// fixed, so the sweep is deterministic either way.
std::vector<AdversarialReport> adversarial_sweep(int n, uint64_t base_seed, int count, double p,
                                                 double eps, int k, int num_samples);

}  // namespace cara::lb

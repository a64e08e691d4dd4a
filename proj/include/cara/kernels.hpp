#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cara/matrix.hpp"

namespace cara::kernels {

// Data-parallel inner loops, each in a serial reference version and an
// OpenMP version. The parallel versions split work across independent
// output elements only; every reduction stays sequential in index order
// inside one element, so both versions produce bit-identical results.
// The dispatching entry points pick the variant from the process-wide
// switch below.

bool parallel_enabled();
void set_parallel(bool on);

// scores[j] = sum_i V(i,j) * c[i], for every column j.
void column_scores_serial(const Matrix& v, std::span<const double> c, std::span<double> scores);
void column_scores_parallel(const Matrix& v, std::span<const double> c, std::span<double> scores);
void column_scores(const Matrix& v, std::span<const double> c, std::span<double> scores);

// out[i] = sum_j w[j] * V(i, idx[j]), summed in j order per row.
void weighted_column_sum_serial(const Matrix& v, std::span<const int> idx,
                                std::span<const double> w, std::span<double> out);
void weighted_column_sum_parallel(const Matrix& v, std::span<const int> idx,
                                  std::span<const double> w, std::span<double> out);
void weighted_column_sum(const Matrix& v, std::span<const int> idx, std::span<const double> w,
                         std::span<double> out);

// Fills an n x n +-1 matrix (row-major) from the counter RNG: entry (i,j)
// uses counter i*n+j, so any work split over entries is reproducible.
void sign_matrix_fill_serial(uint64_t seed, int n, std::span<int8_t> out);
void sign_matrix_fill_parallel(uint64_t seed, int n, std::span<int8_t> out);
void sign_matrix_fill(uint64_t seed, int n, std::span<int8_t> out);

// counts[i] = number of +1 entries of row i restricted to the given columns.
void row_plus_counts_serial(std::span<const int8_t> a, int n, std::span<const int> cols,
                            std::span<int> counts);
void row_plus_counts_parallel(std::span<const int8_t> a, int n, std::span<const int> cols,
                              std::span<int> counts);
void row_plus_counts(std::span<const int8_t> a, int n, std::span<const int> cols,
                     std::span<int> counts);

}  // namespace cara::kernels

#include "cara/kernels.hpp"

#include <atomic>

#include "cara/rng.hpp"

namespace cara::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

namespace {
// Work below this many flops is not worth a parallel-region launch.
constexpr long kParallelThreshold = 1 << 14;
}  // namespace

void column_scores_serial(const Matrix& v, std::span<const double> c, std::span<double> scores) {
  const int d = v.rows;
  for (int j = 0; j < v.cols; ++j) {
    const double* col = v.data.data() + static_cast<size_t>(j) * d;
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += col[i] * c[i];
    scores[j] = s;
  }
}

void column_scores_parallel(const Matrix& v, std::span<const double> c, std::span<double> scores) {
  const int d = v.rows;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < v.cols; ++j) {
    const double* col = v.data.data() + static_cast<size_t>(j) * d;
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += col[i] * c[i];
    scores[j] = s;
  }
}

void column_scores(const Matrix& v, std::span<const double> c, std::span<double> scores) {
  if (parallel_enabled() && static_cast<long>(v.rows) * v.cols >= kParallelThreshold)
    column_scores_parallel(v, c, scores);
  else
    column_scores_serial(v, c, scores);
}

void weighted_column_sum_serial(const Matrix& v, std::span<const int> idx,
                                std::span<const double> w, std::span<double> out) {
  const int d = v.rows;
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (size_t j = 0; j < idx.size(); ++j) s += w[j] * v.at(i, idx[j]);
    out[i] = s;
  }
}

void weighted_column_sum_parallel(const Matrix& v, std::span<const int> idx,
                                  std::span<const double> w, std::span<double> out) {
  const int d = v.rows;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (size_t j = 0; j < idx.size(); ++j) s += w[j] * v.at(i, idx[j]);
    out[i] = s;
  }
}

void weighted_column_sum(const Matrix& v, std::span<const int> idx, std::span<const double> w,
                         std::span<double> out) {
  if (parallel_enabled() && static_cast<long>(v.rows) * static_cast<long>(idx.size()) >= kParallelThreshold)
    weighted_column_sum_parallel(v, idx, w, out);
  else
    weighted_column_sum_serial(v, idx, w, out);
}

void sign_matrix_fill_serial(uint64_t seed, int n, std::span<int8_t> out) {
  const uint64_t nn = static_cast<uint64_t>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<size_t>(i) * n + j] =
          static_cast<int8_t>(sign_at(seed, static_cast<uint64_t>(i) * nn + j));
}

void sign_matrix_fill_parallel(uint64_t seed, int n, std::span<int8_t> out) {
  const uint64_t nn = static_cast<uint64_t>(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<size_t>(i) * n + j] =
          static_cast<int8_t>(sign_at(seed, static_cast<uint64_t>(i) * nn + j));
}

void sign_matrix_fill(uint64_t seed, int n, std::span<int8_t> out) {
  if (parallel_enabled() && static_cast<long>(n) * n >= kParallelThreshold)
    sign_matrix_fill_parallel(seed, n, out);
  else
    sign_matrix_fill_serial(seed, n, out);
}

void row_plus_counts_serial(std::span<const int8_t> a, int n, std::span<const int> cols,
                            std::span<int> counts) {
  for (int i = 0; i < n; ++i) {
    const int8_t* row = a.data() + static_cast<size_t>(i) * n;
    int c = 0;
    for (int j : cols) c += (row[j] > 0);
    counts[i] = c;
  }
}

void row_plus_counts_parallel(std::span<const int8_t> a, int n, std::span<const int> cols,
                              std::span<int> counts) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const int8_t* row = a.data() + static_cast<size_t>(i) * n;
    int c = 0;
    for (int j : cols) c += (row[j] > 0);
    counts[i] = c;
  }
}

void row_plus_counts(std::span<const int8_t> a, int n, std::span<const int> cols,
                     std::span<int> counts) {
  if (parallel_enabled() && static_cast<long>(n) * static_cast<long>(cols.size()) >= 16 * kParallelThreshold)
    row_plus_counts_parallel(a, n, cols, counts);
  else
    row_plus_counts_serial(a, n, cols, counts);
}

}  // namespace cara::kernels

// Timing harness for the serial/OpenMP kernel pairs. Besides wall times it
// reports the max absolute difference between the two variants, which must
// be exactly zero.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cara/kernels.hpp"
#include "cara/matrix.hpp"
#include "cara/rng.hpp"
#include "cara/svm.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count() / reps;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void report(const char* name, double serial_ms, double parallel_ms, double diff) {
  std::printf("%-24s %10.3f ms %10.3f ms %8.2fx   max|diff| %g\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, diff);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both variants run serially\n");
#endif
  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  cara::Rng rng(7);
  const int reps = 5;

  {
    const int d = 400, m = 4000;
    cara::Matrix v(d, m);
    for (double& x : v.data) x = rng.next_double() - 0.5;
    std::vector<double> c(d);
    for (double& x : c) x = rng.next_double() - 0.5;
    std::vector<double> s1(m), s2(m);
    const double t1 = time_ms([&] { cara::kernels::column_scores_serial(v, c, s1); }, reps);
    const double t2 = time_ms([&] { cara::kernels::column_scores_parallel(v, c, s2); }, reps);
    report("column_scores", t1, t2, max_abs_diff(s1, s2));
  }

  {
    const int d = 400, m = 4000, k = 2000;
    cara::Matrix v(d, m);
    for (double& x : v.data) x = rng.next_double() - 0.5;
    std::vector<int> idx(k);
    std::vector<double> w(k, 1.0 / k);
    for (int i = 0; i < k; ++i) idx[i] = static_cast<int>(rng.next_below(m));
    std::vector<double> o1(d), o2(d);
    const double t1 =
        time_ms([&] { cara::kernels::weighted_column_sum_serial(v, idx, w, o1); }, reps);
    const double t2 =
        time_ms([&] { cara::kernels::weighted_column_sum_parallel(v, idx, w, o2); }, reps);
    report("weighted_column_sum", t1, t2, max_abs_diff(o1, o2));
  }

  {
    const int n = 2048;
    std::vector<int8_t> a1(static_cast<size_t>(n) * n), a2(a1.size());
    const double t1 = time_ms([&] { cara::kernels::sign_matrix_fill_serial(11, n, a1); }, reps);
    const double t2 = time_ms([&] { cara::kernels::sign_matrix_fill_parallel(11, n, a2); }, reps);
    double diff = 0.0;
    for (size_t i = 0; i < a1.size(); ++i) diff = std::max(diff, std::abs(double(a1[i] - a2[i])));
    report("sign_matrix_fill", t1, t2, diff);
  }

  {
    const int n = 2048, k = 16;
    std::vector<int8_t> a(static_cast<size_t>(n) * n);
    cara::kernels::sign_matrix_fill_serial(11, n, a);
    std::vector<int> cols(k);
    for (int i = 0; i < k; ++i) cols[i] = static_cast<int>(rng.next_below(n));
    std::vector<int> c1(n), c2(n);
    const double t1 = time_ms([&] { cara::kernels::row_plus_counts_serial(a, n, cols, c1); }, reps);
    const double t2 =
        time_ms([&] { cara::kernels::row_plus_counts_parallel(a, n, cols, c2); }, reps);
    double diff = 0.0;
    for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(double(c1[i] - c2[i])));
    report("row_plus_counts", t1, t2, diff);
  }

  {
    const int n = 600, d = 30;
    cara::Matrix points(d, n);
    for (double& x : points.data) x = rng.next_double() - 0.5;
    std::vector<double> z(n);
    for (double& x : z) x = rng.next_double() - 0.5;
    cara::svm::KernelSpec spec;
    spec.kind = cara::svm::KernelKind::rbf;
    spec.sigma = 1.0;
    spec.shift = 0.05;
    std::vector<double> o1, o2;
    cara::kernels::set_parallel(false);
    const double t1 = time_ms([&] { o1 = cara::svm::kernel_apply(spec, points, z); }, reps);
    cara::kernels::set_parallel(true);
    const double t2 = time_ms([&] { o2 = cara::svm::kernel_apply(spec, points, z); }, reps);
    report("rbf kernel_apply", t1, t2, max_abs_diff(o1, o2));
  }

  return 0;
}

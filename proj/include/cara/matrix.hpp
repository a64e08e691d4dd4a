#pragma once

#include <cassert>
#include <span>
#include <vector>

namespace cara {

// Dense column-major matrix. Columns are the natural unit here (vertex
// families are stored one vertex per column).
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return data[static_cast<size_t>(j) * rows + i]; }
  double at(int i, int j) const { return data[static_cast<size_t>(j) * rows + i]; }

  std::span<const double> col(int j) const {
    return {data.data() + static_cast<size_t>(j) * rows, static_cast<size_t>(rows)};
  }
  std::span<double> col(int j) {
    return {data.data() + static_cast<size_t>(j) * rows, static_cast<size_t>(rows)};
  }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace cara

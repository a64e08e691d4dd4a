#pragma once

// Test-side oracles and brute-force enumerators. These stay independent of
// the solver paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "cara/matrix.hpp"
#include "cara/oracles.hpp"
#include "cara/rng.hpp"

namespace testutil {

inline cara::Matrix make_matrix(int rows, const std::vector<std::vector<double>>& columns) {
  cara::Matrix m(rows, static_cast<int>(columns.size()));
  for (size_t j = 0; j < columns.size(); ++j)
    for (int i = 0; i < rows; ++i) m.at(i, static_cast<int>(j)) = columns[j][i];
  return m;
}

inline std::vector<double> random_in_lq_ball(cara::Rng& rng, int dim, double q, double scale = 1.0) {
  std::vector<double> v(dim);
  for (double& x : v) x = 2.0 * rng.next_double() - 1.0;
  double norm = 0.0;
  for (double x : v) norm += std::pow(std::abs(x), q);
  norm = std::pow(norm, 1.0 / q);
  const double radius = scale * rng.next_double();
  for (double& x : v) x = norm > 0 ? x / norm * radius : 0.0;
  return v;
}

// Dense convex weights (exponential samples, normalized).
inline std::vector<double> random_simplex_point(cara::Rng& rng, int m) {
  std::vector<double> w(m);
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.next_double());
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

// All subsets of {0..n-1} of the given size.
inline std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline std::vector<std::vector<int>> matroid_bases(const cara::oracles::Matroid& m) {
  std::vector<std::vector<int>> bases;
  for (auto& s : subsets_of_size(m.ground_size, m.rank))
    if (m.independent(s)) bases.push_back(s);
  return bases;
}

// All s-t paths as arc-id lists, DFS in arc input order.
inline std::vector<std::vector<int>> all_paths(const cara::oracles::DagFlowNetwork& g) {
  std::vector<std::vector<int>> adj(g.num_nodes);
  for (size_t a = 0; a < g.arcs.size(); ++a) adj[g.arcs[a].tail].push_back(static_cast<int>(a));
  std::vector<std::vector<int>> paths;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int v) {
    if (v == g.sink) {
      paths.push_back(cur);
      return;
    }
    for (int a : adj[v]) {
      cur.push_back(a);
      rec(g.arcs[a].head);
      cur.pop_back();
    }
  };
  rec(g.source);
  return paths;
}

// Base-polyhedron vertices from all orderings (ground sets <= 8 or so).
inline std::vector<std::vector<double>> base_polytope_vertices(
    int n, const std::function<double(const std::vector<int>&)>& f) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<double>> verts;
  do {
    std::vector<double> q(n);
    std::vector<int> prefix;
    double prev = 0.0;
    for (int e : perm) {
      prefix.insert(std::lower_bound(prefix.begin(), prefix.end(), e), e);
      const double val = f(prefix);
      q[e] = val - prev;
      prev = val;
    }
    verts.push_back(std::move(q));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return verts;
}

// Largest eigenvalue of a symmetric matrix from below (power iteration on
// A + shift to handle negative spectra is unnecessary for PSD kernels).
inline double power_iteration(const cara::Matrix& a, int iters = 500) {
  const int n = a.rows;
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double lambda = 0.0;
  for (int t = 0; t < iters; ++t) {
    std::vector<double> w(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[i] += a.at(i, j) * v[j];
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    lambda = 0.0;
    for (int i = 0; i < n; ++i) lambda += v[i] * w[i];
    for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  return std::abs(lambda);
}

// Gauss-Jordan inverse for small symmetric matrices (test-only).
inline cara::Matrix invert(const cara::Matrix& a) {
  const int n = a.rows;
  cara::Matrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, n + i) = 1.0;
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(aug.at(r, col)) > std::abs(aug.at(pivot, col))) pivot = r;
    for (int j = 0; j < 2 * n; ++j) std::swap(aug.at(col, j), aug.at(pivot, j));
    const double d = aug.at(col, col);
    for (int j = 0; j < 2 * n; ++j) aug.at(col, j) /= d;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = aug.at(r, col);
      for (int j = 0; j < 2 * n; ++j) aug.at(r, j) -= factor * aug.at(col, j);
    }
  }
  cara::Matrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

// Every weight vector of the eta-capped simplex over `size` coordinates on
// a grid of the given resolution, cap boundary included.
inline std::vector<std::vector<double>> capped_simplex_grid(int size, double eta,
                                                            double resolution) {
  std::vector<std::vector<double>> out;
  std::vector<double> cur(size, 0.0);
  std::function<void(int, double)> rec = [&](int idx, double remaining) {
    if (idx == size - 1) {
      if (remaining <= eta * (1.0 + 1e-9)) {
        cur[idx] = remaining;
        out.push_back(cur);
      }
      return;
    }
    for (double w = 0.0; w <= std::min(eta, remaining) + 1e-12; w += resolution) {
      cur[idx] = std::min(w, eta);
      rec(idx + 1, remaining - cur[idx]);
    }
    if (eta < remaining && std::fmod(eta, resolution) > 1e-12) {
      cur[idx] = eta;  // cap boundary is feasible but off-grid
      rec(idx + 1, remaining - eta);
    }
  };
  rec(0, 1.0);
  return out;
}

}  // namespace testutil

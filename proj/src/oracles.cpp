#include "cara/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "cara/errors.hpp"
#include "cara/kernels.hpp"

namespace cara::oracles {

int VertexStore::intern(std::vector<double> v) {
  std::vector<uint64_t> key(v.size());
  for (size_t i = 0; i < v.size(); ++i) key[i] = std::bit_cast<uint64_t>(v[i]);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(verts_.size());
  ids_.emplace(std::move(key), id);
  verts_.push_back(std::move(v));
  return id;
}

const std::vector<double>& VertexStore::get(int id) const {
  if (id < 0 || id >= static_cast<int>(verts_.size()))
    throw input_error("vertex id " + std::to_string(id) + " is not resolvable");
  return verts_[id];
}

ExplicitOracle::ExplicitOracle(Matrix v) : Lmo(v.rows), v_(std::move(v)) {
  for (double x : v_.data)
    if (!std::isfinite(x)) throw input_error("explicit oracle: matrix has non-finite entries");
  columns_.reserve(v_.cols);
  for (int j = 0; j < v_.cols; ++j) {
    auto c = v_.col(j);
    columns_.emplace_back(c.begin(), c.end());
  }
  scores_.resize(v_.cols);
}

int ExplicitOracle::do_minimize(std::span<const double> c) {
  kernels::column_scores(v_, c, scores_);
  int best = 0;
  for (int j = 1; j < v_.cols; ++j)
    if (scores_[j] < scores_[best]) best = j;  // strict: smallest index wins ties
  return best;
}

const std::vector<double>& ExplicitOracle::vertex(int id) const {
  if (id < 0 || id >= static_cast<int>(columns_.size()))
    throw input_error("vertex id " + std::to_string(id) + " is not resolvable");
  return columns_[id];
}

std::optional<int> ExplicitOracle::find_vertex(std::span<const double> point) const {
  for (int j = 0; j < v_.cols; ++j) {
    bool eq = true;
    for (int i = 0; i < v_.rows && eq; ++i) eq = (v_.at(i, j) == point[i]);
    if (eq) return j;
  }
  return std::nullopt;
}

Matroid uniform_matroid(int ground_size, int rank) {
  if (ground_size < 1 || rank < 0 || rank > ground_size)
    throw input_error("uniform matroid: need 0 <= rank <= ground size");
  Matroid m;
  m.ground_size = ground_size;
  m.rank = rank;
  m.kind = "uniform";
  m.independent = [rank](const std::vector<int>& s) {
    return static_cast<int>(s.size()) <= rank;
  };
  return m;
}

Matroid partition_matroid(int ground_size, const std::vector<std::vector<int>>& blocks,
                          const std::vector<int>& capacities) {
  if (blocks.size() != capacities.size())
    throw input_error("partition matroid: one capacity per block required");
  std::vector<int> block_of(ground_size, -1);
  for (size_t b = 0; b < blocks.size(); ++b)
    for (int e : blocks[b]) {
      if (e < 0 || e >= ground_size || block_of[e] != -1)
        throw input_error("partition matroid: blocks must partition the ground set");
      block_of[e] = static_cast<int>(b);
    }
  for (int e = 0; e < ground_size; ++e)
    if (block_of[e] == -1) throw input_error("partition matroid: element missing from all blocks");

  int rank = 0;
  for (size_t b = 0; b < blocks.size(); ++b)
    rank += std::min(capacities[b], static_cast<int>(blocks[b].size()));

  Matroid m;
  m.ground_size = ground_size;
  m.rank = rank;
  m.kind = "partition";
  m.independent = [block_of, capacities](const std::vector<int>& s) {
    std::vector<int> used(capacities.size(), 0);
    for (int e : s)
      if (++used[block_of[e]] > capacities[block_of[e]]) return false;
    return true;
  };
  return m;
}

namespace {
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};
}  // namespace

Matroid graphic_matroid(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  for (auto [u, v] : edges)
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices)
      throw input_error("graphic matroid: edge endpoint out of range");
  Matroid m;
  m.ground_size = static_cast<int>(edges.size());
  m.kind = "graphic";
  m.independent = [num_vertices, edges](const std::vector<int>& s) {
    UnionFind uf(num_vertices);  // rebuilt per query
    for (int e : s)
      if (!uf.unite(edges[e].first, edges[e].second)) return false;
    return true;
  };
  // Rank = size of any maximal forest.
  UnionFind uf(num_vertices);
  int rank = 0;
  for (auto [u, v] : edges)
    if (uf.unite(u, v)) ++rank;
  m.rank = rank;
  return m;
}

MatroidBaseOracle::MatroidBaseOracle(Matroid m) : Lmo(m.ground_size), m_(std::move(m)) {
  if (!m_.independent) throw input_error("matroid: missing independence test");
}

int MatroidBaseOracle::do_minimize(std::span<const double> c) {
  if (static_cast<int>(c.size()) != m_.ground_size)
    throw input_error("matroid oracle: weight dimension mismatch");
  std::vector<int> order(m_.ground_size);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return c[a] < c[b]; });  // ties by index

  last_queries_ = 0;
  std::vector<int> base;
  base.reserve(m_.rank);
  for (int e : order) {
    if (static_cast<int>(base.size()) == m_.rank) break;
    std::vector<int> candidate(base);
    candidate.insert(std::lower_bound(candidate.begin(), candidate.end(), e), e);
    ++last_queries_;
    if (m_.independent(candidate)) base = std::move(candidate);
  }
  total_queries_ += last_queries_;
  if (static_cast<int>(base.size()) != m_.rank)
    throw contract_error("matroid oracle: greedy failed to reach a base of the declared rank");

  std::vector<double> chi(m_.ground_size, 0.0);
  for (int e : base) chi[e] = 1.0;
  const int before = store_.size();
  const int id = store_.intern(std::move(chi));
  if (id == before) bases_.push_back(base);
  return id;
}

const std::vector<double>& MatroidBaseOracle::vertex(int id) const { return store_.get(id); }

const std::vector<int>& MatroidBaseOracle::base_elements(int id) const {
  if (id < 0 || id >= static_cast<int>(bases_.size()))
    throw input_error("vertex id " + std::to_string(id) + " is not resolvable");
  return bases_[id];
}

void validate(const DagFlowNetwork& g) {
  const int n = g.num_nodes;
  if (n < 2) throw input_error("flow network: need at least source and sink");
  if (g.source < 0 || g.source >= n || g.sink < 0 || g.sink >= n || g.source == g.sink)
    throw input_error("flow network: bad source/sink");
  if (static_cast<int>(g.topo_order.size()) != n)
    throw input_error("flow network: topological order must list every node once");
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    const int v = g.topo_order[i];
    if (v < 0 || v >= n || pos[v] != -1)
      throw input_error("flow network: topological order is not a permutation of the nodes");
    pos[v] = i;
  }
  for (size_t a = 0; a < g.arcs.size(); ++a) {
    const Arc& arc = g.arcs[a];
    if (arc.tail < 0 || arc.tail >= n || arc.head < 0 || arc.head >= n)
      throw input_error("arc " + std::to_string(a + 1) + ": endpoint out of range");
    if (pos[arc.tail] >= pos[arc.head])
      throw input_error("arc " + std::to_string(a + 1) +
                        ": violates the stated topological order (graph not a DAG under it)");
    if (arc.flow < -1e-9) throw input_error("arc " + std::to_string(a + 1) + ": negative flow");
  }
  std::vector<double> net(n, 0.0);
  for (const Arc& arc : g.arcs) {
    net[arc.tail] -= arc.flow;
    net[arc.head] += arc.flow;
  }
  for (int v = 0; v < n; ++v) {
    if (v == g.source || v == g.sink) continue;
    if (std::abs(net[v]) > 1e-9)
      throw input_error("flow conservation violated at node " + std::to_string(v + 1));
  }
  if (std::abs(net[g.source] + 1.0) > 1e-9 || std::abs(net[g.sink] - 1.0) > 1e-9)
    throw input_error("flow network: total s-t flow must be one unit");
}

DagPathOracle::DagPathOracle(DagFlowNetwork g)
    : Lmo(static_cast<int>(g.arcs.size())), g_(std::move(g)) {
  validate(g_);
  adj_.assign(g_.num_nodes, {});
  for (size_t a = 0; a < g_.arcs.size(); ++a) adj_[g_.arcs[a].tail].push_back(static_cast<int>(a));
}

int DagPathOracle::do_minimize(std::span<const double> c) {
  if (c.size() != g_.arcs.size()) throw input_error("path oracle: weight dimension mismatch");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g_.num_nodes, kInf);
  std::vector<int> via(g_.num_nodes, -1);
  dist[g_.source] = 0.0;
  for (int v : g_.topo_order) {
    if (dist[v] == kInf) continue;
    for (int a : adj_[v]) {
      const double nd = dist[v] + c[a];
      if (nd < dist[g_.arcs[a].head]) {  // strict: first-found path wins ties
        dist[g_.arcs[a].head] = nd;
        via[g_.arcs[a].head] = a;
      }
    }
  }
  if (dist[g_.sink] == kInf) throw input_error("path oracle: sink unreachable from source");

  std::vector<int> arcs;
  for (int v = g_.sink; v != g_.source;) {
    const int a = via[v];
    arcs.push_back(a);
    v = g_.arcs[a].tail;
  }
  std::reverse(arcs.begin(), arcs.end());

  std::vector<double> inc(g_.arcs.size(), 0.0);
  for (int a : arcs) inc[a] = 1.0;
  const int before = store_.size();
  const int id = store_.intern(std::move(inc));
  if (id == before) paths_.push_back(std::move(arcs));
  return id;
}

const std::vector<double>& DagPathOracle::vertex(int id) const { return store_.get(id); }

const std::vector<int>& DagPathOracle::path_arcs(int id) const {
  if (id < 0 || id >= static_cast<int>(paths_.size()))
    throw input_error("vertex id " + std::to_string(id) + " is not resolvable");
  return paths_[id];
}

SubmodularBaseOracle::SubmodularBaseOracle(const sfm::SubmodularOracle& f)
    : Lmo(f.ground_size()), f_(f) {}

int SubmodularBaseOracle::do_minimize(std::span<const double> c) {
  const int n = f_.ground_size();
  if (static_cast<int>(c.size()) != n)
    throw input_error("submodular base oracle: weight dimension mismatch");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return c[a] < c[b]; });

  std::vector<double> q(n, 0.0);
  std::vector<int> prefix;
  prefix.reserve(n);
  double prev = 0.0;  // f(empty) = 0 after normalization
  for (int e : order) {
    prefix.insert(std::lower_bound(prefix.begin(), prefix.end(), e), e);
    const double val = f_.eval(prefix);
    if (!std::isfinite(val)) throw numeric_error("submodular oracle returned a non-finite value");
    q[e] = val - prev;
    prev = val;
  }
  return store_.intern(std::move(q));
}

const std::vector<double>& SubmodularBaseOracle::vertex(int id) const { return store_.get(id); }

std::vector<double> rch_oracle(std::span<const double> y, std::span<const int> labels,
                               double eta) {
  if (y.size() != labels.size()) throw input_error("rch oracle: weight/label size mismatch");
  if (!(eta > 0.0 && eta <= 1.0)) throw input_error("rch oracle: eta must lie in (0, 1]");
  std::vector<int> pos, neg;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 0)
      pos.push_back(static_cast<int>(i));
    else if (labels[i] < 0)
      neg.push_back(static_cast<int>(i));
    else
      throw input_error("rch oracle: labels must be +1 or -1");
  }
  if (pos.empty() || neg.empty()) throw input_error("rch oracle: both label classes must be nonempty");
  if (eta * static_cast<double>(pos.size()) < 1.0 - 1e-12 ||
      eta * static_cast<double>(neg.size()) < 1.0 - 1e-12)
    throw input_error("rch oracle: eta * class size < 1, the capped hull is empty");

  std::stable_sort(pos.begin(), pos.end(), [&](int a, int b) { return y[a] < y[b]; });
  std::stable_sort(neg.begin(), neg.end(), [&](int a, int b) { return y[a] > y[b]; });

  std::vector<double> lambda(y.size(), 0.0);
  auto distribute = [eta, &lambda](const std::vector<int>& order, double sign) {
    double remaining = 1.0;
    for (int idx : order) {
      if (remaining <= 0.0) break;
      const double take = remaining <= eta * (1.0 + 1e-12) ? remaining : eta;
      lambda[idx] = sign * take;
      remaining -= take;
    }
  };
  distribute(pos, +1.0);
  distribute(neg, -1.0);
  return lambda;
}

}  // namespace cara::oracles

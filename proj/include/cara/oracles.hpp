#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cara/matrix.hpp"
#include "cara/submodular_oracle.hpp"

namespace cara::oracles {

// Linear minimization oracle: weight vector in, minimizing vertex out.
// Vertices are interned so results can refer to them by id; minimize()
// counts calls, vertex lookups do not.
class Lmo {
 public:
  explicit Lmo(int dim) : dim_(dim) {}
  virtual ~Lmo() = default;

  int dim() const { return dim_; }
  long calls() const { return calls_; }

  int minimize(std::span<const double> c) {
    ++calls_;
    return do_minimize(c);
  }

  virtual const std::vector<double>& vertex(int id) const = 0;

  // Exact-match probe; implemented where the vertex family is explicit.
  virtual std::optional<int> find_vertex(std::span<const double> point) const {
    (void)point;
    return std::nullopt;
  }

 protected:
  virtual int do_minimize(std::span<const double> c) = 0;

  int dim_;
  long calls_ = 0;
};

// Interning store shared by the combinatorial oracles: vertices keyed by
// their exact bit pattern, ids assigned in first-seen order.
class VertexStore {
 public:
  int intern(std::vector<double> v);
  const std::vector<double>& get(int id) const;
  int size() const { return static_cast<int>(verts_.size()); }

 private:
  std::map<std::vector<uint64_t>, int> ids_;
  std::vector<std::vector<double>> verts_;
};

// Columns of an explicit matrix; argmin c.v over columns, smallest index
// on ties.
class ExplicitOracle : public Lmo {
 public:
  explicit ExplicitOracle(Matrix v);

  const std::vector<double>& vertex(int id) const override;
  std::optional<int> find_vertex(std::span<const double> point) const override;
  const Matrix& matrix() const { return v_; }

 protected:
  int do_minimize(std::span<const double> c) override;

 private:
  Matrix v_;
  std::vector<std::vector<double>> columns_;
  mutable std::vector<double> scores_;
};

struct Matroid {
  int ground_size = 0;
  int rank = 0;
  std::function<bool(const std::vector<int>&)> independent;  // sorted 0-based set
  std::string kind;
};

Matroid uniform_matroid(int ground_size, int rank);
// blocks partition the ground set; capacity caps per block.
Matroid partition_matroid(int ground_size, const std::vector<std::vector<int>>& blocks,
                          const std::vector<int>& capacities);
// Ground set = edges (0-based pairs of 0-based vertices); independent sets
// are forests, tested by a union-find rebuilt per query.
Matroid graphic_matroid(int num_vertices, const std::vector<std::pair<int, int>>& edges);

// Greedy over ascending weights; returns base characteristic vectors.
class MatroidBaseOracle : public Lmo {
 public:
  explicit MatroidBaseOracle(Matroid m);

  const std::vector<double>& vertex(int id) const override;
  const std::vector<int>& base_elements(int id) const;
  long last_call_independence_queries() const { return last_queries_; }
  long total_independence_queries() const { return total_queries_; }
  const Matroid& matroid() const { return m_; }

 protected:
  int do_minimize(std::span<const double> c) override;

 private:
  Matroid m_;
  VertexStore store_;
  std::vector<std::vector<int>> bases_;  // by vertex id
  long last_queries_ = 0;
  long total_queries_ = 0;
};

struct Arc {
  int tail = 0;
  int head = 0;
  double flow = 0.0;
};

struct DagFlowNetwork {
  int num_nodes = 0;
  std::vector<Arc> arcs;
  int source = 0;
  int sink = 0;
  std::vector<int> topo_order;  // all nodes, tails before heads
};

// Checks the stored topological order, flow conservation and unit value;
// throws input_error naming the offending node or arc.
void validate(const DagFlowNetwork& g);

// Min-weight s-t path by one dynamic-programming pass over the
// topological order; weights may be negative. Vertices are arc-incidence
// vectors.
class DagPathOracle : public Lmo {
 public:
  explicit DagPathOracle(DagFlowNetwork g);

  const std::vector<double>& vertex(int id) const override;
  const std::vector<int>& path_arcs(int id) const;
  const DagFlowNetwork& network() const { return g_; }

 protected:
  int do_minimize(std::span<const double> c) override;

 private:
  DagFlowNetwork g_;
  std::vector<std::vector<int>> adj_;  // arc ids by tail, input order
  std::vector<std::vector<int>> paths_;
  VertexStore store_;
};

// Edmonds' greedy over the base polyhedron: sort weights ascending, take
// marginals of the sorted prefixes. Exactly n evaluations per call.
class SubmodularBaseOracle : public Lmo {
 public:
  explicit SubmodularBaseOracle(const sfm::SubmodularOracle& f);

  const std::vector<double>& vertex(int id) const override;
  const sfm::SubmodularOracle& fn() const { return f_; }

 protected:
  int do_minimize(std::span<const double> c) override;

 private:
  const sfm::SubmodularOracle& f_;
  VertexStore store_;
};

// Minimizer of y.lambda over S_eta, the differences of eta-capped convex
// hulls of the two label classes: positive mass goes to the smallest
// weights of the +1 class, negative mass to the largest of the -1 class.
std::vector<double> rch_oracle(std::span<const double> y, std::span<const int> labels, double eta);

}  // namespace cara::oracles

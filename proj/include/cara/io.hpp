#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cara/matrix.hpp"
#include "cara/oracles.hpp"

namespace cara::io {

// Dense-matrix file: text form is a "d m" header line followed by m lines
// of d decimal reals, one column per line. A binary variant starts with
// the magic "CARA1" followed by little-endian u64 d, u64 m and d*m
// float64 values in column-major order; reads auto-detect the magic.
Matrix read_dense_matrix(const std::string& path);
void write_dense_matrix(const std::string& path, const Matrix& m, bool binary = false);

// Plain whitespace-separated reals.
std::vector<double> read_vector_file(const std::string& path);
void write_vector_file(const std::string& path, std::span<const double> v);

// Edge list, one "u v" (or "u v w" when weighted) line per edge,
// 1-indexed vertices. Blank lines are skipped.
struct EdgeList {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // 0-based
  std::vector<double> weights;             // empty when unweighted
};
EdgeList read_edge_list(const std::string& path, bool weighted);

// Partition matroid description: one "capacity e1 e2 ..." line per block,
// 1-indexed elements.
struct PartitionBlocks {
  int ground_size = 0;
  std::vector<std::vector<int>> blocks;  // 0-based
  std::vector<int> capacities;
};
PartitionBlocks read_partition_blocks(const std::string& path);

// Flow network: header "n m s t", then m "tail head flow" lines, then one
// line with all n nodes in topological order. 1-indexed nodes.
oracles::DagFlowNetwork read_dag(const std::string& path);

// Sparse classification rows: "label idx:val idx:val ..." with 1-indexed
// feature ids; labels +-1. Points come back as columns.
struct SvmData {
  Matrix points;
  std::vector<int> labels;
};
SvmData read_libsvm(const std::string& path);

}  // namespace cara::io

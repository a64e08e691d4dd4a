#include "cara/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cara/errors.hpp"

namespace cara::io {

namespace {

constexpr char kMagic[5] = {'C', 'A', 'R', 'A', '1'};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw input_error(path + ": " + what);
}

[[noreturn]] void fail_line(const std::string& path, size_t line, const std::string& what) {
  fail(path, "line " + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

uint64_t read_u64le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void write_u64le(std::ostream& out, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(b), 8);
}

}  // namespace

Matrix read_dense_matrix(const std::string& path) {
  {
    std::ifstream probe = open_in(path, true);
    char magic[5] = {};
    probe.read(magic, 5);
    if (probe.gcount() == 5 && std::memcmp(magic, kMagic, 5) == 0) {
      const uint64_t d = read_u64le(probe);
      const uint64_t m = read_u64le(probe);
      if (!probe || d == 0 || m == 0 || d > (1u << 24) || m > (1u << 24))
        fail(path, "binary header is malformed");
      Matrix mat(static_cast<int>(d), static_cast<int>(m));
      probe.read(reinterpret_cast<char*>(mat.data.data()),
                 static_cast<std::streamsize>(sizeof(double) * mat.data.size()));
      if (static_cast<size_t>(probe.gcount()) != sizeof(double) * mat.data.size())
        fail(path, "binary payload truncated");
      return mat;
    }
  }

  std::ifstream in = open_in(path);
  std::string line;
  size_t line_no = 0;
  int d = 0, m = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream header(line);
    if (header >> d >> m) break;
    if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos)
      fail_line(path, line_no, "expected header \"d m\"");
  }
  if (d <= 0 || m <= 0) fail(path, "missing or non-positive \"d m\" header");

  Matrix mat(d, m);
  int col = 0;
  while (col < m) {
    if (!std::getline(in, line)) fail(path, "expected " + std::to_string(m) + " columns, got " +
                                                std::to_string(col));
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    for (int i = 0; i < d; ++i) {
      double x;
      if (!(row >> x))
        fail_line(path, line_no,
                  "column " + std::to_string(col + 1) + " needs " + std::to_string(d) +
                      " values, entry " + std::to_string(i + 1) + " is malformed or missing");
      mat.at(i, col) = x;
    }
    double extra;
    if (row >> extra)
      fail_line(path, line_no, "column " + std::to_string(col + 1) + " has more than " +
                                   std::to_string(d) + " values");
    ++col;
  }
  return mat;
}

void write_dense_matrix(const std::string& path, const Matrix& m, bool binary) {
  if (binary) {
    std::ofstream out = open_out(path, true);
    out.write(kMagic, 5);
    write_u64le(out, static_cast<uint64_t>(m.rows));
    write_u64le(out, static_cast<uint64_t>(m.cols));
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(sizeof(double) * m.data.size()));
    return;
  }
  std::ofstream out = open_out(path);
  out << m.rows << " " << m.cols << "\n";
  char buf[32];
  for (int j = 0; j < m.cols; ++j) {
    for (int i = 0; i < m.rows; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.at(i, j));
      out << (i ? " " : "") << buf;
    }
    out << "\n";
  }
}

std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  if (!in.eof()) fail(path, "malformed value after " + std::to_string(v.size()) + " entries");
  if (v.empty()) fail(path, "no values found");
  return v;
}

void write_vector_file(const std::string& path, std::span<const double> v) {
  std::ofstream out = open_out(path);
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out << buf << "\n";
  }
}

EdgeList read_edge_list(const std::string& path, bool weighted) {
  std::ifstream in = open_in(path);
  EdgeList list;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    int u, v;
    if (!(row >> u >> v)) fail_line(path, line_no, "expected \"u v\"");
    if (u < 1 || v < 1) fail_line(path, line_no, "vertices are 1-indexed");
    double w = 1.0;
    if (weighted && !(row >> w)) fail_line(path, line_no, "expected \"u v w\"");
    list.edges.emplace_back(u - 1, v - 1);
    if (weighted) list.weights.push_back(w);
    list.num_vertices = std::max({list.num_vertices, u, v});
  }
  if (list.edges.empty()) fail(path, "no edges found");
  return list;
}

PartitionBlocks read_partition_blocks(const std::string& path) {
  std::ifstream in = open_in(path);
  PartitionBlocks pb;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    int cap;
    if (!(row >> cap) || cap < 0) fail_line(path, line_no, "expected \"capacity e1 e2 ...\"");
    std::vector<int> block;
    int e;
    while (row >> e) {
      if (e < 1) fail_line(path, line_no, "elements are 1-indexed");
      block.push_back(e - 1);
      pb.ground_size = std::max(pb.ground_size, e);
    }
    if (block.empty()) fail_line(path, line_no, "block has no elements");
    pb.blocks.push_back(std::move(block));
    pb.capacities.push_back(cap);
  }
  if (pb.blocks.empty()) fail(path, "no blocks found");
  return pb;
}

oracles::DagFlowNetwork read_dag(const std::string& path) {
  std::ifstream in = open_in(path);
  oracles::DagFlowNetwork g;
  std::string line;
  size_t line_no = 0;
  int m = 0;
  if (!std::getline(in, line)) fail(path, "empty file");
  ++line_no;
  {
    std::istringstream header(line);
    int s, t;
    if (!(header >> g.num_nodes >> m >> s >> t))
      fail_line(path, line_no, "expected header \"n m s t\"");
    if (g.num_nodes < 2 || m < 1) fail_line(path, line_no, "need n >= 2 and m >= 1");
    if (s < 1 || s > g.num_nodes || t < 1 || t > g.num_nodes)
      fail_line(path, line_no, "source/sink out of range");
    g.source = s - 1;
    g.sink = t - 1;
  }
  for (int a = 0; a < m;) {
    if (!std::getline(in, line)) fail(path, "expected " + std::to_string(m) + " arcs");
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    int tail, head;
    double flow;
    if (!(row >> tail >> head >> flow)) fail_line(path, line_no, "expected \"tail head flow\"");
    if (tail < 1 || tail > g.num_nodes || head < 1 || head > g.num_nodes)
      fail_line(path, line_no, "arc endpoint out of range");
    g.arcs.push_back({tail - 1, head - 1, flow});
    ++a;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    int v;
    while (row >> v) {
      if (v < 1 || v > g.num_nodes) fail_line(path, line_no, "topological order entry out of range");
      g.topo_order.push_back(v - 1);
    }
    break;
  }
  if (static_cast<int>(g.topo_order.size()) != g.num_nodes)
    fail(path, "topological order must list all " + std::to_string(g.num_nodes) + " nodes");
  oracles::validate(g);
  return g;
}

SvmData read_libsvm(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<int> labels;
  std::vector<std::vector<std::pair<int, double>>> rows;
  int max_feature = 0;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    double label;
    if (!(row >> label)) fail_line(path, line_no, "expected a label");
    if (label != 1.0 && label != -1.0) fail_line(path, line_no, "labels must be +1 or -1");
    std::vector<std::pair<int, double>> feats;
    std::string token;
    while (row >> token) {
      const size_t colon = token.find(':');
      if (colon == std::string::npos)
        fail_line(path, line_no, "expected idx:val, got \"" + token + "\"");
      try {
        const int idx = std::stoi(token.substr(0, colon));
        const double val = std::stod(token.substr(colon + 1));
        if (idx < 1) fail_line(path, line_no, "feature ids are 1-indexed");
        feats.emplace_back(idx - 1, val);
        max_feature = std::max(max_feature, idx);
      } catch (const std::logic_error&) {
        fail_line(path, line_no, "expected idx:val, got \"" + token + "\"");
      }
    }
    labels.push_back(label > 0 ? 1 : -1);
    rows.push_back(std::move(feats));
  }
  if (labels.empty()) fail(path, "no data rows found");

  SvmData data;
  data.labels = std::move(labels);
  data.points = Matrix(std::max(max_feature, 1), static_cast<int>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (auto [idx, val] : rows[i]) data.points.at(idx, static_cast<int>(i)) = val;
  return data;
}

}  // namespace cara::io

// Batch front end: file ingestion, solver configuration, JSON/CSV output.
// Exit codes: 0 success, 2 input error, 3 convergence failure, 4 contract
// violation. Result JSON is deterministic; timings go to stderr.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cara/caratheodory.hpp"
#include "cara/errors.hpp"
#include "cara/io.hpp"
#include "cara/json_out.hpp"
#include "cara/kernels.hpp"
#include "cara/lower_bounds.hpp"
#include "cara/mirror.hpp"
#include "cara/oracles.hpp"
#include "cara/submodular.hpp"
#include "cara/svm.hpp"
#include "cara/version.hpp"

namespace {

using cara::jsonio::ordered_json;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void emit(const ordered_json& doc, const std::string& out_path) {
  const std::string text = cara::jsonio::dump(doc);
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw cara::input_error(out_path + ": cannot open for writing");
  out << text;
}

ordered_json mirror_constants(double p, double radius, double eps) {
  const long budget = cara::iteration_budget(p, radius, eps);
  const double sigma = p - 1.0;
  const double rho = 2.0;
  const double eta = std::sqrt(2.0 * 0.5 / (static_cast<double>(budget) * sigma * rho * rho));
  return ordered_json{{"T", budget}, {"eta", eta}, {"rho", rho},
                      {"sigma", sigma}, {"D", 0.5}, {"radius", radius}};
}

struct CommonOpts {
  std::string out_path;
  uint64_t seed = 0;
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--out", common.out_path, "write the result JSON here instead of stdout");
  cmd->add_option("--seed", common.seed, "seed recorded in the reproducibility block");
  cmd->add_flag("--serial", common.serial, "disable the OpenMP kernels");
}

void run_decompose(const std::string& matrix_path, const std::string& target_path, double p,
                   double eps, std::optional<double> radius_opt, bool assert_membership,
                   const CommonOpts& common) {
  cara::Matrix v = cara::io::read_dense_matrix(matrix_path);
  const std::vector<double> u = cara::io::read_vector_file(target_path);
  if (static_cast<int>(u.size()) != v.rows)
    throw cara::input_error("target has " + std::to_string(u.size()) +
                            " entries but matrix rows are " + std::to_string(v.rows));

  double radius = 0.0;
  if (radius_opt) {
    radius = *radius_opt;
  } else {
    for (int j = 0; j < v.cols; ++j) radius = std::max(radius, cara::mirror::lq_norm(v.col(j), p));
    if (radius <= 0.0) radius = 1.0;
  }

  cara::oracles::ExplicitOracle oracle(std::move(v));
  cara::CaraProblem prob{&oracle, u, p, radius, eps};
  cara::SolveOptions opts;
  opts.assert_membership = assert_membership;

  Stopwatch watch;
  const cara::SparseCombination comb = cara::approx_caratheodory(prob, opts);
  const double wall = watch.ms();

  ordered_json doc = cara::jsonio::run_document(
      "decompose", common.seed,
      ordered_json{{"matrix", matrix_path}, {"target", target_path}, {"p", p}, {"eps", eps}},
      mirror_constants(p, radius, eps));
  doc["result"] = cara::jsonio::combination_json(comb);
  emit(doc, common.out_path);
  std::cerr << "decompose: residual " << comb.residual_norm << ", support "
            << comb.entries.size() << ", " << comb.iterations << " iterations, " << wall
            << " ms\n";
}

void run_matroid_round(const std::string& kind, const std::string& matroid_path, int ground_size,
                       int rank, const std::string& target_path, double p, double eps,
                       const CommonOpts& common) {
  cara::oracles::Matroid matroid;
  if (kind == "graphic") {
    if (matroid_path.empty()) throw cara::input_error("graphic matroid needs --matroid FILE");
    const cara::io::EdgeList edges = cara::io::read_edge_list(matroid_path, false);
    matroid = cara::oracles::graphic_matroid(edges.num_vertices, edges.edges);
  } else if (kind == "uniform") {
    if (ground_size <= 0 || rank < 0)
      throw cara::input_error("uniform matroid needs --ground-size and --rank");
    matroid = cara::oracles::uniform_matroid(ground_size, rank);
  } else if (kind == "partition") {
    if (matroid_path.empty()) throw cara::input_error("partition matroid needs --matroid FILE");
    const cara::io::PartitionBlocks pb = cara::io::read_partition_blocks(matroid_path);
    matroid = cara::oracles::partition_matroid(pb.ground_size, pb.blocks, pb.capacities);
  } else {
    throw cara::input_error("unknown matroid kind \"" + kind + "\"");
  }

  const std::vector<double> target = cara::io::read_vector_file(target_path);
  if (static_cast<int>(target.size()) != matroid.ground_size)
    throw cara::input_error("target size " + std::to_string(target.size()) +
                            " does not match the ground set size " +
                            std::to_string(matroid.ground_size));

  cara::oracles::MatroidBaseOracle oracle(matroid);
  const double radius = std::pow(static_cast<double>(oracle.matroid().rank), 1.0 / p);
  cara::CaraProblem prob{&oracle, target, p, radius, eps};

  Stopwatch watch;
  const cara::SparseCombination comb = cara::approx_caratheodory(prob);
  const double wall = watch.ms();

  ordered_json bases = ordered_json::array();
  for (const cara::CombinationEntry& e : comb.entries) {
    ordered_json elements = ordered_json::array();
    for (int el : oracle.base_elements(e.vertex_id)) elements.push_back(el + 1);
    bases.push_back(ordered_json{{"base", std::move(elements)}, {"weight", e.weight}});
  }

  ordered_json doc = cara::jsonio::run_document(
      "matroid-round", common.seed,
      ordered_json{{"kind", kind},
                   {"matroid", matroid_path},
                   {"target", target_path},
                   {"p", p},
                   {"eps", eps},
                   {"rank", oracle.matroid().rank}},
      mirror_constants(p, radius, eps));
  doc["result"] = ordered_json{{"bases", std::move(bases)},
                               {"marginal_error", comb.residual_norm},
                               {"support", comb.entries.size()},
                               {"iterations", comb.iterations},
                               {"oracle_calls", comb.oracle_calls},
                               {"independence_queries", oracle.total_independence_queries()}};
  emit(doc, common.out_path);
  std::cerr << "matroid-round: marginal error " << comb.residual_norm << ", "
            << comb.entries.size() << " bases, " << wall << " ms\n";
}

void run_path_strip(const std::string& dag_path, double p, double eps, const CommonOpts& common) {
  cara::oracles::DagFlowNetwork g = cara::io::read_dag(dag_path);
  std::vector<double> target(g.arcs.size());
  for (size_t a = 0; a < g.arcs.size(); ++a) target[a] = g.arcs[a].flow;

  const int n = g.num_nodes;
  cara::oracles::DagPathOracle oracle(std::move(g));
  const double radius = std::pow(static_cast<double>(n), 1.0 / p);
  cara::CaraProblem prob{&oracle, target, p, radius, eps};

  Stopwatch watch;
  const cara::SparseCombination comb = cara::approx_caratheodory(prob);
  const double wall = watch.ms();

  ordered_json paths = ordered_json::array();
  for (const cara::CombinationEntry& e : comb.entries) {
    ordered_json arcs = ordered_json::array();
    ordered_json nodes = ordered_json::array();
    const std::vector<int>& path = oracle.path_arcs(e.vertex_id);
    nodes.push_back(oracle.network().arcs[path.front()].tail + 1);
    for (int a : path) {
      arcs.push_back(a + 1);
      nodes.push_back(oracle.network().arcs[a].head + 1);
    }
    paths.push_back(ordered_json{
        {"arcs", std::move(arcs)}, {"nodes", std::move(nodes)}, {"weight", e.weight}});
  }

  ordered_json doc = cara::jsonio::run_document(
      "path-strip", common.seed, ordered_json{{"dag", dag_path}, {"p", p}, {"eps", eps}},
      mirror_constants(p, radius, eps));
  doc["result"] = ordered_json{{"paths", std::move(paths)},
                               {"flow_error", comb.residual_norm},
                               {"support", comb.entries.size()},
                               {"iterations", comb.iterations},
                               {"oracle_calls", comb.oracle_calls}};
  emit(doc, common.out_path);
  std::cerr << "path-strip: flow error " << comb.residual_norm << ", " << comb.entries.size()
            << " paths, " << wall << " ms\n";
}

void run_submod_min(const std::string& family, const std::string& input_path,
                    const std::string& mode, double k_additive, std::optional<double> f_bound,
                    const CommonOpts& common) {
  std::optional<cara::sfm::SubmodularOracle> oracle;

  if (family == "cut") {
    const cara::io::EdgeList list = cara::io::read_edge_list(input_path, true);
    const int n = list.num_vertices;
    auto edges = list.edges;
    auto weights = list.weights;
    auto eval = [n, edges, weights](const std::vector<int>& set) {
      std::vector<char> in(n, 0);
      for (int v : set) in[v] = 1;
      double total = 0.0;
      for (size_t e = 0; e < edges.size(); ++e)
        if (in[edges[e].first] != in[edges[e].second]) total += weights[e];
      return total;
    };
    double f = 0.0;
    if (f_bound) {
      f = *f_bound;
    } else {
      // The largest weighted degree bounds every cut marginal.
      std::vector<double> degree(n, 0.0);
      for (size_t e = 0; e < edges.size(); ++e) {
        degree[edges[e].first] += std::abs(weights[e]);
        degree[edges[e].second] += std::abs(weights[e]);
      }
      for (double d : degree) f = std::max(f, d);
    }
    oracle.emplace(n, eval, f);
  } else if (family == "modular") {
    const std::vector<double> w = cara::io::read_vector_file(input_path);
    auto eval = [w](const std::vector<int>& set) {
      double s = 0.0;
      for (int i : set) s += w[i];
      return s;
    };
    double f = 0.0;
    for (double x : w) f = std::max(f, std::abs(x));
    oracle.emplace(static_cast<int>(w.size()), eval, f_bound.value_or(f));
  } else if (family == "matroid-rank") {
    const cara::io::EdgeList list = cara::io::read_edge_list(input_path, false);
    auto edges = list.edges;
    const int nv = list.num_vertices;
    auto eval = [nv, edges](const std::vector<int>& set) {
      // Forest size of the selected edges.
      std::vector<int> parent(nv);
      for (int i = 0; i < nv; ++i) parent[i] = i;
      auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      int rank = 0;
      for (int e : set) {
        const int a = find(edges[e].first), b = find(edges[e].second);
        if (a != b) {
          parent[b] = a;
          ++rank;
        }
      }
      return static_cast<double>(rank);
    };
    oracle.emplace(static_cast<int>(edges.size()), eval, f_bound.value_or(1.0));
  } else {
    throw cara::input_error("unknown function family \"" + family + "\"");
  }

  if (mode != "exact" && mode != "additive")
    throw cara::input_error("mode must be \"exact\" or \"additive\"");
  const cara::sfm::MinimizeMode mm =
      mode == "exact" ? cara::sfm::MinimizeMode::exact : cara::sfm::MinimizeMode::additive;

  Stopwatch watch;
  const cara::sfm::MinNormResult result = cara::sfm::submodular_minimize(*oracle, mm, k_additive);
  const double wall = watch.ms();

  const int n = oracle->ground_size();
  const double k = mm == cara::sfm::MinimizeMode::exact ? 0.5 : k_additive;
  ordered_json doc = cara::jsonio::run_document(
      "submod-min", common.seed,
      ordered_json{{"family", family}, {"input", input_path}, {"mode", mode}, {"k", k}},
      ordered_json{{"gap_target", (k / n) * (k / n)},
                   {"iter_cap", std::ceil(4.0 * n * oracle->max_marginal() *
                                          oracle->max_marginal() * std::pow(n / k, 4.0))},
                   {"F", oracle->max_marginal()}});
  doc["result"] = cara::jsonio::min_norm_json(result, oracle->query_count());
  emit(doc, common.out_path);
  std::cerr << "submod-min: value " << result.minimizer_value << ", gap " << result.wolfe_gap
            << ", " << result.iterations << " iterations, " << wall << " ms\n";
}

void run_svm_train(const std::string& data_path, const std::string& kernel,
                   const std::string& kmatrix_path, int degree, double sigma, double alpha,
                   double c, double nu, double eps, bool refine, std::optional<long> iterations,
                   const CommonOpts& common) {
  const cara::io::SvmData data = cara::io::read_libsvm(data_path);

  cara::svm::SvmProblem prob;
  prob.labels = data.labels;
  prob.nu = nu;
  prob.eps = eps;
  prob.refine_spectral = refine;
  if (kernel == "linear") {
    prob.kernel.kind = cara::svm::KernelKind::linear;
  } else if (kernel == "poly") {
    prob.kernel.kind = cara::svm::KernelKind::poly_homogeneous;
    prob.kernel.degree = degree;
  } else if (kernel == "ipoly") {
    prob.kernel.kind = cara::svm::KernelKind::poly_inhomogeneous;
    prob.kernel.degree = degree;
  } else if (kernel == "rbf") {
    prob.kernel.kind = cara::svm::KernelKind::rbf;
    prob.kernel.sigma = sigma;
  } else if (kernel == "sigmoid") {
    prob.kernel.kind = cara::svm::KernelKind::sigmoid;
    prob.kernel.alpha = alpha;
    prob.kernel.c = c;
  } else if (kernel == "precomputed") {
    if (kmatrix_path.empty()) throw cara::input_error("precomputed kernel needs --kmatrix FILE");
    prob.kernel.kind = cara::svm::KernelKind::precomputed;
    prob.kernel.precomputed = cara::io::read_dense_matrix(kmatrix_path);
  } else {
    throw cara::input_error("unknown kernel \"" + kernel + "\"");
  }
  if (kernel != "precomputed") prob.points = data.points;

  Stopwatch watch;
  const cara::svm::SvmResult result = cara::svm::nu_svm_train(prob, iterations);
  const double wall = watch.ms();

  ordered_json doc = cara::jsonio::run_document(
      "svm-train", common.seed,
      ordered_json{{"data", data_path},
                   {"kernel", kernel},
                   {"degree", degree},
                   {"sigma", sigma},
                   {"alpha", alpha},
                   {"c", c},
                   {"nu", nu},
                   {"eps", eps}},
      ordered_json{{"T", result.iterations},
                   {"eta", prob.eta()},
                   {"rho", 2.0 * std::sqrt(prob.eta())},
                   {"sigma", std::max(2.0 / eps, result.spectral_bound + eps / 2.0)},
                   {"D", 0.5}});
  doc["result"] = cara::jsonio::svm_json(result);
  emit(doc, common.out_path);
  std::cerr << "svm-train: objective " << result.objective << ", " << result.iterations
            << " iterations, " << wall << " ms\n";
}

void run_lowerbound_hadamard(int n, double p, std::optional<double> eps,
                             const std::string& matrix_out, const std::string& target_out,
                             bool binary, const CommonOpts& common) {
  const cara::lb::HadamardInstance inst = cara::lb::hadamard_instance(n, p);
  if (!matrix_out.empty()) cara::io::write_dense_matrix(matrix_out, inst.v, binary);
  if (!target_out.empty()) cara::io::write_vector_file(target_out, inst.u);

  ordered_json doc = cara::jsonio::run_document(
      "lowerbound-hadamard", common.seed,
      ordered_json{{"n", n}, {"p", p}, {"matrix_out", matrix_out}, {"target_out", target_out}},
      eps ? mirror_constants(p, 1.0, *eps) : ordered_json::object());

  if (eps) {
    cara::oracles::ExplicitOracle oracle(inst.v);
    cara::CaraProblem prob{&oracle, inst.u, p, 1.0, *eps};
    const cara::SparseCombination comb = cara::approx_caratheodory(prob);
    const cara::lb::HadamardCertificate cert =
        cara::lb::hadamard_sparsity_certificate(inst, comb);
    doc["result"] = ordered_json{
        {"certificate", cara::jsonio::hadamard_certificate_json(cert, n, p, *eps)},
        {"combination", cara::jsonio::combination_json(comb)}};
  }
  emit(doc, common.out_path);
  std::cerr << "lowerbound hadamard: n=" << n << " done\n";
}

void run_lowerbound_random(int n, double p, double eps, int k, int num_seeds, int num_samples,
                           const std::string& csv_path, const CommonOpts& common) {
  Stopwatch watch;
  const std::vector<cara::lb::AdversarialReport> reports =
      cara::lb::adversarial_sweep(n, common.seed, num_seeds, p, eps, k, num_samples);
  const double wall = watch.ms();

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw cara::input_error(csv_path + ": cannot open for writing");
    csv << cara::jsonio::csv_header_adversarial() << "\n";
    for (const auto& rep : reports) csv << cara::jsonio::csv_line_adversarial(rep) << "\n";
  }

  int total_violations = 0;
  ordered_json runs = ordered_json::array();
  for (const auto& rep : reports) {
    runs.push_back(cara::jsonio::adversarial_report_json(rep));
    total_violations += rep.violations;
  }
  ordered_json doc = cara::jsonio::run_document(
      "lowerbound-random", common.seed,
      ordered_json{{"n", n}, {"p", p},             {"eps", eps},
                   {"k", k}, {"seeds", num_seeds}, {"samples", num_samples}},
      ordered_json::object());
  doc["result"] = ordered_json{{"runs", std::move(runs)}, {"total_violations", total_violations}};
  emit(doc, common.out_path);
  std::cerr << "lowerbound random: " << num_seeds << " seeds, " << total_violations
            << " certificate violations, " << wall << " ms\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse convex combinations from linear-minimization oracles"};
  app.require_subcommand(1);

  // decompose
  CommonOpts dec_common;
  std::string dec_matrix, dec_target;
  double dec_p = 2.0, dec_eps = 0.1;
  std::optional<double> dec_radius;
  auto* dec = app.add_subcommand("decompose", "sparse decomposition of a target point");
  dec->add_option("--matrix", dec_matrix, "dense-matrix file of vertices (columns)")
      ->required()
      ->check(CLI::ExistingFile);
  dec->add_option("--target", dec_target, "target vector file")
      ->required()
      ->check(CLI::ExistingFile);
  dec->add_option("--p", dec_p, "norm parameter, finite >= 2");
  dec->add_option("--eps", dec_eps, "target accuracy")->required();
  dec->add_option("--radius", dec_radius, "vertex norm bound (default: max column norm)");
  bool dec_assert = false;
  dec->add_flag("--assert-membership", dec_assert,
                "fail with exit 3 when the residual ends above eps");
  add_common(dec, dec_common);
  dec->callback([&] {
    cara::kernels::set_parallel(!dec_common.serial);
    run_decompose(dec_matrix, dec_target, dec_p, dec_eps, dec_radius, dec_assert, dec_common);
  });

  // matroid-round
  CommonOpts mat_common;
  std::string mat_kind = "graphic", mat_path, mat_target;
  int mat_ground = 0, mat_rank = -1;
  double mat_p = 2.0, mat_eps = 0.1;
  auto* mat = app.add_subcommand("matroid-round", "round a base-polytope point to sparse bases");
  mat->add_option("--kind", mat_kind, "graphic | uniform | partition");
  mat->add_option("--matroid", mat_path, "edge-list or partition file")->check(CLI::ExistingFile);
  mat->add_option("--ground-size", mat_ground, "uniform matroid ground size");
  mat->add_option("--rank", mat_rank, "uniform matroid rank");
  mat->add_option("--target", mat_target, "fractional point file")
      ->required()
      ->check(CLI::ExistingFile);
  mat->add_option("--p", mat_p, "norm parameter");
  mat->add_option("--eps", mat_eps, "marginal accuracy")->required();
  add_common(mat, mat_common);
  mat->callback([&] {
    cara::kernels::set_parallel(!mat_common.serial);
    run_matroid_round(mat_kind, mat_path, mat_ground, mat_rank, mat_target, mat_p, mat_eps,
                      mat_common);
  });

  // path-strip
  CommonOpts path_common;
  std::string path_dag;
  double path_p = 2.0, path_eps = 0.1;
  auto* path = app.add_subcommand("path-strip", "decompose a unit s-t flow into sparse paths");
  path->add_option("--dag", path_dag, "flow network file")->required()->check(CLI::ExistingFile);
  path->add_option("--p", path_p, "norm parameter");
  path->add_option("--eps", path_eps, "flow accuracy")->required();
  add_common(path, path_common);
  path->callback([&] {
    cara::kernels::set_parallel(!path_common.serial);
    run_path_strip(path_dag, path_p, path_eps, path_common);
  });

  // submod-min
  CommonOpts sub_common;
  std::string sub_family = "cut", sub_input, sub_mode = "exact";
  double sub_k = 1.0;
  std::optional<double> sub_f;
  auto* sub = app.add_subcommand("submod-min", "submodular minimization via the min-norm point");
  sub->add_option("--family", sub_family, "cut | modular | matroid-rank");
  sub->add_option("--input", sub_input, "function description file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--mode", sub_mode, "exact | additive");
  sub->add_option("--k", sub_k, "additive slack for mode=additive");
  sub->add_option("--max-marginal", sub_f, "override for the marginal bound F");
  add_common(sub, sub_common);
  sub->callback([&] {
    cara::kernels::set_parallel(!sub_common.serial);
    run_submod_min(sub_family, sub_input, sub_mode, sub_k, sub_f, sub_common);
  });

  // svm-train
  CommonOpts svm_common;
  std::string svm_data, svm_kernel = "linear", svm_kmatrix;
  int svm_degree = 2;
  double svm_sigma = 1.0, svm_alpha = 1.0, svm_c = 0.0, svm_nu = 1.0, svm_eps = 0.1;
  bool svm_refine = false;
  std::optional<long> svm_iters;
  auto* svmc = app.add_subcommand("svm-train", "nu-SVM training with matrix-free kernels");
  svmc->add_option("--data", svm_data, "dataset, \"label idx:val ...\" rows")
      ->required()
      ->check(CLI::ExistingFile);
  svmc->add_option("--kernel", svm_kernel, "linear | poly | ipoly | rbf | sigmoid | precomputed");
  svmc->add_option("--kmatrix", svm_kmatrix, "dense kernel matrix file")->check(CLI::ExistingFile);
  svmc->add_option("--degree", svm_degree, "polynomial degree");
  svmc->add_option("--sigma", svm_sigma, "rbf width");
  svmc->add_option("--alpha", svm_alpha, "sigmoid slope");
  svmc->add_option("--c", svm_c, "sigmoid offset");
  svmc->add_option("--nu", svm_nu, "nu parameter in (0, 1]")->required();
  svmc->add_option("--eps", svm_eps, "target accuracy")->required();
  svmc->add_flag("--refine-spectral", svm_refine, "tighter spectral bound (precomputed only)");
  svmc->add_option("--iterations", svm_iters, "override the iteration count");
  add_common(svmc, svm_common);
  svmc->callback([&] {
    cara::kernels::set_parallel(!svm_common.serial);
    run_svm_train(svm_data, svm_kernel, svm_kmatrix, svm_degree, svm_sigma, svm_alpha, svm_c,
                  svm_nu, svm_eps, svm_refine, svm_iters, svm_common);
  });

  // lowerbound
  auto* low = app.add_subcommand("lowerbound", "lower-bound instances and certificates");
  low->require_subcommand(1);

  CommonOpts had_common;
  int had_n = 8;
  double had_p = 2.0;
  std::optional<double> had_eps;
  std::string had_matrix, had_target;
  bool had_binary = false;
  auto* had = low->add_subcommand("hadamard", "Sylvester instance generator");
  had->add_option("--n", had_n, "size, a power of two")->required();
  had->add_option("--p", had_p, "norm parameter");
  had->add_option("--eps", had_eps, "also solve at this accuracy and certify");
  had->add_option("--out-matrix", had_matrix, "write the vertex matrix here");
  had->add_option("--out-target", had_target, "write the target vector here");
  had->add_flag("--binary", had_binary, "write the matrix in the binary format");
  add_common(had, had_common);
  had->callback([&] {
    cara::kernels::set_parallel(!had_common.serial);
    run_lowerbound_hadamard(had_n, had_p, had_eps, had_matrix, had_target, had_binary, had_common);
  });

  CommonOpts rnd_common;
  int rnd_n = 2048, rnd_k = 8, rnd_seeds = 32, rnd_samples = 100;
  double rnd_p = 2.0, rnd_eps = 0.25;
  std::string rnd_csv;
  auto* rnd = low->add_subcommand("random", "random sign-matrix adversarial certificates");
  rnd->add_option("--n", rnd_n, "instance size");
  rnd->add_option("--p", rnd_p, "norm parameter");
  rnd->add_option("--eps", rnd_eps, "good-row threshold parameter");
  rnd->add_option("--k", rnd_k, "support size");
  rnd->add_option("--seeds", rnd_seeds, "number of seeds, base --seed upward");
  rnd->add_option("--samples", rnd_samples, "random supported points checked per seed");
  rnd->add_option("--csv", rnd_csv, "write the per-seed report CSV here");
  add_common(rnd, rnd_common);
  rnd->callback([&] {
    cara::kernels::set_parallel(!rnd_common.serial);
    run_lowerbound_random(rnd_n, rnd_p, rnd_eps, rnd_k, rnd_seeds, rnd_samples, rnd_csv,
                          rnd_common);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const cara::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const cara::convergence_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const cara::contract_error& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

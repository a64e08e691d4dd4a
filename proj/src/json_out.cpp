#include "cara/json_out.hpp"

#include <cstdio>

#include "cara/version.hpp"

namespace cara::jsonio {

ordered_json run_document(const std::string& command, uint64_t seed, ordered_json config,
                          ordered_json constants) {
  ordered_json doc;
  doc["schema"] = kJsonSchema;
  doc["command"] = command;
  doc["repro"] = ordered_json{
      {"seed", seed}, {"version", kVersion}, {"config", std::move(config)},
      {"constants", std::move(constants)}};
  return doc;
}

ordered_json combination_json(const SparseCombination& comb) {
  ordered_json entries = ordered_json::array();
  for (const CombinationEntry& e : comb.entries)
    entries.push_back(ordered_json{{"id", e.vertex_id}, {"weight", e.weight}});
  return ordered_json{{"entries", std::move(entries)},
                      {"residual", comb.residual_norm},
                      {"p", comb.p},
                      {"support", comb.entries.size()},
                      {"total_mass", comb.total_mass},
                      {"iterations", comb.iterations},
                      {"oracle_calls", comb.oracle_calls}};
}

ordered_json min_norm_json(const sfm::MinNormResult& result, long queries) {
  ordered_json set = ordered_json::array();
  for (int e : result.minimizer_set) set.push_back(e + 1);  // 1-indexed on the wire
  return ordered_json{{"minimizer_set", std::move(set)},
                      {"value", result.minimizer_value},
                      {"iterations", result.iterations},
                      {"queries", queries},
                      {"wolfe_gap", result.wolfe_gap},
                      {"converged", result.converged},
                      {"oracle_calls", result.oracle_calls}};
}

ordered_json svm_json(const svm::SvmResult& result) {
  return ordered_json{{"objective", result.objective},
                      {"knorm", result.knorm},
                      {"iterations", result.iterations},
                      {"nnz_lambda", result.nnz_lambda},
                      {"spectral_bound", result.spectral_bound},
                      {"from_average", result.from_average},
                      {"average_objective", result.average_objective}};
}

ordered_json hadamard_certificate_json(const lb::HadamardCertificate& cert, int n, double p,
                                       double eps) {
  return ordered_json{{"n", n},      {"p", p},
                      {"eps", eps},  {"k", cert.k},
                      {"residual", cert.residual}, {"bound_ok", cert.bound_ok}};
}

ordered_json adversarial_report_json(const lb::AdversarialReport& rep) {
  return ordered_json{{"seed", rep.seed},
                      {"n", rep.n},
                      {"p", rep.p},
                      {"eps", rep.epsilon},
                      {"k", rep.k},
                      {"good_rows", rep.good_row_count},
                      {"good_row_frequency", rep.good_row_frequency},
                      {"value", rep.value},
                      {"prediction", rep.prediction},
                      {"min_sampled_norm", rep.min_sampled_norm},
                      {"violations", rep.violations}};
}

std::string csv_header_adversarial() {
  return "seed,n,p,eps,k,good_rows,good_row_frequency,value,prediction,min_sampled_norm,"
         "violations";
}

std::string csv_line_adversarial(const lb::AdversarialReport& rep) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%llu,%d,%.17g,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%d",
                static_cast<unsigned long long>(rep.seed), rep.n, rep.p, rep.epsilon, rep.k,
                rep.good_row_count, rep.good_row_frequency, rep.value, rep.prediction,
                rep.min_sampled_norm, rep.violations);
  return buf;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace cara::jsonio

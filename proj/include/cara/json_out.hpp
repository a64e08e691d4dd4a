#pragma once

#include <json.hpp>

#include "cara/caratheodory.hpp"
#include "cara/lower_bounds.hpp"
#include "cara/submodular.hpp"
#include "cara/svm.hpp"

namespace cara::jsonio {

using ordered_json = nlohmann::ordered_json;

// Top-level run document with the reproducibility block; key order is
// fixed by insertion so equal runs serialize to identical bytes.
ordered_json run_document(const std::string& command, uint64_t seed, ordered_json config,
                          ordered_json constants);

ordered_json combination_json(const SparseCombination& comb);
ordered_json min_norm_json(const sfm::MinNormResult& result, long queries);
ordered_json svm_json(const svm::SvmResult& result);
ordered_json hadamard_certificate_json(const lb::HadamardCertificate& cert, int n, double p,
                                       double eps);
ordered_json adversarial_report_json(const lb::AdversarialReport& rep);

std::string csv_header_adversarial();
std::string csv_line_adversarial(const lb::AdversarialReport& rep);

std::string dump(const ordered_json& doc);

}  // namespace cara::jsonio

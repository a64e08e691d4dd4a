#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace cara::sfm {

// Set-function access with a query counter. Values are normalized so the
// empty set maps to zero; callers see the shifted function. F bounds the
// largest marginal magnitude and is either supplied or computed by exact
// scan for small ground sets.
class SubmodularOracle {
 public:
  using EvalFn = std::function<double(const std::vector<int>&)>;

  SubmodularOracle(int ground_size, EvalFn eval,
                   std::optional<double> max_marginal = std::nullopt);

  int ground_size() const { return n_; }
  double max_marginal() const { return max_marginal_; }
  long query_count() const { return queries_; }

  // Evaluates the normalized function on a set of 0-based indices.
  double eval(const std::vector<int>& set) const;

  // When set, every returned value must be an integer (within 1e-9).
  void require_integer(bool on) { require_integer_ = on; }

 private:
  int n_;
  EvalFn raw_;
  double offset_ = 0.0;
  double max_marginal_ = 0.0;
  bool require_integer_ = false;
  mutable long queries_ = 0;
};

}  // namespace cara::sfm

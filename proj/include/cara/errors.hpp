#pragma once

#include <stdexcept>
#include <string>

namespace cara {

// Error taxonomy, mirrored by the CLI exit codes:
//   input_error       -> 2   bad parameters or malformed input files
//   convergence_error -> 3   solver finished without meeting its target
//   contract_error    -> 4   an internal contract or caller assumption broke
// numeric_error is a contract_error (non-finite values in a computation).
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct input_error : error {
  using error::error;
};

struct convergence_error : error {
  using error::error;
};

struct contract_error : error {
  using error::error;
};

struct numeric_error : contract_error {
  using contract_error::contract_error;
};

}  // namespace cara

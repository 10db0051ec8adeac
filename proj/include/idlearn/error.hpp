#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idlearn {

enum class ErrorCode {
  invalid_graph,
  cycle_detected,
  invalid_query,
  invalid_net,
  state_space_too_large,
  non_standard_form,
  zero_conditioning_event,
  scope_mismatch,
  not_identifiable,
  positivity_violation,
  infinite_kl,
  zero_evaluator_mass,
  graph_mismatch,
  parse_error,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace idlearn

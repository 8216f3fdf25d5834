#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcdt {

enum class errc {
  cycle_detected,
  multiple_roots,
  dangling_child,
  bad_weights,
  bad_variable,
  malformed_node,
  assignment_length_mismatch,
  term_budget_exceeded,
  var_count_mismatch,
  k_too_large,
  invalid_input,
  zero_weight_sum,
  not_binary,
  not_homogeneous,
  missing_gate,
  size_budget_exceeded,
  empty_product_node,
  empty_sum_node,
  parse_error,
  schema_error,
  io_error,
};

inline constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
  case errc::cycle_detected: return "CycleDetected";
  case errc::multiple_roots: return "MultipleRoots";
  case errc::dangling_child: return "DanglingChild";
  case errc::bad_weights: return "BadWeights";
  case errc::bad_variable: return "BadVariable";
  case errc::malformed_node: return "MalformedNode";
  case errc::assignment_length_mismatch: return "AssignmentLengthMismatch";
  case errc::term_budget_exceeded: return "TermBudgetExceeded";
  case errc::var_count_mismatch: return "VarCountMismatch";
  case errc::k_too_large: return "KTooLarge";
  case errc::invalid_input: return "InvalidInput";
  case errc::zero_weight_sum: return "ZeroWeightSum";
  case errc::not_binary: return "NotBinary";
  case errc::not_homogeneous: return "NotHomogeneous";
  case errc::missing_gate: return "MissingGate";
  case errc::size_budget_exceeded: return "SizeBudgetExceeded";
  case errc::empty_product_node: return "EmptyProductNode";
  case errc::empty_sum_node: return "EmptySumNode";
  case errc::parse_error: return "ParseError";
  case errc::schema_error: return "SchemaError";
  case errc::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every library failure is reported through this exception; `code()` names
/// the failure class and `what()` carries a one-line diagnostic.
class error : public std::runtime_error {
public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

} // namespace pcdt

#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace vxf {

// Stable error codes. The CLI maps them to its exit-code table:
// 0 ok, 2 input, 3 validation, 4 non-convergence, 5 degenerate, 6 panel.
enum class errc {
  input_not_found,
  io_error,
  parse_error,
  dimension_mismatch,
  accounting_identity,
  unknown_country,
  non_positive_value,
  all_zero_matrix,
  zero_row_or_column,
  non_finite,
  singular_system,
  collinear_regressors,
  non_convergence,
  eci_degenerate,
  eci_degenerate_weighted,
  eci_reducible,
  panel_incomplete,
};

const char* name(errc code);
int exit_code(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message,
        std::map<std::string, std::string> details = {})
      : std::runtime_error(message), code(code), details(std::move(details)) {}

  errc code;
  std::map<std::string, std::string> details;
};

}  // namespace vxf

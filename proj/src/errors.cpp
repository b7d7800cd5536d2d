#include "vxf/errors.hpp"

namespace vxf {

const char* name(errc code) {
  switch (code) {
    case errc::input_not_found: return "input_not_found";
    case errc::io_error: return "io_error";
    case errc::parse_error: return "parse_error";
    case errc::dimension_mismatch: return "dimension_mismatch";
    case errc::accounting_identity: return "accounting_identity";
    case errc::unknown_country: return "unknown_country";
    case errc::non_positive_value: return "non_positive_value";
    case errc::all_zero_matrix: return "all_zero_matrix";
    case errc::zero_row_or_column: return "zero_row_or_column";
    case errc::non_finite: return "non_finite";
    case errc::singular_system: return "singular_system";
    case errc::collinear_regressors: return "collinear_regressors";
    case errc::non_convergence: return "non_convergence";
    case errc::eci_degenerate: return "eci_degenerate";
    case errc::eci_degenerate_weighted: return "eci_degenerate_weighted";
    case errc::eci_reducible: return "eci_reducible";
    case errc::panel_incomplete: return "panel_incomplete";
  }
  return "unknown";
}

int exit_code(errc code) {
  switch (code) {
    case errc::input_not_found:
    case errc::io_error:
    case errc::parse_error:
      return 2;
    case errc::dimension_mismatch:
    case errc::accounting_identity:
    case errc::unknown_country:
    case errc::non_positive_value:
    case errc::all_zero_matrix:
    case errc::zero_row_or_column:
    case errc::non_finite:
    case errc::singular_system:
    case errc::collinear_regressors:
      return 3;
    case errc::non_convergence:
      return 4;
    case errc::eci_degenerate:
    case errc::eci_degenerate_weighted:
    case errc::eci_reducible:
      return 5;
    case errc::panel_incomplete:
      return 6;
  }
  return 1;
}

}  // namespace vxf

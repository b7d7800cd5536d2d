#pragma once

#include <string>
#include <vector>

#include "vxf/types.hpp"

namespace vxf {

// The full ladder of reflections. Level 0 is diversity/ubiquity; level n
// computes country scores from the products' level n-1 and product scores
// from the countries' fresh level n:
//   kc_n = D_c^-1 M kp_{n-1},   kp_n = D_p^-1 M^T kc_n.
// Row n of each matrix is level n. The whole path is returned because the
// standardized scores depend visibly on the level chosen.
struct ReflectionsSequence {
  Matrix kc;  // (levels + 1) x C
  Matrix kp;  // (levels + 1) x P
};

struct EciResult {
  Vector eci;                    // standardized: mean 0, sample sd 1
  std::vector<Index> countries;  // row indices of the input the scores refer to
  std::string method;            // "reflections" or "eigenvector"
  int level = 0;                 // reflections level used (0 for eigenvector)
};

struct EciReflections {
  ReflectionsSequence sequence;
  EciResult result;
};

ReflectionsSequence reflections_sequence(const Eigen::Ref<const Matrix>& m, int levels);

// Standardized country reflections at the requested level (default 18).
// Throws eci_degenerate (or eci_degenerate_weighted when the input is
// column-stochastic, reproducing the weighted-matrix breakdown) if the level
// carries no cross-country variation.
EciReflections eci_reflections(const Eigen::Ref<const Matrix>& m, int level = 18);

// Standardized eigenvector of the country-similarity matrix
// D_c^-1 M D_p^-1 M^T associated with its second-largest eigenvalue. Zero
// rows/columns are dropped first; the matrix must then be connected. The sign
// is fixed so that correlation with diversity is non-negative.
EciResult eci_eigenvector(const Eigen::Ref<const Matrix>& m);

}  // namespace vxf

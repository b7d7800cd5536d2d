#pragma once

#include <string>
#include <vector>

#include "vxf/errors.hpp"
#include "vxf/leontief.hpp"
#include "vxf/registry.hpp"
#include "vxf/types.hpp"

namespace vxf {

// Gross exports by country x activity.
struct ExportMatrix {
  CountryRegistry countries;
  ActivityRegistry activities;
  Matrix values;
};

// Country x activity matrix with entries in {0, 1}: RCA at or above the
// threshold.
struct BinaryAdjacency {
  CountryRegistry countries;
  ActivityRegistry activities;
  Matrix M;
};

// Column-stochastic shares of value-added exports (industries with zero world
// totals are dropped and listed).
struct WeightedAdjacency {
  CountryRegistry countries;
  ActivityRegistry activities;  // retained industries only
  Matrix W;
  std::vector<std::string> dropped_activities;
};

// Balassa revealed comparative advantage:
//   RCA_cp = (E_cp / sum_p E_cp) / (sum_c E_cp / sum_cp E_cp).
// Rows with no exports give a zero row; activities nobody exports give a zero
// column.
template <typename Derived>
Mat<typename Derived::Scalar> rca(const Eigen::MatrixBase<Derived>& exports) {
  using Scalar = typename Derived::Scalar;
  const Scalar world = exports.sum();
  if (!(world > 0)) {
    throw Error(errc::all_zero_matrix, "export matrix has no positive entries");
  }
  Vec<Scalar> row_totals = exports.rowwise().sum();
  Vec<Scalar> col_totals = exports.colwise().sum();

  Mat<Scalar> out = Mat<Scalar>::Zero(exports.rows(), exports.cols());
  for (Index p = 0; p < exports.cols(); ++p) {
    if (col_totals[p] <= 0) continue;
    const Scalar world_share = col_totals[p] / world;
    for (Index c = 0; c < exports.rows(); ++c) {
      if (row_totals[c] <= 0) continue;
      out(c, p) = (exports(c, p) / row_totals[c]) / world_share;
    }
  }
  return out;
}

// M_cp = 1 iff RCA_cp >= threshold (inclusive).
template <typename Derived>
Mat<typename Derived::Scalar> binarize(const Eigen::MatrixBase<Derived>& rca_values,
                                       typename Derived::Scalar threshold = 1) {
  using Scalar = typename Derived::Scalar;
  if (!(threshold > 0)) {
    throw Error(errc::parse_error, "RCA threshold must be positive");
  }
  return (rca_values.array() >= threshold)
      .select(Mat<Scalar>::Ones(rca_values.rows(), rca_values.cols()),
              Mat<Scalar>::Zero(rca_values.rows(), rca_values.cols()));
}

Matrix rca(const ExportMatrix& exports);
BinaryAdjacency binarize(const ExportMatrix& exports, double threshold = 1);

// W_cs = VX_cs / sum_c VX_cs. Columns with zero totals are dropped (the
// fitness iteration's harmonic mean is undefined on them).
WeightedAdjacency weighted_adjacency(const VaxMatrix& vax);

ExportMatrix gross_export_matrix(const IOTable& iot);

}  // namespace vxf

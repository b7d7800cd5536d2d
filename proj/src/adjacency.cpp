#include "vxf/adjacency.hpp"

namespace vxf {

Matrix rca(const ExportMatrix& exports) { return rca(exports.values); }

BinaryAdjacency binarize(const ExportMatrix& exports, double threshold) {
  BinaryAdjacency adj;
  adj.countries = exports.countries;
  adj.activities = exports.activities;
  adj.M = binarize(rca(exports.values), threshold);
  return adj;
}

WeightedAdjacency weighted_adjacency(const VaxMatrix& vax) {
  const Index c_count = vax.values.rows();
  const Index s_count = vax.values.cols();

  std::vector<Index> retained;
  WeightedAdjacency adj;
  adj.countries = vax.countries;
  for (Index s = 0; s < s_count; ++s) {
    double total = vax.values.col(s).sum();
    if (total > 0) {
      retained.push_back(s);
    } else {
      adj.dropped_activities.push_back(vax.sectors.id(s));
    }
  }
  if (retained.empty()) {
    throw Error(errc::all_zero_matrix, "no industry has positive value-added exports");
  }

  std::vector<std::string> ids, labels;
  ids.reserve(retained.size());
  for (Index s : retained) {
    ids.push_back(vax.sectors.id(s));
    labels.push_back(vax.sectors.label(s));
  }
  adj.activities = SectorRegistry::from_ids(std::move(ids), std::move(labels));

  adj.W = Matrix::Zero(c_count, static_cast<Index>(retained.size()));
  for (std::size_t k = 0; k < retained.size(); ++k) {
    const Index s = retained[k];
    adj.W.col(static_cast<Index>(k)) = vax.values.col(s) / vax.values.col(s).sum();
  }
  return adj;
}

ExportMatrix gross_export_matrix(const IOTable& iot) {
  ExportMatrix exports;
  exports.countries = iot.countries;
  exports.activities = iot.sectors;
  exports.values = gross_exports(iot);
  return exports;
}

}  // namespace vxf

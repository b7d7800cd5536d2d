#pragma once

#include <string>
#include <vector>

#include "vxf/iot.hpp"
#include "vxf/registry.hpp"
#include "vxf/types.hpp"

namespace vxf {

// Technical coefficients A (A_ij = Z_ij / x_j, zero where x_j = 0), the
// Leontief inverse B = (I - A)^-1 from a direct factorization, and the
// value-added coefficient vector v (v_j = va_j / x_j).
struct LeontiefSystem {
  Matrix A;
  Matrix B;
  Vector v;
};

LeontiefSystem build_leontief(const IOTable& iot);

// Power-iteration estimate of the spectral radius of a non-negative matrix.
double spectral_radius_estimate(const Matrix& m, int iterations = 200);

// Value-added exports by (country, sector): domestic value added absorbed in
// foreign final demand,
//   VX_(c,s) = v_(c,s) * sum_{d != c} [B f_d]_(c,s).
// Negative raw cells (from inventory drawdowns in F) are clamped to zero with
// the removed mass recorded.
struct VaxMatrix {
  int year = 0;
  CountryRegistry countries;
  SectorRegistry sectors;
  Matrix values;  // C x S
  double clamped_mass = 0;
  Index clamped_cells = 0;

  double world_total() const { return values.sum(); }
};

VaxMatrix compute_vax(const LeontiefSystem& sys, const IOTable& iot);

struct VaxCountryLine {
  std::string country;
  double total = 0;               // sum_s VX_cs
  double share_of_world_va = 0;   // total / world value added
  double gross_exports = 0;       // Z + F flows to foreign destinations
  bool exceeds_gross_exports = false;
};

struct VaxReport {
  std::vector<VaxCountryLine> lines;  // registry order
  double world_va = 0;
  double world_vax = 0;
};

VaxReport vax_accounting_report(const VaxMatrix& vax, const IOTable& iot);

// Gross exports aggregated to country x sector (flows to foreign
// destinations only); feeds the RCA-based adjacency path.
Matrix gross_exports(const IOTable& iot);

}  // namespace vxf

#include "vxf/leontief.hpp"

#include <cmath>

#include "vxf/csv.hpp"
#include "vxf/errors.hpp"

namespace vxf {

double spectral_radius_estimate(const Matrix& m, int iterations) {
  if (m.rows() == 0) return 0;
  Vector v = Vector::Ones(m.rows());
  double radius = 0;
  for (int k = 0; k < iterations; ++k) {
    Vector next = m * v;
    double norm = next.cwiseAbs().maxCoeff();
    if (norm == 0 || !std::isfinite(norm)) return norm;
    radius = norm;
    v = next / norm;
  }
  return radius;
}

LeontiefSystem build_leontief(const IOTable& iot) {
  const Index n = iot.n_activities();
  LeontiefSystem sys;
  sys.A = Matrix::Zero(n, n);
  sys.v = Vector::Zero(n);

  for (Index j = 0; j < n; ++j) {
    if (iot.x[j] > 0) {
      sys.A.col(j) = iot.Z.col(j) / iot.x[j];
      sys.v[j] = iot.va[j] / iot.x[j];
    }
    // x_j = 0: dormant activity, column and coefficient stay zero.
  }

  for (Index j = 0; j < n; ++j) {
    double colsum = sys.A.col(j).sum();
    if (colsum > 1 + 1e-9) {
      throw Error(errc::accounting_identity,
                  "technical coefficients of " + iot.activity_label(j) +
                      " sum to " + csv::format_double(colsum),
                  {{"column", iot.activity_label(j)},
                   {"column_sum", csv::format_double(colsum)}});
    }
    if (sys.v[j] < 0 || sys.v[j] > 1 + 1e-9) {
      throw Error(errc::accounting_identity,
                  "value-added coefficient of " + iot.activity_label(j) +
                      " out of [0, 1]: " + csv::format_double(sys.v[j]),
                  {{"column", iot.activity_label(j)},
                   {"value", csv::format_double(sys.v[j])}});
    }
  }

  // Direct solve, factored once; the factorization is reused for every
  // right-hand side of the identity.
  Matrix i_minus_a = Matrix::Identity(n, n) - sys.A;
  Eigen::PartialPivLU<Matrix> lu(i_minus_a);
  sys.B = lu.solve(Matrix::Identity(n, n));

  double b_scale = std::max(1.0, sys.B.cwiseAbs().maxCoeff());
  double residual = (sys.B * i_minus_a - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!sys.B.allFinite() || residual > 1e-8 * b_scale) {
    double radius = spectral_radius_estimate(sys.A);
    throw Error(errc::singular_system,
                "I - A is singular or near-singular (spectral radius estimate " +
                    csv::format_double(radius) + ")",
                {{"spectral_radius", csv::format_double(radius)}});
  }
  return sys;
}

VaxMatrix compute_vax(const LeontiefSystem& sys, const IOTable& iot) {
  const Index n = iot.n_activities();
  const Index c_count = iot.n_countries();
  const Index s_count = iot.n_sectors();
  if (sys.B.rows() != n || sys.v.size() != n || iot.F.cols() != c_count) {
    throw Error(errc::dimension_mismatch, "Leontief system does not match the table");
  }

  // Output absorbed by each destination's final demand: G = B F.
  Matrix absorbed = sys.B * iot.F;

  VaxMatrix vax;
  vax.year = iot.year;
  vax.countries = iot.countries;
  vax.sectors = iot.sectors;
  vax.values = Matrix::Zero(c_count, s_count);

  for (Index a = 0; a < n; ++a) {
    const Index c = iot.country_of(a);
    const Index s = iot.sector_of(a);
    double foreign = absorbed.row(a).sum() - absorbed(a, c);
    double value = sys.v[a] * foreign;
    if (value < 0) {
      vax.clamped_mass += -value;
      vax.clamped_cells += 1;
      value = 0;
    }
    vax.values(c, s) = value;
  }
  return vax;
}

Matrix gross_exports(const IOTable& iot) {
  const Index c_count = iot.n_countries();
  const Index s_count = iot.n_sectors();
  Matrix exp = Matrix::Zero(c_count, s_count);
  for (Index a = 0; a < iot.n_activities(); ++a) {
    const Index c = iot.country_of(a);
    const Index s = iot.sector_of(a);
    double total = 0;
    for (Index b = 0; b < iot.n_activities(); ++b) {
      if (iot.country_of(b) != c) total += iot.Z(a, b);
    }
    for (Index d = 0; d < c_count; ++d) {
      if (d != c) total += iot.F(a, d);
    }
    exp(c, s) = total;
  }
  return exp;
}

VaxReport vax_accounting_report(const VaxMatrix& vax, const IOTable& iot) {
  if (vax.countries.size() != iot.n_countries() || vax.sectors.size() != iot.n_sectors() ||
      vax.year != iot.year) {
    throw Error(errc::dimension_mismatch, "VAX matrix does not match the table");
  }
  VaxReport report;
  report.world_va = iot.va.sum();
  report.world_vax = vax.values.sum();

  Matrix exports = gross_exports(iot);
  for (Index c = 0; c < vax.countries.size(); ++c) {
    VaxCountryLine line;
    line.country = vax.countries.code(c);
    line.total = vax.values.row(c).sum();
    line.share_of_world_va = report.world_va > 0 ? line.total / report.world_va : 0;
    line.gross_exports = exports.row(c).sum();
    // Allow rounding slack; VX above gross exports signals a broken table.
    line.exceeds_gross_exports =
        line.total > line.gross_exports + 1e-9 * std::max(1.0, line.gross_exports);
    report.lines.push_back(std::move(line));
  }
  return report;
}

}  // namespace vxf

#include "vxf/eci.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "vxf/csv.hpp"
#include "vxf/errors.hpp"

namespace vxf {

namespace {

void require_support(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw Error(errc::dimension_mismatch, "empty adjacency matrix");
  }
  if (!m.allFinite() || m.minCoeff() < 0) {
    throw Error(errc::non_finite, "adjacency matrix must be finite and non-negative");
  }
  for (Index c = 0; c < m.rows(); ++c) {
    if (m.row(c).sum() <= 0) {
      throw Error(errc::zero_row_or_column, "country row " + std::to_string(c) + " is all zero",
                  {{"country_index", std::to_string(c)}});
    }
  }
  for (Index p = 0; p < m.cols(); ++p) {
    if (m.col(p).sum() <= 0) {
      throw Error(errc::zero_row_or_column, "activity column " + std::to_string(p) + " is all zero",
                  {{"activity_index", std::to_string(p)}});
    }
  }
}

bool is_column_stochastic(const Eigen::Ref<const Matrix>& m) {
  for (Index p = 0; p < m.cols(); ++p) {
    if (std::abs(m.col(p).sum() - 1.0) > 1e-9) return false;
  }
  return true;
}

// Mean 0, sample standard deviation 1.
Vector standardize(const Vector& values, bool weighted_input, const std::string& what) {
  const Index n = values.size();
  double mean = values.mean();
  double ss = (values.array() - mean).square().sum();
  double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (sd <= 1e-12 * scale) {
    errc code = weighted_input ? errc::eci_degenerate_weighted : errc::eci_degenerate;
    throw Error(code, what + " carries no cross-country variation" +
                          (weighted_input ? " (column-stochastic input pins product scores at 1)"
                                          : ""));
  }
  return (values.array() - mean) / sd;
}

void fix_sign(Vector& scores, const Vector& diversity) {
  double cov = 0;
  double d_mean = diversity.mean();
  for (Index i = 0; i < scores.size(); ++i) {
    cov += scores[i] * (diversity[i] - d_mean);
  }
  if (cov < 0) scores = -scores;
}

}  // namespace

ReflectionsSequence reflections_sequence(const Eigen::Ref<const Matrix>& m, int levels) {
  require_support(m);
  if (levels < 1) {
    throw Error(errc::parse_error, "reflections need at least one level");
  }
  const Index c_count = m.rows();
  const Index p_count = m.cols();

  Vector diversity = m.rowwise().sum();
  Vector ubiquity = m.colwise().sum();

  ReflectionsSequence seq;
  seq.kc = Matrix::Zero(levels + 1, c_count);
  seq.kp = Matrix::Zero(levels + 1, p_count);
  seq.kc.row(0) = diversity.transpose();
  seq.kp.row(0) = ubiquity.transpose();

  Vector kc = diversity;
  Vector kp = ubiquity;
  for (int n = 1; n <= levels; ++n) {
    kc = (m * kp).cwiseQuotient(diversity);
    kp = (m.transpose() * kc).cwiseQuotient(ubiquity);
    seq.kc.row(n) = kc.transpose();
    seq.kp.row(n) = kp.transpose();
  }
  return seq;
}

EciReflections eci_reflections(const Eigen::Ref<const Matrix>& m, int level) {
  EciReflections out;
  out.sequence = reflections_sequence(m, level);

  Vector at_level = out.sequence.kc.row(level).transpose();
  Vector scores = standardize(at_level, is_column_stochastic(m),
                              "reflections level " + std::to_string(level));
  fix_sign(scores, out.sequence.kc.row(0).transpose());

  out.result.eci = std::move(scores);
  out.result.countries.resize(static_cast<std::size_t>(m.rows()));
  std::iota(out.result.countries.begin(), out.result.countries.end(), Index{0});
  out.result.method = "reflections";
  out.result.level = level;
  return out;
}

EciResult eci_eigenvector(const Eigen::Ref<const Matrix>& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw Error(errc::dimension_mismatch, "empty adjacency matrix");
  }
  if (!m.allFinite() || m.minCoeff() < 0) {
    throw Error(errc::non_finite, "adjacency matrix must be finite and non-negative");
  }

  std::vector<Index> rows, cols;
  for (Index c = 0; c < m.rows(); ++c) {
    if (m.row(c).sum() > 0) rows.push_back(c);
  }
  for (Index p = 0; p < m.cols(); ++p) {
    if (m.col(p).sum() > 0) cols.push_back(p);
  }
  if (rows.size() < 2) {
    throw Error(errc::eci_degenerate, "fewer than two countries with any support");
  }

  Matrix sub(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      sub(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
    }
  }

  // Connectivity of the bipartite graph via union-find over countries+products.
  const Index nc = sub.rows();
  const Index np = sub.cols();
  std::vector<Index> parent(static_cast<std::size_t>(nc + np));
  std::iota(parent.begin(), parent.end(), Index{0});
  std::function<Index(Index)> find_root = [&](Index a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  for (Index c = 0; c < nc; ++c) {
    for (Index p = 0; p < np; ++p) {
      if (sub(c, p) > 0) {
        parent[static_cast<std::size_t>(find_root(c))] = find_root(nc + p);
      }
    }
  }
  std::map<Index, std::vector<Index>> components;  // root -> original country rows
  for (Index c = 0; c < nc; ++c) {
    components[find_root(c)].push_back(rows[static_cast<std::size_t>(c)]);
  }
  if (components.size() > 1) {
    std::string listing;
    for (const auto& [root, members] : components) {
      if (!listing.empty()) listing += "|";
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) listing += ",";
        listing += std::to_string(members[i]);
      }
    }
    throw Error(errc::eci_reducible,
                "adjacency splits into " + std::to_string(components.size()) +
                    " disconnected components",
                {{"components", listing}});
  }

  Vector diversity = sub.rowwise().sum();
  Vector ubiquity = sub.colwise().sum();

  // Similarity D_c^-1 M D_p^-1 M^T is similar to the symmetric matrix
  // D_c^-1/2 M D_p^-1 M^T D_c^-1/2, so a self-adjoint solve is exact.
  Vector d_isqrt = diversity.cwiseSqrt().cwiseInverse();
  Matrix middle = sub * ubiquity.cwiseInverse().asDiagonal() * sub.transpose();
  Matrix sym = d_isqrt.asDiagonal() * middle * d_isqrt.asDiagonal();
  sym = ((sym + sym.transpose()) / 2).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(errc::non_finite, "eigendecomposition failed");
  }
  // Eigenvalues ascend; the largest belongs to the trivial constant vector.
  Vector second = solver.eigenvectors().col(nc - 2);
  Vector raw = d_isqrt.asDiagonal() * second;

  Vector scores = standardize(raw, false, "second eigenvector");
  fix_sign(scores, diversity);

  EciResult result;
  result.eci = std::move(scores);
  result.countries = rows;
  result.method = "eigenvector";
  result.level = 0;
  return result;
}

}  // namespace vxf

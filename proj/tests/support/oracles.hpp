#pragma once

// Test-side oracles: plain-loop implementations, deliberately independent of
// the library's linear-algebra code paths.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "vxf/iot.hpp"
#include "vxf/types.hpp"

namespace oracle {

struct FitnessPoint {
  std::vector<long double> fitness;
  std::vector<long double> complexity;
};

// Fixed-step fitness iteration with extended-precision accumulation. With
// run_to_rest set, it keeps going past min_steps until its own step size
// falls below 1e-14 (slow-mixing matrices need far more than 10k steps).
inline FitnessPoint fitness_plain(const vxf::Matrix& w, int min_steps,
                                  bool run_to_rest = false) {
  const int c_count = static_cast<int>(w.rows());
  const int s_count = static_cast<int>(w.cols());
  const long double rest_tol = 1e-14L;
  const int cap = run_to_rest ? 2000000 : min_steps;
  std::vector<long double> f(c_count, 1.0L), q(s_count, 1.0L);
  for (int step = 0; step < cap; ++step) {
    std::vector<long double> ftil(c_count, 0.0L), qtil(s_count, 0.0L);
    for (int c = 0; c < c_count; ++c) {
      for (int s = 0; s < s_count; ++s) {
        ftil[c] += static_cast<long double>(w(c, s)) * q[s];
      }
    }
    for (int s = 0; s < s_count; ++s) {
      long double denom = 0;
      for (int c = 0; c < c_count; ++c) {
        denom += static_cast<long double>(w(c, s)) / f[c];
      }
      qtil[s] = 1.0L / denom;
    }
    long double f_mean = 0, q_mean = 0;
    for (long double v : ftil) f_mean += v;
    for (long double v : qtil) q_mean += v;
    f_mean /= c_count;
    q_mean /= s_count;
    long double delta = 0;
    for (int c = 0; c < c_count; ++c) {
      long double next = ftil[c] / f_mean;
      delta = std::max(delta, std::abs(next - f[c]));
      f[c] = next;
    }
    for (int s = 0; s < s_count; ++s) {
      long double next = qtil[s] / q_mean;
      delta = std::max(delta, std::abs(next - q[s]));
      q[s] = next;
    }
    if (run_to_rest && step + 1 >= min_steps && delta < rest_tol) break;
  }
  return {f, q};
}

struct ReflectionsPath {
  std::vector<std::vector<long double>> kc;  // [level][country]
  std::vector<std::vector<long double>> kp;  // [level][product]
};

// Alternating ladder: country level n from product level n-1, product level n
// from the fresh country level n.
inline ReflectionsPath reflections_plain(const vxf::Matrix& m, int levels) {
  const int c_count = static_cast<int>(m.rows());
  const int p_count = static_cast<int>(m.cols());
  std::vector<long double> diversity(c_count, 0.0L), ubiquity(p_count, 0.0L);
  for (int c = 0; c < c_count; ++c) {
    for (int p = 0; p < p_count; ++p) {
      diversity[c] += static_cast<long double>(m(c, p));
      ubiquity[p] += static_cast<long double>(m(c, p));
    }
  }
  ReflectionsPath path;
  path.kc.push_back(diversity);
  path.kp.push_back(ubiquity);
  for (int level = 1; level <= levels; ++level) {
    std::vector<long double> kc(c_count, 0.0L), kp(p_count, 0.0L);
    for (int c = 0; c < c_count; ++c) {
      for (int p = 0; p < p_count; ++p) {
        kc[c] += static_cast<long double>(m(c, p)) * path.kp.back()[p];
      }
      kc[c] /= diversity[c];
    }
    for (int p = 0; p < p_count; ++p) {
      for (int c = 0; c < c_count; ++c) {
        kp[p] += static_cast<long double>(m(c, p)) * kc[c];
      }
      kp[p] /= ubiquity[p];
    }
    path.kc.push_back(std::move(kc));
    path.kp.push_back(std::move(kp));
  }
  return path;
}

inline std::vector<double> standardize_plain(const std::vector<long double>& values) {
  long double mean = 0;
  for (long double v : values) mean += v;
  mean /= static_cast<long double>(values.size());
  long double ss = 0;
  for (long double v : values) ss += (v - mean) * (v - mean);
  long double sd = std::sqrt(ss / static_cast<long double>(values.size() - 1));
  std::vector<double> out;
  out.reserve(values.size());
  for (long double v : values) out.push_back(static_cast<double>((v - mean) / sd));
  return out;
}

// Truncated Neumann series sum_{k<=terms} A^k with plain loops.
inline std::vector<std::vector<long double>> power_series_inverse(const vxf::Matrix& a,
                                                                  int terms) {
  const int n = static_cast<int>(a.rows());
  std::vector<std::vector<long double>> b(n, std::vector<long double>(n, 0.0L));
  std::vector<std::vector<long double>> power(n, std::vector<long double>(n, 0.0L));
  for (int i = 0; i < n; ++i) {
    b[i][i] = 1.0L;
    power[i][i] = 1.0L;
  }
  for (int k = 1; k <= terms; ++k) {
    std::vector<std::vector<long double>> next(n, std::vector<long double>(n, 0.0L));
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) {
        const long double p_im = power[i][m];
        if (p_im == 0.0L) continue;
        for (int j = 0; j < n; ++j) {
          next[i][j] += p_im * static_cast<long double>(a(m, j));
        }
      }
    }
    power = std::move(next);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) b[i][j] += power[i][j];
    }
  }
  return b;
}

// VAX from first principles: coefficients, truncated series, destination
// propagation and foreign-absorption allocation, all in plain loops.
inline vxf::Matrix vax_truncated(const vxf::IOTable& iot, int terms) {
  const int n = static_cast<int>(iot.n_activities());
  const int c_count = static_cast<int>(iot.n_countries());
  const int s_count = static_cast<int>(iot.n_sectors());

  vxf::Matrix a = vxf::Matrix::Zero(n, n);
  std::vector<long double> v(n, 0.0L);
  for (int j = 0; j < n; ++j) {
    if (iot.x[j] > 0) {
      for (int i = 0; i < n; ++i) a(i, j) = iot.Z(i, j) / iot.x[j];
      v[j] = static_cast<long double>(iot.va[j]) / static_cast<long double>(iot.x[j]);
    }
  }
  auto b = power_series_inverse(a, terms);

  vxf::Matrix vx = vxf::Matrix::Zero(c_count, s_count);
  for (int act = 0; act < n; ++act) {
    const int c = act / s_count;
    const int s = act % s_count;
    long double foreign = 0;
    for (int d = 0; d < c_count; ++d) {
      if (d == c) continue;
      long double absorbed = 0;
      for (int j = 0; j < n; ++j) {
        absorbed += b[act][j] * static_cast<long double>(iot.F(j, d));
      }
      foreign += absorbed;
    }
    long double value = v[act] * foreign;
    vx(c, s) = static_cast<double>(value < 0 ? 0.0L : value);
  }
  return vx;
}

inline std::vector<std::string> synthetic_codes(int count) {
  std::vector<std::string> codes;
  for (int i = 0; i < count; ++i) {
    codes.push_back(std::string("A") + static_cast<char>('A' + i / 26) +
                    static_cast<char>('A' + i % 26));
  }
  return codes;
}

inline std::vector<std::string> synthetic_sectors(int count) {
  std::vector<std::string> ids;
  for (int i = 0; i < count; ++i) ids.push_back("s" + std::to_string(i + 1));
  return ids;
}

// Random matrix with no zero row or column.
inline vxf::Matrix random_nonneg(std::mt19937& rng, int rows, int cols, double density = 0.7) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  vxf::Matrix m = vxf::Matrix::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (coin(rng) < density) m(i, j) = unit(rng);
    }
  }
  std::uniform_int_distribution<int> any_row(0, rows - 1);
  std::uniform_int_distribution<int> any_col(0, cols - 1);
  for (int i = 0; i < rows; ++i) {
    if (m.row(i).sum() <= 0) m(i, any_col(rng)) = unit(rng);
  }
  for (int j = 0; j < cols; ++j) {
    if (m.col(j).sum() <= 0) m(any_row(rng), j) = unit(rng);
  }
  return m;
}

inline vxf::Matrix random_column_stochastic(std::mt19937& rng, int rows, int cols) {
  vxf::Matrix m = random_nonneg(rng, rows, cols, 0.9);
  for (int j = 0; j < cols; ++j) m.col(j) /= m.col(j).sum();
  return m;
}

// Builds a valid IOTable from given technical coefficients and final demand:
// x = (I - A)^-1 F 1, Z = A diag(x), va = x - 1'Z. All identities hold by
// construction.
inline vxf::IOTable iot_from_coefficients(const vxf::Matrix& a, const vxf::Matrix& f,
                                          int year = 2014) {
  const int n = static_cast<int>(a.rows());
  const int c_count = static_cast<int>(f.cols());
  const int s_count = n / c_count;

  vxf::IOTable iot;
  iot.year = year;
  iot.countries = vxf::CountryRegistry::sorted(synthetic_codes(c_count));
  iot.sectors = vxf::SectorRegistry::from_ids(synthetic_sectors(s_count));
  vxf::Vector f_total = f.rowwise().sum();
  vxf::Vector x =
      (vxf::Matrix::Identity(n, n) - a).partialPivLu().solve(f_total);
  iot.Z = a * x.asDiagonal();
  iot.F = f;
  iot.x = x;
  iot.va = x - iot.Z.colwise().sum().transpose();
  vxf::validate_iot(iot);
  return iot;
}

// Random valid IOTable with column sums of A capped well under 1 so the
// 60-term series oracle is sharp.
inline vxf::IOTable random_iot(std::mt19937& rng, int c_count, int s_count) {
  const int n = c_count * s_count;
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> colsum(0.2, 0.65);
  std::uniform_real_distribution<double> fd(0.5, 2.0);

  vxf::Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = unit(rng);
  }
  for (int j = 0; j < n; ++j) a.col(j) *= colsum(rng) / a.col(j).sum();

  vxf::Matrix f(n, c_count);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < c_count; ++d) f(i, d) = fd(rng);
  }
  return iot_from_coefficients(a, f);
}

// Dummy-variable least squares: intercept, entity dummies (one omitted),
// period dummies (one omitted), then the slope columns. Returns the slope
// estimates and the residuals.
struct LsdvFit {
  vxf::Vector slopes;
  vxf::Vector residuals;
};

inline LsdvFit lsdv_fit(const vxf::Vector& y, const vxf::Matrix& x,
                        const std::vector<vxf::Index>& entity,
                        const std::vector<vxf::Index>& period, vxf::Index n_entities,
                        vxf::Index n_periods, vxf::Index omit_entity = 0) {
  const vxf::Index n = y.size();
  const vxf::Index p = x.cols();
  const vxf::Index k = 1 + (n_entities - 1) + (n_periods - 1) + p;
  vxf::Matrix design = vxf::Matrix::Zero(n, k);
  for (vxf::Index i = 0; i < n; ++i) {
    vxf::Index col = 0;
    design(i, col++) = 1.0;
    for (vxf::Index e = 0; e < n_entities; ++e) {
      if (e == omit_entity) continue;
      if (entity[i] == e) design(i, col) = 1.0;
      ++col;
    }
    for (vxf::Index t = 1; t < n_periods; ++t, ++col) {
      if (period[i] == t) design(i, col) = 1.0;
    }
    design.block(i, col, 1, p) = x.row(i);
  }
  vxf::Vector beta = design.colPivHouseholderQr().solve(y);
  LsdvFit fit;
  fit.slopes = beta.tail(p);
  fit.residuals = y - design * beta;
  return fit;
}

// Explicit sandwich: (X'X)^-1 X' diag(e^2) X (X'X)^-1 with an n/(n-k) factor.
inline vxf::Matrix hc1_sandwich(const vxf::Matrix& x, const vxf::Vector& residuals,
                                vxf::Index k_full) {
  const vxf::Index n = x.rows();
  vxf::Matrix xtx_inv = (x.transpose() * x).inverse();
  vxf::Matrix meat = vxf::Matrix::Zero(x.cols(), x.cols());
  for (vxf::Index i = 0; i < n; ++i) {
    meat += residuals[i] * residuals[i] * x.row(i).transpose() * x.row(i);
  }
  meat *= static_cast<double>(n) / static_cast<double>(n - k_full);
  return xtx_inv * meat * xtx_inv;
}

}  // namespace oracle

#include "vxf/regression.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "vxf/csv.hpp"
#include "vxf/errors.hpp"

namespace vxf {

namespace {

// Regularized incomplete beta via Lentz's continued fraction.
double incomplete_beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * incomplete_beta_cf(a, b, x) / a;
  }
  return 1.0 - front * incomplete_beta_cf(b, a, 1.0 - x) / b;
}

struct Design {
  Vector y;
  Matrix X;                      // slope columns only
  std::vector<Index> entity;     // 0..C-1 per row
  std::vector<Index> period;     // 0..T-1 per row
  std::vector<std::string> entity_codes;
  std::vector<int> period_ends;
};

Design make_design(const PanelDataset& panel, const std::vector<std::string>& columns) {
  if (panel.rows.empty()) {
    throw Error(errc::panel_incomplete, "panel has no rows");
  }

  std::set<std::string> entity_set;
  std::set<int> period_set;
  for (const auto& row : panel.rows) {
    entity_set.insert(row.country);
    period_set.insert(row.period_end);
  }

  Design d;
  d.entity_codes.assign(entity_set.begin(), entity_set.end());
  d.period_ends.assign(period_set.begin(), period_set.end());

  std::map<std::string, Index> entity_index;
  std::map<int, Index> period_index;
  for (std::size_t i = 0; i < d.entity_codes.size(); ++i) {
    entity_index[d.entity_codes[i]] = static_cast<Index>(i);
  }
  for (std::size_t i = 0; i < d.period_ends.size(); ++i) {
    period_index[d.period_ends[i]] = static_cast<Index>(i);
  }

  const Index n = static_cast<Index>(panel.rows.size());
  const Index p = static_cast<Index>(columns.size());
  d.y.resize(n);
  d.X.resize(n, p);
  d.entity.reserve(n);
  d.period.reserve(n);

  auto field = [](const PanelRow& row, const std::string& name) {
    if (name == "y_lag") return row.y_lag;
    if (name == "n") return row.n;
    if (name == "dlogK") return row.dK;
    if (name == "dC") return row.dC;
    if (name == "C_lag") return row.C_lag;
    if (name == "dlogH") return row.dH;
    if (name == "logH_lag") return row.H_lag;
    throw Error(errc::parse_error, "unknown design column: " + name);
  };

  for (Index i = 0; i < n; ++i) {
    const PanelRow& row = panel.rows[static_cast<std::size_t>(i)];
    d.y[i] = row.dy;
    for (Index j = 0; j < p; ++j) {
      d.X(i, j) = field(row, columns[static_cast<std::size_t>(j)]);
    }
    d.entity.push_back(entity_index.at(row.country));
    d.period.push_back(period_index.at(row.period_end));
  }
  return d;
}

// Two-way demeaning. Balanced crossings (every entity x period cell holding
// the same number of rows) use the closed form; otherwise alternate entity
// and period demeaning until the means vanish.
Matrix demean_two_way(const Matrix& data, const std::vector<Index>& entity,
                      const std::vector<Index>& period, Index n_entities, Index n_periods) {
  const Index n = data.rows();

  Matrix cell_counts = Matrix::Zero(n_entities, n_periods);
  for (Index i = 0; i < n; ++i) cell_counts(entity[i], period[i]) += 1;
  const double first = cell_counts(0, 0);
  const bool balanced = first > 0 && (cell_counts.array() == first).all();

  Matrix out = data;
  if (balanced) {
    Matrix entity_means = Matrix::Zero(n_entities, data.cols());
    Matrix period_means = Matrix::Zero(n_periods, data.cols());
    Eigen::RowVectorXd grand = data.colwise().mean();
    for (Index i = 0; i < n; ++i) {
      entity_means.row(entity[i]) += data.row(i);
      period_means.row(period[i]) += data.row(i);
    }
    entity_means /= static_cast<double>(n) / static_cast<double>(n_entities);
    period_means /= static_cast<double>(n) / static_cast<double>(n_periods);
    for (Index i = 0; i < n; ++i) {
      out.row(i) -= entity_means.row(entity[i]) + period_means.row(period[i]) - grand;
    }
    return out;
  }

  Vector entity_count = Vector::Zero(n_entities);
  Vector period_count = Vector::Zero(n_periods);
  for (Index i = 0; i < n; ++i) {
    entity_count[entity[i]] += 1;
    period_count[period[i]] += 1;
  }
  for (int sweep = 0; sweep < 10000; ++sweep) {
    Matrix entity_means = Matrix::Zero(n_entities, data.cols());
    for (Index i = 0; i < n; ++i) entity_means.row(entity[i]) += out.row(i);
    entity_means.array().colwise() /= entity_count.array();
    for (Index i = 0; i < n; ++i) out.row(i) -= entity_means.row(entity[i]);

    Matrix period_means = Matrix::Zero(n_periods, data.cols());
    for (Index i = 0; i < n; ++i) period_means.row(period[i]) += out.row(i);
    period_means.array().colwise() /= period_count.array();
    for (Index i = 0; i < n; ++i) out.row(i) -= period_means.row(period[i]);

    double drift = std::max(entity_means.cwiseAbs().maxCoeff(),
                            period_means.cwiseAbs().maxCoeff());
    if (drift < 1e-13 * std::max(1.0, data.cwiseAbs().maxCoeff())) break;
  }
  return out;
}

// Leverages of the full dummy-variable design (intercept, entity and period
// dummies, slopes); HC2/HC3 weight residuals by them.
Vector full_design_leverage(const Design& d) {
  const Index n = d.y.size();
  const Index n_entities = static_cast<Index>(d.entity_codes.size());
  const Index n_periods = static_cast<Index>(d.period_ends.size());
  const Index k = 1 + (n_entities - 1) + (n_periods - 1) + d.X.cols();

  Matrix full = Matrix::Zero(n, k);
  for (Index i = 0; i < n; ++i) {
    Index col = 0;
    full(i, col++) = 1.0;
    if (d.entity[i] > 0) full(i, col + d.entity[i] - 1) = 1.0;
    col += n_entities - 1;
    if (d.period[i] > 0) full(i, col + d.period[i] - 1) = 1.0;
    col += n_periods - 1;
    full.block(i, col, 1, d.X.cols()) = d.X.row(i);
  }
  Eigen::HouseholderQR<Matrix> qr(full);
  Matrix thin_q = qr.householderQ() * Matrix::Identity(n, k);
  return thin_q.rowwise().squaredNorm();
}

RegressionResult fit_panel(const PanelDataset& panel, const std::vector<std::string>& columns,
                           const std::string& spec, HcType hc) {
  Design d = make_design(panel, columns);
  const Index n = d.y.size();
  const Index p = d.X.cols();
  const Index n_entities = static_cast<Index>(d.entity_codes.size());
  const Index n_periods = static_cast<Index>(d.period_ends.size());
  if (n_entities < 2 || n_periods < 2) {
    throw Error(errc::panel_incomplete, "need at least two countries and two periods");
  }
  const Index k_full = p + n_entities + n_periods - 1;  // absorbed dummies + slopes
  if (n <= k_full) {
    throw Error(errc::panel_incomplete,
                "too few observations (" + std::to_string(n) + ") for " +
                    std::to_string(k_full) + " parameters");
  }

  Matrix stacked(n, p + 1);
  stacked.col(0) = d.y;
  stacked.rightCols(p) = d.X;
  Matrix demeaned = demean_two_way(stacked, d.entity, d.period, n_entities, n_periods);
  Vector y_w = demeaned.col(0);
  Matrix x_w = demeaned.rightCols(p);

  Eigen::ColPivHouseholderQR<Matrix> qr(x_w);
  if (qr.rank() < p) {
    const auto& perm = qr.colsPermutation().indices();
    std::string dependent;
    for (Index j = qr.rank(); j < p; ++j) {
      if (!dependent.empty()) dependent += ", ";
      dependent += columns[static_cast<std::size_t>(perm[j])];
    }
    throw Error(errc::collinear_regressors,
                "collinear regressors after the within transformation: " + dependent,
                {{"columns", dependent}});
  }

  RegressionResult result;
  result.spec = spec;
  result.names = columns;
  result.hc = hc;
  result.n_obs = static_cast<int>(n);
  result.df_residual = static_cast<int>(n - k_full);

  result.coef = qr.solve(y_w);
  result.residuals = y_w - x_w * result.coef;
  const Vector& residuals = result.residuals;

  const double ssr = residuals.squaredNorm();
  const double tss_within = (y_w.array() - y_w.mean()).square().sum();
  const double tss_overall = (d.y.array() - d.y.mean()).square().sum();
  result.r2 = tss_within > 0 ? 1.0 - ssr / tss_within : 0.0;
  result.r2_overall = tss_overall > 0 ? 1.0 - ssr / tss_overall : 0.0;
  const double df_ratio = static_cast<double>(n - 1) / static_cast<double>(n - k_full);
  result.adj_r2 = 1.0 - (1.0 - result.r2) * df_ratio;
  result.adj_r2_overall = 1.0 - (1.0 - result.r2_overall) * df_ratio;

  // Sandwich covariance on the within design; the slope block matches the
  // dummy-variable regression exactly.
  Matrix xtx_inv = (x_w.transpose() * x_w).inverse();
  Vector weights = residuals.array().square();
  switch (hc) {
    case HcType::HC0:
      break;
    case HcType::HC1:
      weights *= static_cast<double>(n) / static_cast<double>(n - k_full);
      break;
    case HcType::HC2:
    case HcType::HC3: {
      Vector leverage = full_design_leverage(d);
      for (Index i = 0; i < n; ++i) {
        double denom = 1.0 - leverage[i];
        if (denom < 1e-12) denom = 1e-12;
        weights[i] /= hc == HcType::HC2 ? denom : denom * denom;
      }
      break;
    }
  }
  Matrix meat = x_w.transpose() * weights.asDiagonal() * x_w;
  Matrix cov = xtx_inv * meat * xtx_inv;

  result.robust_se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  result.t_stats.resize(p);
  result.p_values.resize(p);
  for (Index j = 0; j < p; ++j) {
    result.t_stats[j] = result.robust_se[j] > 0 ? result.coef[j] / result.robust_se[j] : 0.0;
    result.p_values[j] =
        student_t_p_value(result.t_stats[j], static_cast<double>(result.df_residual));
  }
  return result;
}

}  // namespace

std::optional<HcType> parse_hc_type(const std::string& name) {
  if (name == "HC0" || name == "hc0") return HcType::HC0;
  if (name == "HC1" || name == "hc1") return HcType::HC1;
  if (name == "HC2" || name == "hc2") return HcType::HC2;
  if (name == "HC3" || name == "hc3") return HcType::HC3;
  return std::nullopt;
}

const char* hc_type_name(HcType hc) {
  switch (hc) {
    case HcType::HC0: return "HC0";
    case HcType::HC1: return "HC1";
    case HcType::HC2: return "HC2";
    case HcType::HC3: return "HC3";
  }
  return "HC1";
}

double student_t_p_value(double t, double df) {
  if (!std::isfinite(t)) return 0;
  if (df <= 0) return 1;
  double x = df / (df + t * t);
  return incomplete_beta(df / 2.0, 0.5, x);
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

RegressionResult fit_fd_dynamic(const PanelDataset& panel, HcType hc) {
  return fit_panel(panel, {"y_lag", "n", "dlogK", "dC", "C_lag", "dlogH", "logH_lag"},
                   "fd-dynamic", hc);
}

RegressionResult fit_within_fe(const PanelDataset& panel, HcType hc) {
  return fit_panel(panel, {"n", "dlogK", "dC", "dlogH"}, "within-fe", hc);
}

SimpleOls unconditional_correlation(const std::vector<ScatterPoint>& points) {
  const auto n = points.size();
  if (n < 3) {
    throw Error(errc::panel_incomplete,
                "need at least 3 paired observations, got " + std::to_string(n));
  }
  double x_mean = 0, y_mean = 0;
  for (const auto& pt : points) {
    x_mean += pt.metric_growth;
    y_mean += pt.gdp_growth;
  }
  x_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& pt : points) {
    const double dx = pt.metric_growth - x_mean;
    const double dy = pt.gdp_growth - y_mean;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0) {
    throw Error(errc::collinear_regressors, "zero variance in the metric-growth regressor");
  }

  SimpleOls fit;
  fit.n_obs = static_cast<int>(n);
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 0.0;
  return fit;
}

std::string render_table(const RegressionResult& result,
                         const std::map<std::string, std::string>& display_names) {
  auto fixed3 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return std::string(buf);
  };

  std::ostringstream out;
  out << "Dependent variable: dy (log GDP pc difference)\n";
  out << "Specification: " << result.spec << "   robust SE: " << hc_type_name(result.hc)
      << "\n";
  out << std::string(52, '-') << "\n";
  for (Index j = 0; j < result.coef.size(); ++j) {
    const std::string& name = result.names[static_cast<std::size_t>(j)];
    auto it = display_names.find(name);
    const std::string label = it != display_names.end() ? it->second : name;
    out << "  " << label << std::string(label.size() < 24 ? 24 - label.size() : 1, ' ')
        << fixed3(result.coef[j]) << significance_stars(result.p_values[j]) << "\n";
    out << "  " << std::string(24, ' ') << "(" << fixed3(result.robust_se[j]) << ")\n";
  }
  out << std::string(52, '-') << "\n";
  out << "  Observations            " << result.n_obs << "\n";
  out << "  R2                      " << fixed3(result.r2) << "\n";
  out << "  Adjusted R2             " << fixed3(result.adj_r2) << "\n";
  out << "  Fixed effects           individual, time\n";
  out << "  Note: *p<0.1; **p<0.05; ***p<0.01\n";
  return out.str();
}

}  // namespace vxf

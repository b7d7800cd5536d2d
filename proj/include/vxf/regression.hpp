#pragma once

#include <map>
#include <string>
#include <vector>

#include "vxf/panel.hpp"
#include "vxf/types.hpp"

namespace vxf {

enum class HcType { HC0, HC1, HC2, HC3 };

std::optional<HcType> parse_hc_type(const std::string& name);
const char* hc_type_name(HcType hc);

struct RegressionResult {
  std::string spec;  // "fd-dynamic" or "within-fe"
  std::vector<std::string> names;
  Vector coef;
  Vector robust_se;
  Vector t_stats;
  Vector p_values;
  Vector residuals;  // within-model residuals, row order of the panel
  double r2 = 0;      // on the demeaned (within) model
  double adj_r2 = 0;  // penalized for slopes plus absorbed fixed effects
  double r2_overall = 0;
  double adj_r2_overall = 0;
  int n_obs = 0;
  int df_residual = 0;
  std::vector<std::string> fixed_effects{"individual", "time"};
  HcType hc = HcType::HC1;
};

// First-differenced dynamic growth model: dy on
//   y_lag, n, dlogK, dC, C_lag, dlogH, logH_lag
// with individual and time fixed effects absorbed by the within
// transformation and heteroskedasticity-robust standard errors.
RegressionResult fit_fd_dynamic(const PanelDataset& panel, HcType hc = HcType::HC1);

// Non-dynamic robustness model: dy on n, dlogK, dC, dlogH with both fixed
// effects; drops the lagged levels.
RegressionResult fit_within_fe(const PanelDataset& panel, HcType hc = HcType::HC1);

// Two-sided p-value of a t statistic.
double student_t_p_value(double t, double df);
std::string significance_stars(double p);

// Scatter of long-run growth against metric growth, one point per country.
struct ScatterPoint {
  std::string country;
  double metric_growth = 0;
  double gdp_growth = 0;
};

struct SimpleOls {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  int n_obs = 0;
};

SimpleOls unconditional_correlation(const std::vector<ScatterPoint>& points);

// Plain-text rendering of one fitted column, estimate over (SE) per row with
// significance stars, followed by the fit block.
std::string render_table(const RegressionResult& result,
                         const std::map<std::string, std::string>& display_names);

}  // namespace vxf

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "support/oracles.hpp"
#include "vxf/csv.hpp"
#include "vxf/errors.hpp"
#include "vxf/panel.hpp"
#include "vxf/regression.hpp"

using vxf::Error;
using vxf::errc;
using vxf::Matrix;
using vxf::PanelDataset;
using vxf::PanelRow;
using vxf::Vector;

namespace {

// Balanced synthetic panel with iid standard-normal regressors and
// dy = beta * dC + noise.
PanelDataset synthetic_panel(std::mt19937& rng, int n_countries, double beta,
                             double noise_sd) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, noise_sd);
  auto codes = oracle::synthetic_codes(n_countries);

  PanelDataset panel;
  for (const auto& code : codes) {
    for (const auto& period : vxf::kPanelPeriods) {
      PanelRow row;
      row.country = code;
      row.period_end = period.end;
      row.y_lag = normal(rng);
      row.n = normal(rng);
      row.dK = normal(rng);
      row.dH = normal(rng);
      row.H_lag = normal(rng);
      row.dC = normal(rng);
      row.C_lag = normal(rng);
      row.dy = beta * row.dC + noise(rng);
      panel.rows.push_back(std::move(row));
    }
  }
  return panel;
}

// Design pieces mirrored from the panel, for the oracle fits.
struct TestDesign {
  Vector y;
  Matrix x;
  std::vector<vxf::Index> entity;
  std::vector<vxf::Index> period;
  vxf::Index n_entities;
  vxf::Index n_periods;
};

TestDesign design_from(const PanelDataset& panel, const std::vector<std::string>& columns) {
  std::map<std::string, vxf::Index> entities;
  std::map<int, vxf::Index> periods;
  for (const auto& row : panel.rows) {
    entities.emplace(row.country, 0);
    periods.emplace(row.period_end, 0);
  }
  vxf::Index next = 0;
  for (auto& [code, idx] : entities) idx = next++;
  next = 0;
  for (auto& [year, idx] : periods) idx = next++;

  TestDesign d;
  d.n_entities = static_cast<vxf::Index>(entities.size());
  d.n_periods = static_cast<vxf::Index>(periods.size());
  const auto n = static_cast<vxf::Index>(panel.rows.size());
  d.y.resize(n);
  d.x.resize(n, static_cast<vxf::Index>(columns.size()));
  for (vxf::Index i = 0; i < n; ++i) {
    const PanelRow& row = panel.rows[static_cast<std::size_t>(i)];
    d.y[i] = row.dy;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const std::string& name = columns[j];
      double value = name == "y_lag"   ? row.y_lag
                     : name == "n"     ? row.n
                     : name == "dlogK" ? row.dK
                     : name == "dC"    ? row.dC
                     : name == "C_lag" ? row.C_lag
                     : name == "dlogH" ? row.dH
                                       : row.H_lag;
      d.x(i, static_cast<vxf::Index>(j)) = value;
    }
    d.entity.push_back(entities.at(row.country));
    d.period.push_back(periods.at(row.period_end));
  }
  return d;
}

const std::vector<std::string> kDynamicColumns = {"y_lag", "n",     "dlogK",   "dC",
                                                  "C_lag", "dlogH", "logH_lag"};
const std::vector<std::string> kWithinColumns = {"n", "dlogK", "dC", "dlogH"};

vxf::AuxiliarySeries aux_from_rows(
    const std::vector<std::tuple<std::string, int, std::string, double>>& rows) {
  vxf::csv::Table table;
  table.header = {"country", "year", "variable", "value"};
  std::set<std::string> countries;
  for (const auto& [country, year, variable, value] : rows) {
    table.rows.push_back({country, std::to_string(year), variable,
                          vxf::csv::format_double(value)});
    countries.insert(country);
  }
  auto registry = vxf::CountryRegistry::sorted({countries.begin(), countries.end()});
  return vxf::auxiliary_from_csv(table, registry, {}, "test");
}

}  // namespace

TEST_CASE("build_panel: transforms, exclusions and completeness") {
  std::vector<std::tuple<std::string, int, std::string, double>> rows;
  const std::vector<int> years = {2000, 2004, 2005, 2009, 2010, 2014};
  vxf::ScoresByYear scores;

  auto add_country = [&](const std::string& code, double gdp_factor) {
    double gdp = 10000.0;
    for (int year : years) {
      rows.emplace_back(code, year, "gdp_pc", gdp);
      rows.emplace_back(code, year, "capital", 1e6);
      rows.emplace_back(code, year, "population", 5e7);
      rows.emplace_back(code, year, "human_capital", 3.0);
      scores[year][code] = 1.0;
      gdp *= gdp_factor;
    }
  };
  add_country("AAA", 1.0);  // constant GDP pc
  add_country("BBB", 2.0);  // doubles between consecutive endpoint years
  add_country("LUX", 1.0);  // excluded regardless of data

  auto aux = aux_from_rows(rows);
  auto candidates = vxf::CountryRegistry::sorted({"AAA", "BBB", "LUX"});
  auto panel = vxf::build_panel(aux, scores, vxf::MetricTransform::log_difference, candidates);

  CHECK(panel.complete());
  CHECK(panel.rows.size() == 6);  // 2 countries x 3 periods, LUX dropped
  for (const auto& row : panel.rows) {
    CHECK(row.country != "LUX");
    if (row.country == "AAA") CHECK(row.dy == doctest::Approx(0.0));
    if (row.country == "BBB") CHECK(row.dy == doctest::Approx(std::log(2.0)));
  }

  SUBCASE("missing endpoint rejects the row and lists the hole") {
    vxf::ScoresByYear holey = scores;
    holey[2009].erase("BBB");
    auto incomplete =
        vxf::build_panel(aux, holey, vxf::MetricTransform::log_difference, candidates);
    CHECK(!incomplete.complete());
    CHECK(incomplete.rows.size() == 5);
    REQUIRE(incomplete.report.missing.size() == 1);
    CHECK(incomplete.report.missing[0].first == "BBB");
    CHECK(incomplete.report.missing[0].second == 2009);
  }

  SUBCASE("level transform keeps plain differences") {
    vxf::ScoresByYear level_scores = scores;
    level_scores[2014]["AAA"] = -0.5;  // negative is fine in levels
    level_scores[2010]["AAA"] = 0.25;
    auto level_panel = vxf::build_panel(aux, level_scores,
                                        vxf::MetricTransform::level_difference, candidates);
    CHECK(level_panel.complete());
    for (const auto& row : level_panel.rows) {
      if (row.country == "AAA" && row.period_end == 2014) {
        CHECK(row.dC == doctest::Approx(-0.75));
        CHECK(row.C_lag == doctest::Approx(0.25));
      }
    }
  }

  SUBCASE("non-positive metric under the log transform rejects the row") {
    vxf::ScoresByYear bad = scores;
    bad[2014]["AAA"] = 0.0;
    auto rejected =
        vxf::build_panel(aux, bad, vxf::MetricTransform::log_difference, candidates);
    CHECK(!rejected.complete());
    CHECK(rejected.rows.size() == 5);
  }
}

TEST_CASE("a full 40-country panel has 120 rows") {
  std::vector<std::tuple<std::string, int, std::string, double>> rows;
  vxf::ScoresByYear scores;
  auto codes = oracle::synthetic_codes(40);
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> jitter(0.9, 1.2);
  for (const auto& code : codes) {
    double gdp = 12000.0;
    for (int year : {2000, 2004, 2005, 2009, 2010, 2014}) {
      gdp *= jitter(rng);
      rows.emplace_back(code, year, "gdp_pc", gdp);
      rows.emplace_back(code, year, "capital", 1e6 * jitter(rng));
      rows.emplace_back(code, year, "population", 5e7 * jitter(rng));
      rows.emplace_back(code, year, "human_capital", 3.0 * jitter(rng));
      scores[year][code] = jitter(rng);
    }
  }
  auto aux = aux_from_rows(rows);
  auto candidates = vxf::CountryRegistry::sorted(codes);
  auto panel = vxf::build_panel(aux, scores, vxf::MetricTransform::log_difference, candidates);
  CHECK(panel.complete());
  CHECK(panel.rows.size() == 120);
  CHECK(panel.n_countries() == 40);
  CHECK(panel.n_periods() == 3);
}

TEST_CASE("DGP recovery: the dC coefficient comes back at 0.300") {
  std::mt19937 rng(42);
  auto panel = synthetic_panel(rng, 40, 0.3, 1e-6);
  auto result = vxf::fit_fd_dynamic(panel);
  CHECK(result.n_obs == 120);
  auto dc = std::find(result.names.begin(), result.names.end(), "dC") - result.names.begin();
  CHECK(result.coef[dc] == doctest::Approx(0.300).epsilon(1e-3));
  // The pure-noise regressors carry nothing.
  for (std::size_t j = 0; j < result.names.size(); ++j) {
    if (result.names[j] == "dC") continue;
    CHECK(std::abs(result.coef[static_cast<vxf::Index>(j)]) <= 1e-5);
  }
}

TEST_CASE("duplicating every row leaves point estimates unchanged") {
  std::mt19937 rng(43);
  auto panel = synthetic_panel(rng, 12, 0.3, 0.05);
  auto base = vxf::fit_fd_dynamic(panel);

  PanelDataset doubled = panel;
  doubled.rows.insert(doubled.rows.end(), panel.rows.begin(), panel.rows.end());
  auto twice = vxf::fit_fd_dynamic(doubled);
  CHECK((twice.coef - base.coef).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("FWL: within estimates equal dummy-variable estimates") {
  std::mt19937 rng(44);
  auto panel = synthetic_panel(rng, 15, 0.25, 0.1);

  for (int which = 0; which < 2; ++which) {
    const auto& columns = which == 0 ? kDynamicColumns : kWithinColumns;
    auto result = which == 0 ? vxf::fit_fd_dynamic(panel) : vxf::fit_within_fe(panel);
    auto d = design_from(panel, columns);
    auto lsdv = oracle::lsdv_fit(d.y, d.x, d.entity, d.period, d.n_entities, d.n_periods);
    CHECK((result.coef - lsdv.slopes).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((result.residuals - lsdv.residuals).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("within R2 is invariant to the omitted dummy") {
  std::mt19937 rng(45);
  auto panel = synthetic_panel(rng, 10, 0.2, 0.2);
  auto d = design_from(panel, kDynamicColumns);
  auto omit0 = oracle::lsdv_fit(d.y, d.x, d.entity, d.period, d.n_entities, d.n_periods, 0);
  auto omit5 = oracle::lsdv_fit(d.y, d.x, d.entity, d.period, d.n_entities, d.n_periods, 5);
  CHECK(omit0.residuals.squaredNorm() ==
        doctest::Approx(omit5.residuals.squaredNorm()).epsilon(1e-12));

  auto result = vxf::fit_fd_dynamic(panel);
  CHECK(result.residuals.squaredNorm() ==
        doctest::Approx(omit0.residuals.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("HC1 standard errors match the explicit sandwich oracle") {
  std::mt19937 rng(46);
  auto panel = synthetic_panel(rng, 15, 0.25, 0.1);
  auto result = vxf::fit_fd_dynamic(panel);
  auto d = design_from(panel, kDynamicColumns);

  // Independent within design: project out the dummy space column by column.
  const vxf::Index n = d.y.size();
  const vxf::Index k_dummies = 1 + (d.n_entities - 1) + (d.n_periods - 1);
  Matrix dummies = Matrix::Zero(n, k_dummies);
  for (vxf::Index i = 0; i < n; ++i) {
    dummies(i, 0) = 1.0;
    if (d.entity[i] > 0) dummies(i, d.entity[i]) = 1.0;
    if (d.period[i] > 0) dummies(i, d.n_entities - 1 + d.period[i]) = 1.0;
  }
  auto project = [&](const Vector& v) {
    return (v - dummies * dummies.colPivHouseholderQr().solve(v)).eval();
  };
  Matrix x_within(n, d.x.cols());
  for (vxf::Index j = 0; j < d.x.cols(); ++j) x_within.col(j) = project(d.x.col(j));
  Vector y_within = project(d.y);
  Vector beta = x_within.colPivHouseholderQr().solve(y_within);
  Vector residuals = y_within - x_within * beta;

  const vxf::Index k_full = d.x.cols() + d.n_entities + d.n_periods - 1;
  Matrix cov = oracle::hc1_sandwich(x_within, residuals, k_full);
  for (vxf::Index j = 0; j < d.x.cols(); ++j) {
    CHECK(result.robust_se[j] == doctest::Approx(std::sqrt(cov(j, j))).epsilon(1e-10));
  }
}

TEST_CASE("residuals are orthogonal to the within design") {
  std::mt19937 rng(47);
  auto panel = synthetic_panel(rng, 12, 0.3, 0.15);
  for (int which = 0; which < 2; ++which) {
    const auto& columns = which == 0 ? kDynamicColumns : kWithinColumns;
    auto result = which == 0 ? vxf::fit_fd_dynamic(panel) : vxf::fit_within_fe(panel);
    auto d = design_from(panel, columns);
    auto lsdv = oracle::lsdv_fit(d.y, d.x, d.entity, d.period, d.n_entities, d.n_periods);
    // X' e with the raw slope columns: within residuals are orthogonal to the
    // demeaned design, and the dummy fit removes the rest.
    Vector xte = d.x.transpose() * lsdv.residuals;
    CHECK(xte.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((result.residuals - lsdv.residuals).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("the robustness specification drops the lagged levels") {
  std::mt19937 rng(48);
  auto panel = synthetic_panel(rng, 10, 0.2, 0.1);
  auto result = vxf::fit_within_fe(panel);
  CHECK(result.names == kWithinColumns);
  CHECK(result.spec == "within-fe");
  CHECK(result.n_obs == 30);
}

TEST_CASE("HC variants are ordered as expected on well-behaved data") {
  std::mt19937 rng(49);
  auto panel = synthetic_panel(rng, 20, 0.25, 0.1);
  auto hc0 = vxf::fit_within_fe(panel, vxf::HcType::HC0);
  auto hc1 = vxf::fit_within_fe(panel, vxf::HcType::HC1);
  auto hc3 = vxf::fit_within_fe(panel, vxf::HcType::HC3);
  for (vxf::Index j = 0; j < hc0.robust_se.size(); ++j) {
    CHECK(hc1.robust_se[j] > hc0.robust_se[j]);
    CHECK(hc3.robust_se[j] > hc0.robust_se[j]);
  }
}

TEST_CASE("perfectly collinear regressors are named") {
  std::mt19937 rng(50);
  auto panel = synthetic_panel(rng, 10, 0.2, 0.1);
  for (auto& row : panel.rows) row.dC = row.dK;
  try {
    vxf::fit_fd_dynamic(panel);
    FAIL("expected collinear_regressors");
  } catch (const Error& e) {
    CHECK(e.code == errc::collinear_regressors);
    const std::string& named = e.details.at("columns");
    CHECK((named.find("dC") != std::string::npos ||
           named.find("dlogK") != std::string::npos));
  }
}

TEST_CASE("adjusted R2 penalizes absorbed fixed effects") {
  std::mt19937 rng(51);
  auto panel = synthetic_panel(rng, 40, 0.3, 0.5);
  auto result = vxf::fit_fd_dynamic(panel);
  CHECK(result.adj_r2 <= result.r2);
  const double expected = 1.0 - (1.0 - result.r2) * (120.0 - 1.0) /
                                    (120.0 - (7.0 + 40.0 + 3.0 - 1.0));
  CHECK(result.adj_r2 == doctest::Approx(expected).epsilon(1e-12));
  CHECK(result.df_residual == 120 - 49);
}

TEST_CASE("unconditional correlation") {
  SUBCASE("a perfect line gives R2 = 1") {
    std::vector<vxf::ScatterPoint> points;
    for (int i = 0; i < 10; ++i) {
      points.push_back({"C" + std::to_string(i), 0.1 * i, 0.3 + 0.5 * (0.1 * i)});
    }
    auto fit = vxf::unconditional_correlation(points);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("noisy data gives the R2 of the correlation") {
    std::mt19937 rng(52);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<vxf::ScatterPoint> points;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < 50; ++i) {
      double x = 0.05 * i;
      double y = 0.8 * x + noise(rng);
      points.push_back({"C" + std::to_string(i), x, y});
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
    }
    auto fit = vxf::unconditional_correlation(points);
    const double n = 50;
    double corr = (n * sxy - sx * sy) /
                  std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(fit.r2 == doctest::Approx(corr * corr).epsilon(1e-12));
  }

  SUBCASE("zero variance in the regressor errors") {
    std::vector<vxf::ScatterPoint> points = {
        {"AAA", 1.0, 0.1}, {"BBB", 1.0, 0.2}, {"CCC", 1.0, 0.3}};
    CHECK_THROWS_AS(vxf::unconditional_correlation(points), Error);
  }

  SUBCASE("fewer than three pairs errors") {
    std::vector<vxf::ScatterPoint> points = {{"AAA", 1.0, 0.1}, {"BBB", 2.0, 0.2}};
    CHECK_THROWS_AS(vxf::unconditional_correlation(points), Error);
  }
}

TEST_CASE("student t p-values behave") {
  CHECK(vxf::student_t_p_value(0.0, 100) == doctest::Approx(1.0));
  CHECK(vxf::student_t_p_value(1.96, 100000) == doctest::Approx(0.05).epsilon(1e-2));
  CHECK(vxf::student_t_p_value(10.0, 50) < 1e-10);
  CHECK(vxf::significance_stars(0.005) == "***");
  CHECK(vxf::significance_stars(0.02) == "**");
  CHECK(vxf::significance_stars(0.07) == "*");
  CHECK(vxf::significance_stars(0.2) == "");
}

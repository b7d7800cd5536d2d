#include "vxf/panel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vxf/errors.hpp"

namespace vxf {

namespace {

struct RowBuilder {
  const AuxiliarySeries& aux;
  const ScoresByYear& scores;
  MetricTransform transform;
  PanelReport& report;

  std::optional<double> aux_value(const std::string& country, int year, AuxVariable v,
                                  std::vector<std::string>& missing_what) {
    auto value = aux.value(country, year, v);
    if (!value) {
      missing_what.push_back(std::string(aux_variable_name(v)) + "@" + std::to_string(year));
      report.missing.emplace_back(country, year);
    }
    return value;
  }

  std::optional<double> score_value(const std::string& country, int year,
                                    std::vector<std::string>& missing_what) {
    auto year_it = scores.find(year);
    if (year_it != scores.end()) {
      auto it = year_it->second.find(country);
      if (it != year_it->second.end()) return it->second;
    }
    missing_what.push_back("complexity@" + std::to_string(year));
    report.missing.emplace_back(country, year);
    return std::nullopt;
  }
};

}  // namespace

std::size_t PanelDataset::n_countries() const {
  std::set<std::string> c;
  for (const auto& row : rows) c.insert(row.country);
  return c.size();
}

std::size_t PanelDataset::n_periods() const {
  std::set<int> p;
  for (const auto& row : rows) p.insert(row.period_end);
  return p.size();
}

PanelDataset build_panel(const AuxiliarySeries& aux, const ScoresByYear& scores,
                         MetricTransform transform, const CountryRegistry& candidates) {
  PanelDataset panel;
  RowBuilder builder{aux, scores, transform, panel.report};

  for (const auto& country : candidates.codes()) {
    if (std::find(kPanelExclusions.begin(), kPanelExclusions.end(), country) !=
        kPanelExclusions.end()) {
      continue;
    }
    for (const auto& period : kPanelPeriods) {
      std::vector<std::string> missing_what;

      auto y0 = builder.aux_value(country, period.start, AuxVariable::gdp_pc, missing_what);
      auto y1 = builder.aux_value(country, period.end, AuxVariable::gdp_pc, missing_what);
      auto pop0 = builder.aux_value(country, period.start, AuxVariable::population, missing_what);
      auto pop1 = builder.aux_value(country, period.end, AuxVariable::population, missing_what);
      auto k0 = builder.aux_value(country, period.start, AuxVariable::capital, missing_what);
      auto k1 = builder.aux_value(country, period.end, AuxVariable::capital, missing_what);
      auto h0 = builder.aux_value(country, period.start, AuxVariable::human_capital, missing_what);
      auto h1 = builder.aux_value(country, period.end, AuxVariable::human_capital, missing_what);
      auto c0 = builder.score_value(country, period.start, missing_what);
      auto c1 = builder.score_value(country, period.end, missing_what);

      if (!missing_what.empty()) {
        std::string reason = country + " " + std::to_string(period.start) + "-" +
                             std::to_string(period.end) + ": missing ";
        for (std::size_t i = 0; i < missing_what.size(); ++i) {
          if (i) reason += ", ";
          reason += missing_what[i];
        }
        panel.report.rejected.push_back(std::move(reason));
        continue;
      }
      if ((h0 && *h0 <= 0) || (h1 && *h1 <= 0)) {
        panel.report.rejected.push_back(country + " " + std::to_string(period.start) + "-" +
                                        std::to_string(period.end) +
                                        ": non-positive human capital");
        continue;
      }

      PanelRow row;
      row.country = country;
      row.period_end = period.end;
      row.dy = std::log(*y1) - std::log(*y0);
      row.y_lag = std::log(*y0);
      row.n = std::log(*pop1) - std::log(*pop0);
      row.dK = std::log(*k1) - std::log(*k0);
      row.dH = std::log(*h1) - std::log(*h0);
      row.H_lag = std::log(*h0);

      if (transform == MetricTransform::log_difference) {
        if (*c0 <= 0 || *c1 <= 0) {
          panel.report.rejected.push_back(country + " " + std::to_string(period.start) + "-" +
                                          std::to_string(period.end) +
                                          ": non-positive complexity value under log transform");
          continue;
        }
        row.dC = std::log(*c1) - std::log(*c0);
        row.C_lag = std::log(*c0);
      } else {
        row.dC = *c1 - *c0;
        row.C_lag = *c0;
      }
      panel.rows.push_back(std::move(row));
    }
  }

  std::sort(panel.rows.begin(), panel.rows.end(), [](const PanelRow& a, const PanelRow& b) {
    if (a.country != b.country) return a.country < b.country;
    return a.period_end < b.period_end;
  });
  return panel;
}

}  // namespace vxf

#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "vxf/iot.hpp"
#include "vxf/registry.hpp"

namespace vxf {

// The three non-overlapping growth windows of the panel.
struct Period {
  int start;
  int end;
};
inline constexpr std::array<Period, 3> kPanelPeriods = {{{2000, 2004}, {2005, 2009}, {2010, 2014}}};

// Countries with incomplete complexity coverage, dropped from the panel.
inline const std::vector<std::string> kPanelExclusions = {"LUX", "MLT", "TWN"};

struct PanelRow {
  std::string country;
  int period_end = 0;  // 2004, 2009 or 2014
  double dy = 0;       // log gdp_pc difference over the window
  double y_lag = 0;    // log gdp_pc at window start
  double n = 0;        // log population difference
  double dK = 0;       // log capital difference
  double dH = 0;       // log human-capital difference
  double H_lag = 0;    // log human capital at window start
  double dC = 0;       // complexity change (log difference or level difference)
  double C_lag = 0;    // complexity at window start
};

struct PanelReport {
  std::vector<std::string> rejected;                 // human-readable reasons
  std::vector<std::pair<std::string, int>> missing;  // (country, year) holes
};

struct PanelDataset {
  std::vector<PanelRow> rows;  // sorted by (country, period_end)
  PanelReport report;

  bool complete() const { return report.rejected.empty(); }
  std::size_t n_countries() const;
  std::size_t n_periods() const;
};

enum class MetricTransform { log_difference, level_difference };

// Per-year complexity scores: year -> country -> value.
using ScoresByYear = std::map<int, std::map<std::string, double>>;

// Builds the (country, period) rows. VXF and EF enter in logs, ECI in levels
// (published ECI values can be negative). Rows with any missing endpoint are
// rejected and listed, never imputed.
PanelDataset build_panel(const AuxiliarySeries& aux, const ScoresByYear& scores,
                         MetricTransform transform, const CountryRegistry& candidates);

}  // namespace vxf

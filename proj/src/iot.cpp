#include "vxf/iot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "vxf/errors.hpp"

namespace vxf {

namespace {

constexpr const char* kLongHeader[] = {"year",         "origin_country",
                                       "origin_sector", "dest_country",
                                       "dest_sector_or_FD", "value"};

// Accounting-identity tolerance: published tables are rounded.
constexpr double kIdentityRelTol = 1e-6;
constexpr double kIdentityAbsFloor = 1e-3;

bool is_fd_field(const std::string& field) {
  return field == "FD" || field.rfind("FD:", 0) == 0;
}

std::string fd_category(const std::string& field) {
  return field.size() > 3 ? field.substr(3) : std::string();
}

void require_header(const csv::Table& table, const char* const* expected, std::size_t n,
                    const std::string& source) {
  if (table.header.size() != n) {
    throw Error(errc::parse_error,
                source + ": expected " + std::to_string(n) + " header columns, got " +
                    std::to_string(table.header.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (table.header[i] != expected[i]) {
      throw Error(errc::parse_error, source + ": header column " + std::to_string(i + 1) +
                                         " must be '" + expected[i] + "', got '" +
                                         table.header[i] + "'");
    }
  }
}

int resolve_year(const std::set<int>& seen, const std::optional<int>& wanted,
                 const std::string& source) {
  if (wanted) return *wanted;
  if (seen.size() == 1) return *seen.begin();
  std::string years;
  for (int y : seen) {
    if (!years.empty()) years += ", ";
    years += std::to_string(y);
  }
  throw Error(errc::parse_error,
              source + ": file holds years {" + years + "}; pass a year filter",
              {{"years", years}});
}

IOTable iot_from_long_csv(const csv::Table& table, const IotLoadOptions& options,
                          const std::string& source) {
  require_header(table, kLongHeader, 6, source);

  std::set<int> years_seen;
  std::set<std::string> country_codes;
  std::set<std::string> sector_ids;

  auto row_context = [&](std::size_t i) { return source + " row " + std::to_string(i + 1); };

  // First pass: registries and year resolution.
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() != 6) {
      throw Error(errc::parse_error, row_context(i) + ": expected 6 fields, got " +
                                         std::to_string(row.size()));
    }
    int year = csv::to_int(row[0], row_context(i));
    if (options.year && year != *options.year) continue;
    years_seen.insert(year);

    const std::string& origin_sector = row[2];
    const std::string& dest = row[4];
    if (origin_sector == "VA" || origin_sector == "GO") {
      if (is_fd_field(dest)) {
        throw Error(errc::parse_error,
                    row_context(i) + ": " + origin_sector + " rows must target an activity");
      }
      country_codes.insert(row[3]);
      sector_ids.insert(dest);
    } else {
      if (origin_sector == "FD") {
        throw Error(errc::parse_error, row_context(i) + ": 'FD' is reserved");
      }
      country_codes.insert(row[1]);
      sector_ids.insert(origin_sector);
      country_codes.insert(row[3]);
      if (!is_fd_field(dest)) sector_ids.insert(dest);
    }
  }
  if (years_seen.empty()) {
    throw Error(errc::parse_error, source + ": no rows" +
                                       (options.year ? " for year " + std::to_string(*options.year)
                                                     : std::string()));
  }
  sector_ids.erase("VA");
  sector_ids.erase("GO");

  IOTable iot;
  iot.year = resolve_year(years_seen, options.year, source);
  iot.countries =
      CountryRegistry::sorted({country_codes.begin(), country_codes.end()});
  iot.sectors = SectorRegistry::from_ids({sector_ids.begin(), sector_ids.end()});

  const Index n = iot.n_activities();
  const Index c_count = iot.n_countries();
  iot.Z = Matrix::Zero(n, n);
  iot.F = Matrix::Zero(n, c_count);
  iot.va = Vector::Zero(n);
  iot.x = Vector::Zero(n);

  // Second pass: accumulate cells (duplicate rows sum, so split final-demand
  // categories land in one column per destination).
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    int year = csv::to_int(row[0], row_context(i));
    if (options.year && year != *options.year) continue;

    double value = csv::to_double(row[5], row_context(i));
    const std::string& origin_sector = row[2];
    const std::string& dest = row[4];

    if (origin_sector == "VA" || origin_sector == "GO") {
      Index activity = iot.activity_index(iot.countries.index_of(row[3]),
                                          iot.sectors.index_of(dest));
      if (origin_sector == "VA") {
        iot.va[activity] += value;
      } else {
        iot.x[activity] += value;
      }
      continue;
    }

    Index origin = iot.activity_index(iot.countries.index_of(row[1]),
                                      iot.sectors.index_of(origin_sector));
    if (is_fd_field(dest)) {
      if (options.exclude_fd_categories.count(fd_category(dest))) continue;
      iot.F(origin, iot.countries.index_of(row[3])) += value;
    } else {
      Index target = iot.activity_index(iot.countries.index_of(row[3]),
                                        iot.sectors.index_of(dest));
      iot.Z(origin, target) += value;
    }
  }
  return iot;
}

IOTable iot_from_wide_csv(const csv::Table& table, const IotLoadOptions& options,
                          const std::string& source) {
  // Layout: line 1 is "year,<y>", line 2 the column header
  // country,sector,<CCC:sector>...,FD:<CCC>..., then one row per origin
  // activity plus VA and GO rows.
  if (table.header.size() != 2 || table.header[0] != "year") {
    throw Error(errc::parse_error, source + ": wide format starts with a 'year,<year>' line");
  }
  int year = csv::to_int(table.header[1], source + " year line");
  if (options.year && year != *options.year) {
    throw Error(errc::parse_error,
                source + ": file is for year " + std::to_string(year) + ", not " +
                    std::to_string(*options.year));
  }
  if (table.rows.empty()) {
    throw Error(errc::parse_error, source + ": missing column header");
  }

  const auto& columns = table.rows.front();
  if (columns.size() < 3 || columns[0] != "country" || columns[1] != "sector") {
    throw Error(errc::parse_error,
                source + ": wide header must start with country,sector");
  }

  struct WideColumn {
    bool is_fd = false;
    std::string country;
    std::string sector;
  };
  std::vector<WideColumn> parsed_cols;
  std::set<std::string> country_codes;
  std::vector<std::string> sector_order;  // header order, deduplicated
  std::set<std::string> sector_seen;

  for (std::size_t i = 2; i < columns.size(); ++i) {
    const std::string& label = columns[i];
    WideColumn col;
    if (label.rfind("FD:", 0) == 0) {
      col.is_fd = true;
      col.country = label.substr(3);
    } else {
      auto sep = label.find(':');
      if (sep == std::string::npos || sep == 0 || sep + 1 == label.size()) {
        throw Error(errc::parse_error,
                    source + ": column '" + label + "' is not '<country>:<sector>' or 'FD:<country>'");
      }
      col.country = label.substr(0, sep);
      col.sector = label.substr(sep + 1);
      if (sector_seen.insert(col.sector).second) sector_order.push_back(col.sector);
    }
    country_codes.insert(col.country);
    parsed_cols.push_back(std::move(col));
  }

  IOTable iot;
  iot.year = year;
  iot.countries = CountryRegistry::sorted({country_codes.begin(), country_codes.end()});
  iot.sectors = SectorRegistry::from_ids(sector_order);

  const Index n = iot.n_activities();
  iot.Z = Matrix::Zero(n, n);
  iot.F = Matrix::Zero(n, iot.n_countries());
  iot.va = Vector::Zero(n);
  iot.x = Vector::Zero(n);

  // Map file columns to canonical indices.
  struct Target {
    bool is_fd;
    Index index;  // activity or country index
  };
  std::vector<Target> targets;
  for (const auto& col : parsed_cols) {
    Index country = iot.countries.index_of(col.country);
    if (col.is_fd) {
      targets.push_back({true, country});
    } else {
      targets.push_back({false, iot.activity_index(country, iot.sectors.index_of(col.sector))});
    }
  }

  for (std::size_t r = 1; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string context = source + " row " + std::to_string(r + 1);
    if (row.size() != columns.size()) {
      throw Error(errc::parse_error, context + ": expected " + std::to_string(columns.size()) +
                                         " fields, got " + std::to_string(row.size()));
    }
    const std::string& kind = row[0];
    if (kind == "VA" || kind == "GO") {
      for (std::size_t i = 2; i < row.size(); ++i) {
        const auto& target = targets[i - 2];
        if (target.is_fd) {
          if (!row[i].empty() && csv::to_double(row[i], context) != 0) {
            throw Error(errc::parse_error, context + ": " + kind + " has no final-demand cells");
          }
          continue;
        }
        double value = row[i].empty() ? 0.0 : csv::to_double(row[i], context);
        if (kind == "VA") {
          iot.va[target.index] += value;
        } else {
          iot.x[target.index] += value;
        }
      }
      continue;
    }
    Index origin = iot.activity_index(iot.countries.index_of(row[0]),
                                      iot.sectors.index_of(row[1]));
    for (std::size_t i = 2; i < row.size(); ++i) {
      double value = row[i].empty() ? 0.0 : csv::to_double(row[i], context);
      const auto& target = targets[i - 2];
      if (target.is_fd) {
        iot.F(origin, target.index) += value;
      } else {
        iot.Z(origin, target.index) += value;
      }
    }
  }
  return iot;
}

}  // namespace

std::optional<IotFormat> parse_iot_format(const std::string& name) {
  if (name == "long-csv") return IotFormat::long_csv;
  if (name == "wide-csv") return IotFormat::wide_csv;
  return std::nullopt;
}

IOTable iot_from_csv(const csv::Table& table, const IotLoadOptions& options,
                     const std::string& source) {
  IOTable iot = options.format == IotFormat::long_csv
                    ? iot_from_long_csv(table, options, source)
                    : iot_from_wide_csv(table, options, source);
  validate_iot(iot);
  return iot;
}

IOTable load_iot(const std::filesystem::path& path, const IotLoadOptions& options) {
  return iot_from_csv(csv::read_file(path), options, path.filename().string());
}

void validate_iot(IOTable& table) {
  const Index n = table.n_activities();
  if (table.Z.rows() != n || table.Z.cols() != n || table.F.rows() != n ||
      table.F.cols() != table.n_countries() || table.va.size() != n || table.x.size() != n) {
    throw Error(errc::dimension_mismatch, "table blocks do not match registry sizes");
  }

  IngestReport& report = table.report;

  // WIOD-style tables carry small negative inventory adjustments. Entries in
  // [-eps, 0) are clamped to zero; larger negatives are kept (and excluded
  // from the non-negativity check) in final demand only.
  const double eps_neg = table.F.size() > 0 ? 1e-6 * table.F.cwiseAbs().maxCoeff() : 0.0;
  auto clamp_block = [&](auto& block, const char* name, bool negatives_allowed) {
    for (Index j = 0; j < block.cols(); ++j) {
      for (Index i = 0; i < block.rows(); ++i) {
        double& cell = block(i, j);
        if (!std::isfinite(cell)) {
          throw Error(errc::non_finite, std::string("non-finite entry in ") + name);
        }
        if (cell >= 0) continue;
        if (cell >= -eps_neg) {
          report.clamped_negatives += 1;
          report.clamped_mass += -cell;
          cell = 0;
        } else if (negatives_allowed) {
          report.flagged_negative_fd += 1;
        } else {
          throw Error(errc::non_positive_value,
                      std::string("negative entry in ") + name + ": " +
                          csv::format_double(cell),
                      {{"block", name}, {"value", csv::format_double(cell)}});
        }
      }
    }
  };
  clamp_block(table.Z, "Z", false);
  clamp_block(table.F, "F", true);
  clamp_block(table.va, "va", false);
  clamp_block(table.x, "x", false);
  if (report.flagged_negative_fd > 0) {
    report.warnings.push_back(std::to_string(report.flagged_negative_fd) +
                              " negative final-demand entries kept (inventory changes)");
  }

  // Accounting identities. Row i: x_i = sum_j Z_ij + sum_d F_id.
  // Column j: x_j = sum_i Z_ij + va_j.
  double worst_row_resid = 0, worst_col_resid = 0;
  Index worst_row = -1, worst_col = -1;
  double worst_row_abs = 0, worst_col_abs = 0;
  for (Index i = 0; i < n; ++i) {
    double rhs = table.Z.row(i).sum() + table.F.row(i).sum();
    double scale = std::max(std::abs(table.x[i]), std::abs(rhs));
    double resid = std::abs(table.x[i] - rhs);
    double rel = resid / std::max(scale, kIdentityAbsFloor);
    if (rel > worst_row_resid) {
      worst_row_resid = rel;
      worst_row = i;
      worst_row_abs = resid;
    }
  }
  for (Index j = 0; j < n; ++j) {
    double rhs = table.Z.col(j).sum() + table.va[j];
    double scale = std::max(std::abs(table.x[j]), std::abs(rhs));
    double resid = std::abs(table.x[j] - rhs);
    double rel = resid / std::max(scale, kIdentityAbsFloor);
    if (rel > worst_col_resid) {
      worst_col_resid = rel;
      worst_col = j;
      worst_col_abs = resid;
    }
  }
  report.max_row_residual = worst_row_resid;
  report.max_col_residual = worst_col_resid;

  if (worst_row_resid > kIdentityRelTol) {
    throw Error(errc::accounting_identity,
                "gross output != intermediate use + final demand on row " +
                    table.activity_label(worst_row) + " (residual " +
                    csv::format_double(worst_row_abs) + ")",
                {{"row", table.activity_label(worst_row)},
                 {"residual", csv::format_double(worst_row_abs)},
                 {"relative_residual", csv::format_double(worst_row_resid)}});
  }
  if (worst_col_resid > kIdentityRelTol) {
    throw Error(errc::accounting_identity,
                "gross output != intermediate inputs + value added on column " +
                    table.activity_label(worst_col) + " (residual " +
                    csv::format_double(worst_col_abs) + ")",
                {{"column", table.activity_label(worst_col)},
                 {"residual", csv::format_double(worst_col_abs)},
                 {"relative_residual", csv::format_double(worst_col_resid)}});
  }
}

void write_iot(const IOTable& table, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  const std::string year = std::to_string(table.year);
  const Index n = table.n_activities();

  auto country_of = [&](Index a) { return table.countries.code(table.country_of(a)); };
  auto sector_of = [&](Index a) { return table.sectors.id(table.sector_of(a)); };

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (table.Z(i, j) == 0) continue;
      rows.push_back({year, country_of(i), sector_of(i), country_of(j), sector_of(j),
                      csv::format_double(table.Z(i, j))});
    }
    for (Index d = 0; d < table.n_countries(); ++d) {
      if (table.F(i, d) == 0) continue;
      rows.push_back({year, country_of(i), sector_of(i), table.countries.code(d), "FD",
                      csv::format_double(table.F(i, d))});
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (table.va[j] != 0) {
      rows.push_back({year, "TOT", "VA", country_of(j), sector_of(j),
                      csv::format_double(table.va[j])});
    }
    if (table.x[j] != 0) {
      rows.push_back({year, "TOT", "GO", country_of(j), sector_of(j),
                      csv::format_double(table.x[j])});
    }
  }
  csv::write_file(path, {kLongHeader, kLongHeader + 6}, rows);
}

std::optional<AuxVariable> parse_aux_variable(const std::string& name) {
  if (name == "gdp_pc") return AuxVariable::gdp_pc;
  if (name == "capital") return AuxVariable::capital;
  if (name == "population") return AuxVariable::population;
  if (name == "human_capital") return AuxVariable::human_capital;
  if (name == "eci") return AuxVariable::eci;
  if (name == "ef") return AuxVariable::ef;
  return std::nullopt;
}

const char* aux_variable_name(AuxVariable v) {
  switch (v) {
    case AuxVariable::gdp_pc: return "gdp_pc";
    case AuxVariable::capital: return "capital";
    case AuxVariable::population: return "population";
    case AuxVariable::human_capital: return "human_capital";
    case AuxVariable::eci: return "eci";
    case AuxVariable::ef: return "ef";
  }
  return "unknown";
}

const AuxRecord* AuxiliarySeries::find(const std::string& country, int year) const {
  auto it = records.find({country, year});
  return it == records.end() ? nullptr : &it->second;
}

std::optional<double> AuxiliarySeries::value(const std::string& country, int year,
                                             AuxVariable v) const {
  const AuxRecord* rec = find(country, year);
  if (!rec) return std::nullopt;
  switch (v) {
    case AuxVariable::gdp_pc: return rec->gdp_pc;
    case AuxVariable::capital: return rec->capital;
    case AuxVariable::population: return rec->population;
    case AuxVariable::human_capital: return rec->human_capital;
    case AuxVariable::eci: return rec->eci;
    case AuxVariable::ef: return rec->ef;
  }
  return std::nullopt;
}

AuxiliarySeries auxiliary_from_csv(const csv::Table& table, const CountryRegistry& countries,
                                   const AuxLoadOptions& options, const std::string& source) {
  static const char* kAuxHeader[] = {"country", "year", "variable", "value"};
  require_header(table, kAuxHeader, 4, source);

  AuxiliarySeries series;
  std::set<std::tuple<std::string, int, std::string>> seen;

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string context = source + " row " + std::to_string(i + 1);
    if (row.size() != 4) {
      throw Error(errc::parse_error, context + ": expected 4 fields");
    }
    auto country_idx = countries.find(row[0]);
    if (!country_idx) {
      if (options.skip_unknown_countries) {
        series.warnings.push_back(context + ": skipped unknown country " + row[0]);
        continue;
      }
      throw Error(errc::unknown_country, context + ": unknown country code: " + row[0],
                  {{"country", row[0]}});
    }
    const std::string& country = countries.code(*country_idx);
    int year = csv::to_int(row[1], context);
    auto variable = parse_aux_variable(row[2]);
    if (!variable) {
      throw Error(errc::parse_error,
                  context + ": unknown variable '" + row[2] +
                      "' (expected gdp_pc, capital, population, human_capital, eci, ef)");
    }
    double value = csv::to_double(row[3], context);

    const bool strictly_positive = *variable == AuxVariable::gdp_pc ||
                                   *variable == AuxVariable::capital ||
                                   *variable == AuxVariable::population;
    if (strictly_positive && !(value > 0)) {
      throw Error(errc::non_positive_value,
                  context + ": " + row[2] + " must be strictly positive, got " + row[3],
                  {{"country", country}, {"variable", row[2]}, {"value", row[3]}});
    }

    if (!seen.insert({country, year, row[2]}).second) {
      series.warnings.push_back(context + ": duplicate (" + country + ", " + row[1] + ", " +
                                row[2] + "); keeping last value");
    }
    AuxRecord& rec = series.records[{country, year}];
    switch (*variable) {
      case AuxVariable::gdp_pc: rec.gdp_pc = value; break;
      case AuxVariable::capital: rec.capital = value; break;
      case AuxVariable::population: rec.population = value; break;
      case AuxVariable::human_capital: rec.human_capital = value; break;
      case AuxVariable::eci: rec.eci = value; break;
      case AuxVariable::ef: rec.ef = value; break;
    }
  }
  return series;
}

AuxiliarySeries load_auxiliary(const std::filesystem::path& path,
                               const CountryRegistry& countries,
                               const AuxLoadOptions& options) {
  return auxiliary_from_csv(csv::read_file(path), countries, options,
                            path.filename().string());
}

}  // namespace vxf

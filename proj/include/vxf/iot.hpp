#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vxf/csv.hpp"
#include "vxf/registry.hpp"
#include "vxf/types.hpp"

namespace vxf {

struct IngestReport {
  Index clamped_negatives = 0;      // tiny negatives set to zero
  double clamped_mass = 0;          // absolute mass removed by clamping
  Index flagged_negative_fd = 0;    // larger negatives kept in final demand
  double max_row_residual = 0;      // worst accounting residual seen (relative)
  double max_col_residual = 0;
  std::vector<std::string> warnings;
};

// A world input-output table for one year. Activities are indexed
// country-major: activity (c, s) lives at row/column c*S + s.
struct IOTable {
  int year = 0;
  CountryRegistry countries;
  SectorRegistry sectors;
  Matrix Z;   // intermediate flows, (C*S) x (C*S)
  Matrix F;   // final demand by destination country, (C*S) x C
  Vector va;  // value added, C*S
  Vector x;   // gross output, C*S
  IngestReport report;

  Index n_countries() const { return countries.size(); }
  Index n_sectors() const { return sectors.size(); }
  Index n_activities() const { return countries.size() * sectors.size(); }

  Index activity_index(Index country, Index sector) const {
    return country * sectors.size() + sector;
  }
  Index country_of(Index activity) const { return activity / sectors.size(); }
  Index sector_of(Index activity) const { return activity % sectors.size(); }
  std::string activity_label(Index activity) const {
    return countries.code(country_of(activity)) + ":" + sectors.id(sector_of(activity));
  }
};

enum class IotFormat { long_csv, wide_csv };

std::optional<IotFormat> parse_iot_format(const std::string& name);

struct IotLoadOptions {
  IotFormat format = IotFormat::long_csv;
  std::optional<int> year;                       // required when the file holds several years
  std::set<std::string> exclude_fd_categories;   // drop FD:<category> rows on load
};

// Parses, canonicalizes ordering (countries sorted by ISO code) and validates
// the accounting identities. Throws on malformed input or identity violations.
IOTable load_iot(const std::filesystem::path& path, const IotLoadOptions& options = {});
IOTable iot_from_csv(const csv::Table& table, const IotLoadOptions& options,
                     const std::string& source);

// Long-csv writer; load_iot(write_iot(t)) reproduces every cell exactly.
void write_iot(const IOTable& table, const std::filesystem::path& path);

// Negative-entry policy and accounting-identity checks; fills table.report.
// Split out so tests can drive it on hand-built tables.
void validate_iot(IOTable& table);

enum class AuxVariable { gdp_pc, capital, population, human_capital, eci, ef };

std::optional<AuxVariable> parse_aux_variable(const std::string& name);
const char* aux_variable_name(AuxVariable v);

struct AuxRecord {
  std::optional<double> gdp_pc;
  std::optional<double> capital;
  std::optional<double> population;
  std::optional<double> human_capital;
  std::optional<double> eci;  // externally published series, stored as given
  std::optional<double> ef;
};

struct AuxiliarySeries {
  std::map<std::pair<std::string, int>, AuxRecord> records;  // (country, year)
  std::vector<std::string> warnings;

  const AuxRecord* find(const std::string& country, int year) const;
  std::optional<double> value(const std::string& country, int year, AuxVariable v) const;
};

struct AuxLoadOptions {
  bool skip_unknown_countries = false;  // warn instead of erroring
};

// CSV columns: country,year,variable,value. Countries are checked against the
// registry; duplicate (country, year, variable) rows are last-write-wins with
// a warning.
AuxiliarySeries load_auxiliary(const std::filesystem::path& path,
                               const CountryRegistry& countries,
                               const AuxLoadOptions& options = {});
AuxiliarySeries auxiliary_from_csv(const csv::Table& table, const CountryRegistry& countries,
                                   const AuxLoadOptions& options, const std::string& source);

}  // namespace vxf

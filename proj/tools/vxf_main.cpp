// Batch pipeline driver: ingest -> vax -> adjacency -> metrics -> rank ->
// regress, with a reproducibility manifest next to every output. Errors go to
// stderr as JSON with stable codes; exit codes: 0 ok, 2 input, 3 validation,
// 4 non-convergence, 5 degenerate, 6 panel.

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vxf/adjacency.hpp"
#include "vxf/csv.hpp"
#include "vxf/eci.hpp"
#include "vxf/errors.hpp"
#include "vxf/fitness.hpp"
#include "vxf/iot.hpp"
#include "vxf/leontief.hpp"
#include "vxf/manifest.hpp"
#include "vxf/panel.hpp"
#include "vxf/ranking.hpp"
#include "vxf/regression.hpp"
#include "vxf/version.hpp"

namespace fs = std::filesystem;
using vxf::csv::format_double;

namespace {

struct GlobalOptions {
  double tol = 1e-9;
  int max_iter = 1000;
  double rca_threshold = 1.0;
  std::string format = "long-csv";
};

vxf::IotLoadOptions iot_options(const GlobalOptions& global, std::optional<int> year,
                                const std::vector<std::string>& exclude_fd) {
  vxf::IotLoadOptions options;
  auto format = vxf::parse_iot_format(global.format);
  if (!format) {
    throw vxf::Error(vxf::errc::parse_error, "unknown IOT format: " + global.format);
  }
  options.format = *format;
  options.year = year;
  options.exclude_fd_categories.insert(exclude_fd.begin(), exclude_fd.end());
  return options;
}

void emit_manifest(const std::string& command,
                   const std::map<std::string, std::string>& parameters,
                   const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs, const fs::path& manifest_path) {
  vxf::RunManifest manifest;
  manifest.version = vxf::kVersion;
  manifest.command = command;
  manifest.parameters = parameters;
  for (const auto& path : inputs) manifest.inputs.push_back({path, vxf::sha256_file(path)});
  for (const auto& path : outputs) manifest.outputs.push_back({path, vxf::sha256_file(path)});
  vxf::write_manifest(manifest, manifest_path);
}

// A labeled country x activity matrix read from country,activity,value rows.
struct LabeledMatrix {
  vxf::CountryRegistry countries;
  vxf::ActivityRegistry activities;
  vxf::Matrix values;
};

LabeledMatrix read_matrix_csv(const fs::path& path) {
  auto table = vxf::csv::read_file(path);
  const std::string source = path.filename().string();
  if (table.header != std::vector<std::string>{"country", "activity", "value"}) {
    throw vxf::Error(vxf::errc::parse_error,
                     source + ": expected header country,activity,value");
  }
  std::set<std::string> countries, activities;
  for (const auto& row : table.rows) {
    if (row.size() != 3) {
      throw vxf::Error(vxf::errc::parse_error, source + ": expected 3 fields per row");
    }
    countries.insert(row[0]);
    activities.insert(row[1]);
  }
  LabeledMatrix m;
  m.countries = vxf::CountryRegistry::sorted({countries.begin(), countries.end()});
  m.activities = vxf::ActivityRegistry::from_ids({activities.begin(), activities.end()});
  m.values = vxf::Matrix::Zero(m.countries.size(), m.activities.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    m.values(m.countries.index_of(row[0]), m.activities.index_of(row[1])) +=
        vxf::csv::to_double(row[2], source + " row " + std::to_string(i + 1));
  }
  return m;
}

void write_matrix_csv(const fs::path& path, const vxf::CountryRegistry& countries,
                      const vxf::ActivityRegistry& activities, const vxf::Matrix& values) {
  std::vector<std::vector<std::string>> rows;
  for (vxf::Index c = 0; c < countries.size(); ++c) {
    for (vxf::Index a = 0; a < activities.size(); ++a) {
      rows.push_back({countries.code(c), activities.id(a), format_double(values(c, a))});
    }
  }
  vxf::csv::write_file(path, {"country", "activity", "value"}, rows);
}

vxf::VaxMatrix read_vax_csv(const fs::path& path, std::optional<int> year_filter) {
  auto table = vxf::csv::read_file(path);
  const std::string source = path.filename().string();
  if (table.header != std::vector<std::string>{"year", "country", "sector", "vax"}) {
    throw vxf::Error(vxf::errc::parse_error,
                     source + ": expected header year,country,sector,vax");
  }
  std::set<int> years;
  std::set<std::string> countries, sectors;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string context = source + " row " + std::to_string(i + 1);
    if (row.size() != 4) throw vxf::Error(vxf::errc::parse_error, context + ": expected 4 fields");
    int year = vxf::csv::to_int(row[0], context);
    if (year_filter && year != *year_filter) continue;
    years.insert(year);
    countries.insert(row[1]);
    sectors.insert(row[2]);
  }
  if (years.empty()) {
    throw vxf::Error(vxf::errc::parse_error, source + ": no rows selected");
  }
  if (years.size() > 1) {
    throw vxf::Error(vxf::errc::parse_error, source + ": multiple years; pass --year");
  }

  vxf::VaxMatrix vax;
  vax.year = *years.begin();
  vax.countries = vxf::CountryRegistry::sorted({countries.begin(), countries.end()});
  vax.sectors = vxf::SectorRegistry::from_ids({sectors.begin(), sectors.end()});
  vax.values = vxf::Matrix::Zero(vax.countries.size(), vax.sectors.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string context = source + " row " + std::to_string(i + 1);
    if (year_filter && vxf::csv::to_int(row[0], context) != *year_filter) continue;
    double value = vxf::csv::to_double(row[3], context);
    if (value < 0) {
      throw vxf::Error(vxf::errc::non_positive_value, context + ": negative VAX value");
    }
    vax.values(vax.countries.index_of(row[1]), vax.sectors.index_of(row[2])) += value;
  }
  return vax;
}

void write_vax_csv(const vxf::VaxMatrix& vax, const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (vxf::Index c = 0; c < vax.countries.size(); ++c) {
    for (vxf::Index s = 0; s < vax.sectors.size(); ++s) {
      rows.push_back({std::to_string(vax.year), vax.countries.code(c), vax.sectors.id(s),
                      format_double(vax.values(c, s))});
    }
  }
  vxf::csv::write_file(path, {"year", "country", "sector", "vax"}, rows);
}

// Scores files: either the metrics output
// (country,metric,year,value,rank,converged,iterations) or plain
// country,year,value rows.
vxf::ScoresByYear read_scores_csv(const fs::path& path) {
  auto table = vxf::csv::read_file(path);
  const std::string source = path.filename().string();
  vxf::ScoresByYear scores;
  std::size_t country_col = 0, year_col = 0, value_col = 0;
  if (table.header == std::vector<std::string>{"country", "year", "value"}) {
    year_col = 1;
    value_col = 2;
  } else if (table.header.size() >= 4 && table.header[0] == "country" &&
             table.header[2] == "year" && table.header[3] == "value") {
    year_col = 2;
    value_col = 3;
  } else {
    throw vxf::Error(vxf::errc::parse_error,
                     source + ": expected country,year,value or metrics-output header");
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string context = source + " row " + std::to_string(i + 1);
    if (row.size() <= value_col) {
      throw vxf::Error(vxf::errc::parse_error, context + ": short row");
    }
    scores[vxf::csv::to_int(row[year_col], context)][row[country_col]] =
        vxf::csv::to_double(row[value_col], context);
  }
  return scores;
}

std::vector<std::pair<std::string, double>> read_country_values(const fs::path& path) {
  auto table = vxf::csv::read_file(path);
  const std::string source = path.filename().string();
  std::size_t country_col = 0, value_col = 0;
  if (table.header == std::vector<std::string>{"country", "value"}) {
    value_col = 1;
  } else if (table.header.size() >= 4 && table.header[0] == "country" &&
             table.header[3] == "value") {
    value_col = 3;  // metrics output
  } else {
    throw vxf::Error(vxf::errc::parse_error, source + ": expected country,value rows");
  }
  std::vector<std::pair<std::string, double>> values;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    values.emplace_back(row[country_col],
                        vxf::csv::to_double(row[value_col],
                                            source + " row " + std::to_string(i + 1)));
  }
  return values;
}

// Pre-scan so the auxiliary file defines its own registry; panel candidates
// are restricted separately.
vxf::CountryRegistry aux_country_registry(const fs::path& path) {
  auto table = vxf::csv::read_file(path);
  std::set<std::string> countries;
  for (const auto& row : table.rows) {
    if (!row.empty()) countries.insert(row[0]);
  }
  return vxf::CountryRegistry::sorted({countries.begin(), countries.end()});
}

int run_ingest(const GlobalOptions& global, const std::string& input,
               std::optional<int> year, const std::vector<std::string>& exclude_fd,
               const std::string& out) {
  vxf::IOTable iot = vxf::load_iot(input, iot_options(global, year, exclude_fd));
  std::cout << "loaded " << input << ": year " << iot.year << ", " << iot.n_countries()
            << " countries x " << iot.n_sectors() << " sectors (" << iot.n_activities()
            << " activities)\n";
  std::cout << "  clamped tiny negatives: " << iot.report.clamped_negatives << " (mass "
            << format_double(iot.report.clamped_mass) << ")\n";
  std::cout << "  negative final-demand entries kept: " << iot.report.flagged_negative_fd
            << "\n";
  std::cout << "  worst accounting residual (relative): row "
            << format_double(iot.report.max_row_residual) << ", column "
            << format_double(iot.report.max_col_residual) << "\n";
  for (const auto& warning : iot.report.warnings) std::cout << "  warning: " << warning << "\n";
  if (!out.empty()) {
    vxf::write_iot(iot, out);
    emit_manifest("ingest",
                  {{"format", global.format}, {"year", std::to_string(iot.year)}},
                  {input}, {out}, out + ".manifest.json");
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int run_vax(const GlobalOptions& global, const std::string& iot_path, std::optional<int> year,
            const std::vector<std::string>& exclude_fd, const std::string& out) {
  vxf::IOTable iot = vxf::load_iot(iot_path, iot_options(global, year, exclude_fd));
  vxf::LeontiefSystem sys = vxf::build_leontief(iot);
  vxf::VaxMatrix vax = vxf::compute_vax(sys, iot);
  vxf::VaxReport report = vxf::vax_accounting_report(vax, iot);

  write_vax_csv(vax, out);
  const std::string report_path = fs::path(out).replace_extension().string() + "_report.csv";
  std::vector<std::vector<std::string>> rows;
  for (const auto& line : report.lines) {
    rows.push_back({line.country, format_double(line.total),
                    format_double(line.share_of_world_va), format_double(line.gross_exports),
                    line.exceeds_gross_exports ? "true" : "false"});
  }
  vxf::csv::write_file(report_path,
                       {"country", "total_vax", "share_of_world_va", "gross_exports",
                        "exceeds_gross_exports"},
                       rows);

  emit_manifest("vax", {{"format", global.format}, {"year", std::to_string(iot.year)}},
                {iot_path}, {out, report_path}, out + ".manifest.json");

  std::cout << "year " << vax.year << ": world VA " << format_double(report.world_va)
            << ", world VAX " << format_double(report.world_vax) << "\n";
  if (vax.clamped_cells > 0) {
    std::cout << "  clamped " << vax.clamped_cells << " negative cells (mass "
              << format_double(vax.clamped_mass) << ")\n";
  }
  std::cout << "wrote " << out << " and " << report_path << "\n";
  return 0;
}

int run_adjacency(const GlobalOptions& global, const std::string& kind,
                  const std::string& exports_path, const std::string& iot_path,
                  const std::string& vax_path, std::optional<int> year,
                  const std::string& out) {
  std::vector<std::string> inputs;
  if (kind == "weighted") {
    if (vax_path.empty()) {
      throw vxf::Error(vxf::errc::parse_error, "--kind weighted needs --vax");
    }
    vxf::VaxMatrix vax = read_vax_csv(vax_path, year);
    vxf::WeightedAdjacency adj = vxf::weighted_adjacency(vax);
    write_matrix_csv(out, adj.countries, adj.activities, adj.W);
    for (const auto& id : adj.dropped_activities) {
      std::cout << "dropped zero-total industry: " << id << "\n";
    }
    inputs = {vax_path};
  } else {
    LabeledMatrix exports;
    if (!exports_path.empty()) {
      exports = read_matrix_csv(exports_path);
      inputs = {exports_path};
    } else if (!iot_path.empty()) {
      vxf::IOTable iot = vxf::load_iot(iot_path, iot_options(global, year, {}));
      vxf::ExportMatrix gross = vxf::gross_export_matrix(iot);
      exports = {gross.countries, gross.activities, gross.values};
      inputs = {iot_path};
    } else {
      throw vxf::Error(vxf::errc::parse_error, "--kind " + kind + " needs --exports or --iot");
    }
    vxf::Matrix rca_values = vxf::rca(exports.values);
    if (kind == "rca") {
      write_matrix_csv(out, exports.countries, exports.activities, rca_values);
    } else {
      write_matrix_csv(out, exports.countries, exports.activities,
                       vxf::binarize(rca_values, global.rca_threshold));
    }
  }
  emit_manifest("adjacency",
                {{"kind", kind}, {"rca_threshold", format_double(global.rca_threshold)}},
                inputs, {out}, out + ".manifest.json");
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_metrics(const GlobalOptions& global, const std::string& metric,
                const std::string& adjacency_path, const std::string& vax_path,
                std::optional<int> year, const std::string& eci_method, int eci_level,
                const std::string& out, const std::string& industry_out) {
  vxf::CountryRegistry countries;
  vxf::ActivityRegistry activities;
  vxf::Matrix matrix;
  std::vector<std::string> inputs;
  int out_year = year.value_or(0);

  if (metric == "vxf") {
    if (vax_path.empty()) {
      throw vxf::Error(vxf::errc::parse_error, "--metric vxf needs --vax");
    }
    vxf::VaxMatrix vax = read_vax_csv(vax_path, year);
    out_year = vax.year;
    vxf::WeightedAdjacency adj = vxf::weighted_adjacency(vax);
    for (const auto& id : adj.dropped_activities) {
      std::cout << "dropped zero-total industry: " << id << "\n";
    }
    countries = adj.countries;
    activities = adj.activities;
    matrix = adj.W;
    inputs = {vax_path};
  } else {
    if (adjacency_path.empty()) {
      throw vxf::Error(vxf::errc::parse_error, "--metric " + metric + " needs --adjacency");
    }
    LabeledMatrix m = read_matrix_csv(adjacency_path);
    countries = m.countries;
    activities = m.activities;
    matrix = m.values;
    inputs = {adjacency_path};
  }

  std::vector<std::vector<std::string>> rows;
  bool converged = true;
  int iterations = 0;

  if (metric == "eci") {
    vxf::EciResult eci;
    if (eci_method == "eigenvector") {
      eci = vxf::eci_eigenvector(matrix);
    } else {
      eci = vxf::eci_reflections(matrix, eci_level).result;
    }
    iterations = eci.level;
    if (static_cast<vxf::Index>(eci.countries.size()) < countries.size()) {
      std::cout << "note: "
                << countries.size() - static_cast<vxf::Index>(eci.countries.size())
                << " countries without support were dropped\n";
    }
    std::vector<std::pair<std::string, double>> scores;
    for (std::size_t i = 0; i < eci.countries.size(); ++i) {
      scores.emplace_back(countries.code(eci.countries[i]),
                          eci.eci[static_cast<vxf::Index>(i)]);
    }
    for (const auto& entry : vxf::rank(scores)) {
      rows.push_back({entry.country, metric, std::to_string(out_year),
                      format_double(entry.score), std::to_string(entry.rank), "true",
                      std::to_string(iterations)});
    }
  } else {
    vxf::FitnessOptions options;
    options.tol = global.tol;
    options.max_iter = global.max_iter;
    vxf::FitnessResult fit = vxf::fitness(matrix, options);
    converged = fit.converged;
    iterations = fit.iterations;
    for (vxf::Index c : fit.floored_countries) {
      std::cout << "note: fitness ~ 0 for " << countries.code(c) << " (floored)\n";
    }
    std::vector<std::pair<std::string, double>> scores;
    for (vxf::Index c = 0; c < countries.size(); ++c) {
      scores.emplace_back(countries.code(c), fit.fitness[c]);
    }
    for (const auto& entry : vxf::rank(scores)) {
      rows.push_back({entry.country, metric, std::to_string(out_year),
                      format_double(entry.score), std::to_string(entry.rank),
                      converged ? "true" : "false", std::to_string(iterations)});
    }
    if (!industry_out.empty()) {
      std::vector<std::vector<std::string>> q_rows;
      for (vxf::Index s = 0; s < activities.size(); ++s) {
        q_rows.push_back({activities.id(s), format_double(fit.industry_complexity[s])});
      }
      vxf::csv::write_file(industry_out, {"activity", "complexity"}, q_rows);
    }
  }

  vxf::csv::write_file(
      out, {"country", "metric", "year", "value", "rank", "converged", "iterations"}, rows);
  std::map<std::string, std::string> params = {{"metric", metric},
                                               {"tol", format_double(global.tol)},
                                               {"max_iter", std::to_string(global.max_iter)}};
  if (metric == "eci") {
    params["eci_method"] = eci_method;
    params["eci_level"] = std::to_string(eci_level);
  }
  std::vector<std::string> outputs = {out};
  if (!industry_out.empty() && metric != "eci") outputs.push_back(industry_out);
  emit_manifest("metrics", params, inputs, outputs, out + ".manifest.json");
  std::cout << "wrote " << out << "\n";

  if (!converged) {
    throw vxf::Error(vxf::errc::non_convergence,
                     "did not converge within " + std::to_string(global.max_iter) +
                         " iterations (partial output flagged in " + out + ")",
                     {{"iterations", std::to_string(iterations)}, {"output", out}});
  }
  return 0;
}

int run_rank(const std::string& scores_path, const std::string& out) {
  auto ranking = vxf::rank(read_country_values(scores_path));
  std::vector<std::vector<std::string>> rows;
  for (const auto& entry : ranking) {
    rows.push_back({std::to_string(entry.rank), entry.country, format_double(entry.score)});
  }
  vxf::csv::write_file(out, {"rank", "country", "score"}, rows);
  emit_manifest("rank", {}, {scores_path}, {out}, out + ".manifest.json");
  std::cout << "wrote " << out << "\n";
  return 0;
}

std::map<std::string, std::string> display_names_for(const std::string& metric,
                                                     vxf::MetricTransform transform) {
  std::string upper = metric;
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const bool log_form = transform == vxf::MetricTransform::log_difference;
  return {
      {"y_lag", "lag log(GDPpc)"},
      {"n", "pop growth"},
      {"dlogK", "dlog(K)"},
      {"dC", log_form ? "dlog(" + upper + ")" : "d(" + upper + ")"},
      {"C_lag", log_form ? "lag log(" + upper + ")" : "lag " + upper},
      {"dlogH", "dlog(H)"},
      {"logH_lag", "lag log(H)"},
  };
}

int run_regress(const std::string& aux_path, const std::string& scores_path,
                bool use_aux_series, const std::string& metric,
                const std::string& transform_name, const std::string& spec,
                const std::string& hc_name, bool allow_incomplete,
                const std::string& out_prefix) {
  vxf::CountryRegistry aux_registry = aux_country_registry(aux_path);
  vxf::AuxiliarySeries aux = vxf::load_auxiliary(aux_path, aux_registry);
  for (const auto& warning : aux.warnings) std::cout << "warning: " << warning << "\n";

  vxf::ScoresByYear scores;
  std::vector<std::string> inputs = {aux_path};
  if (use_aux_series) {
    if (metric == "vxf") {
      throw vxf::Error(vxf::errc::parse_error, "vxf has no published series; pass --scores");
    }
    auto variable = metric == "eci" ? vxf::AuxVariable::eci : vxf::AuxVariable::ef;
    for (const auto& [key, record] : aux.records) {
      auto value = aux.value(key.first, key.second, variable);
      if (value) scores[key.second][key.first] = *value;
    }
  } else {
    if (scores_path.empty()) {
      throw vxf::Error(vxf::errc::parse_error, "pass --scores or --use-aux-series");
    }
    scores = read_scores_csv(scores_path);
    inputs.push_back(scores_path);
  }

  vxf::MetricTransform transform;
  if (transform_name == "log") {
    transform = vxf::MetricTransform::log_difference;
  } else if (transform_name == "level") {
    transform = vxf::MetricTransform::level_difference;
  } else {
    transform = metric == "eci" ? vxf::MetricTransform::level_difference
                                : vxf::MetricTransform::log_difference;
  }

  // Panel candidates: the countries the scores cover.
  std::set<std::string> score_countries;
  for (const auto& [score_year, by_country] : scores) {
    for (const auto& [country, value] : by_country) score_countries.insert(country);
  }
  vxf::CountryRegistry candidates =
      vxf::CountryRegistry::sorted({score_countries.begin(), score_countries.end()});

  vxf::PanelDataset panel = vxf::build_panel(aux, scores, transform, candidates);
  if (!panel.complete() && !allow_incomplete) {
    std::string missing;
    for (const auto& [country, miss_year] : panel.report.missing) {
      if (!missing.empty()) missing += "; ";
      missing += country + "@" + std::to_string(miss_year);
    }
    std::string rejected;
    for (const auto& reason : panel.report.rejected) {
      if (!rejected.empty()) rejected += " | ";
      rejected += reason;
    }
    throw vxf::Error(vxf::errc::panel_incomplete,
                     "panel incomplete: " + std::to_string(panel.report.rejected.size()) +
                         " (country, period) rows rejected",
                     {{"missing", missing}, {"rejected", rejected}});
  }
  for (const auto& reason : panel.report.rejected) {
    std::cout << "rejected: " << reason << "\n";
  }

  auto hc = vxf::parse_hc_type(hc_name);
  if (!hc) throw vxf::Error(vxf::errc::parse_error, "unknown HC type: " + hc_name);

  vxf::RegressionResult result;
  if (spec == "fd-dynamic") {
    result = vxf::fit_fd_dynamic(panel, *hc);
  } else {
    result = vxf::fit_within_fe(panel, *hc);
  }

  const std::string coef_path = out_prefix + "_coefficients.csv";
  const std::string table_path = out_prefix + "_table.txt";
  const std::string scatter_path = out_prefix + "_scatter.csv";

  std::vector<std::vector<std::string>> coef_rows;
  for (std::size_t j = 0; j < result.names.size(); ++j) {
    auto idx = static_cast<vxf::Index>(j);
    coef_rows.push_back({result.names[j], format_double(result.coef[idx]),
                         format_double(result.robust_se[idx]),
                         format_double(result.t_stats[idx]),
                         format_double(result.p_values[idx]),
                         vxf::significance_stars(result.p_values[idx])});
  }
  coef_rows.push_back({"r2", format_double(result.r2), "", "", "", ""});
  coef_rows.push_back({"adj_r2", format_double(result.adj_r2), "", "", "", ""});
  coef_rows.push_back({"r2_overall", format_double(result.r2_overall), "", "", "", ""});
  coef_rows.push_back({"n_obs", std::to_string(result.n_obs), "", "", "", ""});
  vxf::csv::write_file(coef_path, {"name", "estimate", "robust_se", "t", "p", "stars"},
                       coef_rows);

  const std::string rendered = vxf::render_table(result, display_names_for(metric, transform));
  {
    std::ofstream table_file(table_path, std::ios::binary);
    table_file << rendered;
  }
  std::cout << rendered;

  // Fig.-1-style scatter: 2000-2014 metric growth against GDP pc growth.
  std::vector<vxf::ScatterPoint> points;
  for (const auto& country : candidates.codes()) {
    auto y0 = aux.value(country, 2000, vxf::AuxVariable::gdp_pc);
    auto y1 = aux.value(country, 2014, vxf::AuxVariable::gdp_pc);
    std::optional<double> c0, c1;
    if (auto it = scores.find(2000); it != scores.end()) {
      if (auto jt = it->second.find(country); jt != it->second.end()) c0 = jt->second;
    }
    if (auto it = scores.find(2014); it != scores.end()) {
      if (auto jt = it->second.find(country); jt != it->second.end()) c1 = jt->second;
    }
    if (!y0 || !y1 || !c0 || !c1) continue;
    vxf::ScatterPoint pt;
    pt.country = country;
    pt.gdp_growth = std::log(*y1) - std::log(*y0);
    if (transform == vxf::MetricTransform::log_difference) {
      if (*c0 <= 0 || *c1 <= 0) continue;
      pt.metric_growth = std::log(*c1) - std::log(*c0);
    } else {
      pt.metric_growth = *c1 - *c0;
    }
    points.push_back(std::move(pt));
  }
  std::vector<std::vector<std::string>> scatter_rows;
  for (const auto& pt : points) {
    scatter_rows.push_back(
        {pt.country, format_double(pt.metric_growth), format_double(pt.gdp_growth)});
  }
  vxf::csv::write_file(scatter_path, {"country", "metric_growth", "gdp_growth"}, scatter_rows);
  if (points.size() >= 3) {
    vxf::SimpleOls uncond = vxf::unconditional_correlation(points);
    std::cout << "unconditional 2000-2014: slope " << format_double(uncond.slope) << ", R2 "
              << format_double(uncond.r2) << " (" << uncond.n_obs << " countries)\n";
  }

  emit_manifest("regress",
                {{"metric", metric},
                 {"spec", spec},
                 {"transform", transform_name},
                 {"hc", hc_name}},
                inputs, {coef_path, table_path, scatter_path}, out_prefix + ".manifest.json");
  return 0;
}

int run_manifest_check(const std::string& path) {
  auto mismatches = vxf::check_manifest(path);
  if (mismatches.empty()) {
    std::cout << "manifest verified: all digests match\n";
    return 0;
  }
  for (const auto& line : mismatches) std::cout << line << "\n";
  throw vxf::Error(vxf::errc::accounting_identity,
                   std::to_string(mismatches.size()) + " manifest digests do not match",
                   {{"manifest", path}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"economic-complexity metrics from inter-country input-output tables"};
  app.set_version_flag("--version", vxf::kVersion);
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--tol", global.tol, "fixed-point tolerance (max-norm)");
  app.add_option("--max-iter", global.max_iter, "iteration cap");
  app.add_option("--rca-threshold", global.rca_threshold, "RCA binarization threshold");
  app.add_option("--format", global.format, "IOT file format")
      ->check(CLI::IsMember({"long-csv", "wide-csv"}));

  int exit_status = 0;

  {
    auto* cmd = app.add_subcommand("ingest", "parse and validate an input-output table");
    cmd->fallthrough();
    auto input = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto year = std::make_shared<int>(-1);
    auto exclude_fd = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--input", *input, "IOT file")->required();
    cmd->add_option("--year", *year, "select one year from a multi-year file");
    cmd->add_option("--out", *out, "write the canonical long-csv back");
    cmd->add_option("--exclude-fd-category", *exclude_fd, "drop FD:<category> rows");
    cmd->callback([&, input, out, year, exclude_fd] {
      exit_status = run_ingest(global, *input,
                               *year >= 0 ? std::optional<int>(*year) : std::nullopt,
                               *exclude_fd, *out);
    });
  }

  {
    auto* cmd = app.add_subcommand("vax", "value-added export decomposition");
    cmd->fallthrough();
    auto iot = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto year = std::make_shared<int>(-1);
    auto exclude_fd = std::make_shared<std::vector<std::string>>();
    cmd->add_option("--iot", *iot, "IOT file")->required();
    cmd->add_option("--year", *year, "select one year");
    cmd->add_option("--out", *out, "output CSV (year,country,sector,vax)")->required();
    cmd->add_option("--exclude-fd-category", *exclude_fd, "drop FD:<category> rows");
    cmd->callback([&, iot, out, year, exclude_fd] {
      exit_status = run_vax(global, *iot,
                            *year >= 0 ? std::optional<int>(*year) : std::nullopt,
                            *exclude_fd, *out);
    });
  }

  {
    auto* cmd = app.add_subcommand("adjacency", "RCA, binary or weighted adjacency matrices");
    cmd->fallthrough();
    auto kind = std::make_shared<std::string>("binary");
    auto exports = std::make_shared<std::string>();
    auto iot = std::make_shared<std::string>();
    auto vax = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto year = std::make_shared<int>(-1);
    cmd->add_option("--kind", *kind, "rca, binary or weighted")
        ->check(CLI::IsMember({"rca", "binary", "weighted"}));
    cmd->add_option("--exports", *exports, "gross exports CSV (country,activity,value)");
    cmd->add_option("--iot", *iot, "derive gross exports from an IOT file");
    cmd->add_option("--vax", *vax, "VAX CSV for --kind weighted");
    cmd->add_option("--year", *year, "select one year");
    cmd->add_option("--out", *out, "output CSV (country,activity,value)")->required();
    cmd->callback([&, kind, exports, iot, vax, year, out] {
      exit_status = run_adjacency(global, *kind, *exports, *iot, *vax,
                                  *year >= 0 ? std::optional<int>(*year) : std::nullopt, *out);
    });
  }

  {
    auto* cmd = app.add_subcommand("metrics", "fitness (vxf, ef) or ECI scores with ranking");
    cmd->fallthrough();
    auto metric = std::make_shared<std::string>();
    auto adjacency = std::make_shared<std::string>();
    auto vax = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto industry_out = std::make_shared<std::string>();
    auto eci_method = std::make_shared<std::string>("reflections");
    auto eci_level = std::make_shared<int>(18);
    auto year = std::make_shared<int>(-1);
    cmd->add_option("--metric", *metric, "vxf, ef or eci")
        ->required()
        ->check(CLI::IsMember({"vxf", "ef", "eci"}));
    cmd->add_option("--adjacency", *adjacency, "adjacency CSV for ef/eci");
    cmd->add_option("--vax", *vax, "VAX CSV for vxf");
    cmd->add_option("--year", *year, "year stamp / filter");
    cmd->add_option("--eci-method", *eci_method, "reflections or eigenvector")
        ->check(CLI::IsMember({"reflections", "eigenvector"}));
    cmd->add_option("--eci-level", *eci_level, "reflections level for the reported score");
    cmd->add_option("--out", *out, "scores CSV")->required();
    cmd->add_option("--industry-out", *industry_out, "optional industry-complexity CSV");
    cmd->callback([&, metric, adjacency, vax, out, industry_out, eci_method, eci_level, year] {
      exit_status = run_metrics(global, *metric, *adjacency, *vax,
                                *year >= 0 ? std::optional<int>(*year) : std::nullopt,
                                *eci_method, *eci_level, *out, *industry_out);
    });
  }

  {
    auto* cmd = app.add_subcommand("rank", "rank countries by score");
    cmd->fallthrough();
    auto scores = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--scores", *scores, "scores CSV (country,value or metrics output)")
        ->required();
    cmd->add_option("--out", *out, "ranking CSV")->required();
    cmd->callback([&, scores, out] { exit_status = run_rank(*scores, *out); });
  }

  {
    auto* cmd = app.add_subcommand("regress", "growth regressions on the three-period panel");
    cmd->fallthrough();
    auto aux = std::make_shared<std::string>();
    auto scores = std::make_shared<std::string>();
    auto use_aux_series = std::make_shared<bool>(false);
    auto metric = std::make_shared<std::string>();
    auto transform = std::make_shared<std::string>("auto");
    auto spec = std::make_shared<std::string>("fd-dynamic");
    auto hc = std::make_shared<std::string>("HC1");
    auto allow_incomplete = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--aux", *aux, "auxiliary CSV (country,year,variable,value)")->required();
    cmd->add_option("--scores", *scores, "complexity scores CSV");
    cmd->add_flag("--use-aux-series", *use_aux_series,
                  "take eci/ef values from the auxiliary file");
    cmd->add_option("--metric", *metric, "vxf, ef or eci")
        ->required()
        ->check(CLI::IsMember({"vxf", "ef", "eci"}));
    cmd->add_option("--transform", *transform, "log, level or auto")
        ->check(CLI::IsMember({"log", "level", "auto"}));
    cmd->add_option("--spec", *spec, "fd-dynamic or within-fe")
        ->check(CLI::IsMember({"fd-dynamic", "within-fe"}));
    cmd->add_option("--hc", *hc, "HC0..HC3 robust covariance");
    cmd->add_flag("--allow-incomplete", *allow_incomplete, "fit on the surviving rows");
    cmd->add_option("--out", *out, "output prefix")->required();
    cmd->callback([&, aux, scores, use_aux_series, metric, transform, spec, hc,
                   allow_incomplete, out] {
      exit_status = run_regress(*aux, *scores, *use_aux_series, *metric, *transform, *spec,
                                *hc, *allow_incomplete, *out);
    });
  }

  {
    auto* cmd = app.add_subcommand("manifest", "verify a run manifest");
    cmd->require_subcommand(1);
    auto* check = cmd->add_subcommand("check", "recompute and compare digests");
    auto path = std::make_shared<std::string>();
    check->add_option("path", *path, "manifest JSON")->required();
    check->callback([&, path] { exit_status = run_manifest_check(*path); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const vxf::Error& e) {
    nlohmann::json j;
    j["error"] = {{"code", vxf::name(e.code)}, {"message", e.what()}, {"details", e.details}};
    std::cerr << j.dump() << "\n";
    std::cout << "error: " << e.what() << "\n";
    return vxf::exit_code(e.code);
  } catch (const std::exception& e) {
    nlohmann::json j;
    j["error"] = {{"code", "internal_error"}, {"message", e.what()}};
    std::cerr << j.dump() << "\n";
    return 1;
  }
  return exit_status;
}

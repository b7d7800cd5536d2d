#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vxf::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180-style fields: quoted fields may contain commas and doubled quotes,
// not newlines. Blank lines and lines starting with '#' are skipped.
Table parse(std::istream& in, const std::string& source);
Table read_file(const std::filesystem::path& path);

// Shortest decimal form that round-trips exactly to the same double.
std::string format_double(double value);

double to_double(const std::string& field, const std::string& context);
int to_int(const std::string& field, const std::string& context);

std::string join_row(const std::vector<std::string>& fields);
void write_file(const std::filesystem::path& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

}  // namespace vxf::csv

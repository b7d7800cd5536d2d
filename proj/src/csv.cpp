#include "vxf/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <system_error>

#include "vxf/errors.hpp"

namespace vxf::csv {

namespace {

std::vector<std::string> split_line(const std::string& line, std::size_t line_no,
                                    const std::string& source) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(errc::parse_error,
                source + ":" + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

Table parse(std::istream& in, const std::string& source) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_line(line, line_no, source);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) {
    throw Error(errc::parse_error, source + ": empty file");
  }
  return table;
}

Table read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw Error(errc::input_not_found, "input file not found: " + path.string(),
                {{"path", path.string()}});
  }
  std::ifstream in(path);
  if (!in) {
    throw Error(errc::io_error, "cannot open: " + path.string(),
                {{"path", path.string()}});
  }
  return parse(in, path.filename().string());
}

std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

double to_double(const std::string& field, const std::string& context) {
  double value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  while (ptr != last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(errc::parse_error, context + ": not a number: '" + field + "'");
  }
  return value;
}

int to_int(const std::string& field, const std::string& context) {
  int value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  while (ptr != last && (*ptr == ' ' || *ptr == '\t')) ++ptr;
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(errc::parse_error, context + ": not an integer: '" + field + "'");
  }
  return value;
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line.push_back(',');
    const std::string& f = fields[i];
    if (f.find_first_of(",\"") != std::string::npos) {
      line.push_back('"');
      for (char c : f) {
        if (c == '"') line.push_back('"');
        line.push_back(c);
      }
      line.push_back('"');
    } else {
      line += f;
    }
  }
  return line;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);  // LF line endings on all platforms
  if (!out) {
    throw Error(errc::io_error, "cannot write: " + path.string(),
                {{"path", path.string()}});
  }
  out << join_row(header) << '\n';
  for (const auto& row : rows) out << join_row(row) << '\n';
  if (!out) {
    throw Error(errc::io_error, "write failed: " + path.string(),
                {{"path", path.string()}});
  }
}

}  // namespace vxf::csv

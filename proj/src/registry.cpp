#include "vxf/registry.hpp"

#include <algorithm>
#include <cctype>

#include "vxf/errors.hpp"

namespace vxf {

namespace {

std::string uppercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

CountryRegistry CountryRegistry::from_codes(std::vector<std::string> codes) {
  CountryRegistry reg;
  reg.codes_.reserve(codes.size());
  for (auto& raw : codes) {
    std::string code = uppercase(std::move(raw));
    if (code.empty() ||
        !std::all_of(code.begin(), code.end(), [](unsigned char c) { return std::isalnum(c); })) {
      throw Error(errc::parse_error, "invalid country code: '" + code + "'");
    }
    auto [it, inserted] = reg.index_.emplace(code, static_cast<Index>(reg.codes_.size()));
    if (!inserted) {
      throw Error(errc::parse_error, "duplicate country code: " + code);
    }
    reg.codes_.push_back(std::move(code));
  }
  return reg;
}

CountryRegistry CountryRegistry::sorted(std::vector<std::string> codes) {
  for (auto& c : codes) c = uppercase(std::move(c));
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return from_codes(std::move(codes));
}

std::optional<Index> CountryRegistry::find(const std::string& code) const {
  // Lookups fold case the same way construction does.
  auto it = index_.find(uppercase(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Index CountryRegistry::index_of(const std::string& code) const {
  auto idx = find(code);
  if (!idx) {
    throw Error(errc::unknown_country, "unknown country code: " + code,
                {{"country", code}});
  }
  return *idx;
}

SectorRegistry SectorRegistry::from_ids(std::vector<std::string> ids,
                                        std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != ids.size()) {
    throw Error(errc::dimension_mismatch, "sector labels do not match ids");
  }
  SectorRegistry reg;
  reg.ids_.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::string& id = ids[i];
    if (id.empty()) {
      throw Error(errc::parse_error, "empty sector id");
    }
    auto [it, inserted] = reg.index_.emplace(id, static_cast<Index>(reg.ids_.size()));
    if (!inserted) {
      throw Error(errc::parse_error, "duplicate sector id: " + id);
    }
    reg.labels_.push_back(labels.empty() ? id : std::move(labels[i]));
    reg.ids_.push_back(std::move(id));
  }
  return reg;
}

std::optional<Index> SectorRegistry::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Index SectorRegistry::index_of(const std::string& id) const {
  auto idx = find(id);
  if (!idx) {
    throw Error(errc::parse_error, "unknown sector id: " + id, {{"sector", id}});
  }
  return *idx;
}

}  // namespace vxf

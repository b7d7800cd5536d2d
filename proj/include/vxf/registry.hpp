#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vxf/types.hpp"

namespace vxf {

// Ordered set of ISO 3166-1 alpha-3 country codes. The order is fixed at
// construction and defines matrix row order everywhere downstream.
class CountryRegistry {
 public:
  CountryRegistry() = default;

  // Uppercases, validates and keeps the given order.
  static CountryRegistry from_codes(std::vector<std::string> codes);
  // Canonical form: lexicographically sorted codes.
  static CountryRegistry sorted(std::vector<std::string> codes);

  Index size() const { return static_cast<Index>(codes_.size()); }
  const std::vector<std::string>& codes() const { return codes_; }
  const std::string& code(Index i) const { return codes_.at(i); }

  std::optional<Index> find(const std::string& code) const;
  Index index_of(const std::string& code) const;  // throws unknown_country
  bool contains(const std::string& code) const { return find(code).has_value(); }

 private:
  std::vector<std::string> codes_;
  std::unordered_map<std::string, Index> index_;
};

// Ordered list of industry (or product) identifiers with optional labels.
class SectorRegistry {
 public:
  SectorRegistry() = default;

  static SectorRegistry from_ids(std::vector<std::string> ids,
                                 std::vector<std::string> labels = {});

  Index size() const { return static_cast<Index>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(Index i) const { return ids_.at(i); }
  const std::string& label(Index i) const { return labels_.at(i); }

  std::optional<Index> find(const std::string& id) const;
  Index index_of(const std::string& id) const;  // throws parse_error
  bool contains(const std::string& id) const { return find(id).has_value(); }

 private:
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Index> index_;
};

// Products and sectors share the registry machinery.
using ActivityRegistry = SectorRegistry;

}  // namespace vxf

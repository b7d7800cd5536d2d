#pragma once

#include <string>
#include <utility>
#include <vector>

namespace vxf {

struct RankEntry {
  int rank = 0;  // 1-based
  std::string country;
  double score = 0;
};

// Descending by score; ties broken lexicographically by country code.
std::vector<RankEntry> rank(std::vector<std::pair<std::string, double>> scores);

}  // namespace vxf

#include "vxf/ranking.hpp"

#include <algorithm>
#include <cmath>

#include "vxf/errors.hpp"

namespace vxf {

std::vector<RankEntry> rank(std::vector<std::pair<std::string, double>> scores) {
  for (const auto& [country, score] : scores) {
    if (!std::isfinite(score)) {
      throw Error(errc::non_finite, "non-finite score for " + country,
                  {{"country", country}});
    }
  }
  std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<RankEntry> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out.push_back({static_cast<int>(i + 1), scores[i].first, scores[i].second});
  }
  return out;
}

}  // namespace vxf

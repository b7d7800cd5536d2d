#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fixtures {

// 2 countries (AAA, BBB), 1 sector. Z = I, x = (4, 8), va = (3, 7).
inline std::string two_country_long_csv() {
  return R"(year,origin_country,origin_sector,dest_country,dest_sector_or_FD,value
2014,AAA,s1,AAA,s1,1
2014,BBB,s1,BBB,s1,1
2014,AAA,s1,AAA,FD,1
2014,AAA,s1,BBB,FD,2
2014,BBB,s1,AAA,FD,3
2014,BBB,s1,BBB,FD,4
2014,TOT,VA,AAA,s1,3
2014,TOT,VA,BBB,s1,7
2014,TOT,GO,AAA,s1,4
2014,TOT,GO,BBB,s1,8
)";
}

// Desk-scale 3-country (AAA, BBB, CCC), 2-sector (m, v) table. Activities in
// canonical order: (AAA,m) (AAA,v) (BBB,m) (BBB,v) (CCC,m) (CCC,v);
// x = (9, 7, 8, 7, 7, 7), va = (5, 5, 4, 5, 4, 4).
inline std::string desk_long_csv() {
  return R"(year,origin_country,origin_sector,dest_country,dest_sector_or_FD,value
2014,AAA,m,AAA,m,2
2014,AAA,m,BBB,m,1
2014,AAA,m,CCC,m,1
2014,AAA,v,AAA,v,1
2014,AAA,v,BBB,v,2
2014,BBB,m,AAA,m,1
2014,BBB,m,BBB,m,3
2014,BBB,v,CCC,v,2
2014,CCC,m,CCC,m,2
2014,CCC,m,AAA,m,1
2014,CCC,v,AAA,v,1
2014,CCC,v,CCC,v,1
2014,AAA,m,AAA,FD,3
2014,AAA,m,BBB,FD,1
2014,AAA,m,CCC,FD,1
2014,AAA,v,AAA,FD,2
2014,AAA,v,BBB,FD,1
2014,AAA,v,CCC,FD,1
2014,BBB,m,AAA,FD,1
2014,BBB,m,BBB,FD,2
2014,BBB,m,CCC,FD,1
2014,BBB,v,AAA,FD,1
2014,BBB,v,BBB,FD,3
2014,BBB,v,CCC,FD,1
2014,CCC,m,AAA,FD,1
2014,CCC,m,BBB,FD,1
2014,CCC,m,CCC,FD,2
2014,CCC,v,AAA,FD,1
2014,CCC,v,BBB,FD,1
2014,CCC,v,CCC,FD,3
2014,TOT,VA,AAA,m,5
2014,TOT,VA,AAA,v,5
2014,TOT,VA,BBB,m,4
2014,TOT,VA,BBB,v,5
2014,TOT,VA,CCC,m,4
2014,TOT,VA,CCC,v,4
2014,TOT,GO,AAA,m,9
2014,TOT,GO,AAA,v,7
2014,TOT,GO,BBB,m,8
2014,TOT,GO,BBB,v,7
2014,TOT,GO,CCC,m,7
2014,TOT,GO,CCC,v,7
)";
}

// The two-country table in the wide layout, with columns deliberately out of
// canonical order.
inline std::string two_country_wide_csv() {
  return R"(year,2014
country,sector,BBB:s1,AAA:s1,FD:BBB,FD:AAA
BBB,s1,1,0,4,3
AAA,s1,0,1,2,1
VA,,7,3,0,0
GO,,8,4,0,0
)";
}

inline std::string auxiliary_csv() {
  return R"(country,year,variable,value
AAA,2014,gdp_pc,52000
AAA,2014,capital,1.5e6
AAA,2014,population,3.2e8
AAA,2014,human_capital,3.7
AAA,2014,eci,1.76
AAA,2014,ef,1.21
BBB,2014,gdp_pc,18000
BBB,2014,capital,8.0e5
BBB,2014,population,1.2e8
)";
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("vxf_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    auto file = path_ / name;
    std::ofstream out(file, std::ios::binary);
    out << content;
    return file;
  }

  std::string read(const std::filesystem::path& file) const {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace fixtures

#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace flqr {

// Fixed CSV float format: 12 significant digits, NaN spelled "nan". Output
// is byte-identical for identical inputs (no timestamps, fixed row order).
std::string csv_float(double v);
std::string csv_int(long v);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    size_t ncols_;
};

} // namespace flqr

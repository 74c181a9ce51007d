#include "flqr/csv.hpp"

#include <cmath>
#include <cstdio>

#include "flqr/error.hpp"

namespace flqr {

std::string csv_float(double v) {
    if (std::isnan(v)) return "nan";
    if (v == 0.0) v = 0.0; // canonicalize the sign of zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

std::string csv_int(long v) { return std::to_string(v); }

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary), ncols_(columns.size()) {
    require(out_.good(), ErrorCode::io, "cannot open " + path + " for writing");
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    require(cells.size() == ncols_, ErrorCode::internal, "csv row width mismatch in " + path_);
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    require(out_.good(), ErrorCode::io, "write failure on " + path_);
}

} // namespace flqr

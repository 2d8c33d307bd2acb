#include "becsq/csv.hpp"

#include <cstdio>

#include "becsq/errors.hpp"

namespace becsq {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), n_cols_(columns.size()) {
    if (!out_) fail(errc::io, "CsvWriter: cannot open " + path);
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
    out_ << "\n";
}

std::string CsvWriter::format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_cols_) fail(errc::io, "CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format(values[i]) << (i + 1 < values.size() ? "," : "");
    out_ << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_) fail(errc::io, "CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
    out_ << "\n";
}

} // namespace becsq

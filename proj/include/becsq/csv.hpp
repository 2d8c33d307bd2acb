#ifndef BECSQ_CSV_HPP
#define BECSQ_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace becsq {

// UTF-8, LF, comma-separated, '.' decimal, mandatory header row. Numeric cells
// use %.12g so repeated runs are byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& cells);

    static std::string format(double v);

private:
    std::ofstream out_;
    std::size_t n_cols_;
};

} // namespace becsq

#endif

#include "qadia/csv.hpp"

#include <cmath>
#include <cstdio>

namespace qadia {

std::string format_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out_ << ',';
        out_ << cols[i];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_num(vals[i]);
    }
    out_ << '\n';
}

}  // namespace qadia
